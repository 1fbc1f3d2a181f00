#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "muller/types.hpp"

namespace muller {

/// A subset of colours of one alphabet, stored as a bitmask over colour
/// indices. Supports at most 64 colours, which is far beyond what explicit
/// set-family input can express anyway.
class ColourSet {
 public:
  constexpr ColourSet() = default;
  constexpr explicit ColourSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr ColourSet empty() { return ColourSet(0); }
  static ColourSet full(std::size_t n) {
    return ColourSet(n >= 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << n) - 1));
  }
  static ColourSet single(std::size_t i) { return ColourSet(std::uint64_t(1) << i); }

  constexpr std::uint64_t bits() const { return bits_; }
  bool test(std::size_t i) const { return (bits_ >> i) & 1; }
  void set(std::size_t i) { bits_ |= std::uint64_t(1) << i; }
  bool is_empty() const { return bits_ == 0; }
  std::size_t count() const { return static_cast<std::size_t>(__builtin_popcountll(bits_)); }

  friend ColourSet operator|(ColourSet a, ColourSet b) { return ColourSet(a.bits_ | b.bits_); }
  friend ColourSet operator&(ColourSet a, ColourSet b) { return ColourSet(a.bits_ & b.bits_); }
  friend ColourSet operator-(ColourSet a, ColourSet b) { return ColourSet(a.bits_ & ~b.bits_); }
  friend bool operator==(ColourSet a, ColourSet b) { return a.bits_ == b.bits_; }
  friend bool operator!=(ColourSet a, ColourSet b) { return a.bits_ != b.bits_; }

  bool subset_of(ColourSet other) const { return (bits_ & ~other.bits_) == 0; }
  bool strict_subset_of(ColourSet other) const {
    return subset_of(other) && bits_ != other.bits_;
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::uint64_t b = bits_; b; b &= b - 1)
      out.push_back(static_cast<std::size_t>(__builtin_ctzll(b)));
    return out;
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Canonical label order: compare the ascending index sequences of the two
/// sets lexicographically. Used to sort siblings in trees and DAGs so every
/// construction is deterministic.
bool label_less(ColourSet a, ColourSet b);

/// The colour alphabet. Iteration order is declaration order and is the
/// canonical order for all deterministic output.
class ColourAlphabet {
 public:
  explicit ColourAlphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index(const std::string& name) const;

  ColourSet all() const { return ColourSet::full(size()); }
  std::string set_string(ColourSet s) const;  // "{a,b,c}"

  friend bool operator==(const ColourAlphabet& a, const ColourAlphabet& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
};

/// A Muller condition: the family of winning colour sets over an alphabet.
/// Members are kept deduplicated and sorted in canonical label order;
/// membership of the empty set is part of the family like any other member.
class MullerCondition {
 public:
  MullerCondition(ColourAlphabet alphabet, std::vector<ColourSet> winning);

  const ColourAlphabet& alphabet() const { return alphabet_; }
  const std::vector<ColourSet>& winning() const { return winning_; }
  bool contains(ColourSet s) const;
  bool empty_wins() const { return contains(ColourSet::empty()); }

  MullerCondition complement() const;

 private:
  ColourAlphabet alphabet_;
  std::vector<ColourSet> winning_;
};

bool is_upward_closed(const MullerCondition& condition);

/// Upward closure of the restriction F|X within the universe X.
bool is_upward_closed_within(const MullerCondition& condition, ColourSet universe);

}  // namespace muller
