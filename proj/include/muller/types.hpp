#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace muller {

enum class Owner { Eve, Adam, Random };

inline const char* owner_name(Owner o) {
  switch (o) {
    case Owner::Eve: return "eve";
    case Owner::Adam: return "adam";
    case Owner::Random: return "random";
  }
  return "?";
}

/// Exact probabilities. Qualitative analysis only looks at supports, but
/// exact arithmetic removes any tolerance questions in file formats and
/// distribution-sum checks.
using Rational = boost::rational<std::int64_t>;

Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};

struct AlphabetMismatch : Error {
  using Error::Error;
};

struct SubarenaError : Error {
  enum class Kind { NotClosed, NotLive };
  SubarenaError(Kind k, std::string st)
      : Error(std::string(k == Kind::NotClosed ? "NotClosed: " : "NotLive: ") + st),
        kind(k),
        state(std::move(st)) {}
  Kind kind;
  std::string state;
};

struct IllegalMove : Error {
  IllegalMove(std::string from, std::string to)
      : Error("IllegalMove: no edge " + from + " -> " + to),
        from(std::move(from)),
        to(std::move(to)) {}
  std::string from, to;
};

struct NotWinningEverywhere : Error {
  explicit NotWinningEverywhere(std::string st)
      : Error("NotWinningEverywhere: " + st), state(std::move(st)) {}
  std::string state;
};

struct BranchMismatch : Error {
  using Error::Error;
};

struct Unsupported : Error {
  using Error::Error;
};

struct ResourceLimit : Error {
  ResourceLimit(std::uint64_t count, std::uint64_t bound)
      : Error("ResourceLimit: " + std::to_string(count) + " candidates exceed bound " +
              std::to_string(bound)),
        count(count),
        bound(bound) {}
  std::uint64_t count, bound;
};

struct StrategyIncomplete : Error {
  StrategyIncomplete(std::string st, std::string mem)
      : Error("StrategyIncomplete: no move for state " + st + " in memory " + mem),
        state(std::move(st)),
        memory(std::move(mem)) {}
  std::string state, memory;
};

struct EmptyChoice : Error {
  using Error::Error;
};

}  // namespace muller
