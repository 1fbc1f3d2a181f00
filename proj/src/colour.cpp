#include "muller/colour.hpp"

#include <algorithm>
#include <set>

namespace muller {

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(std::stoll(text));
    }
    std::int64_t num = std::stoll(text.substr(0, slash));
    std::int64_t den = std::stoll(text.substr(slash + 1));
    if (den <= 0) throw ParseError("bad rational '" + text + "': denominator must be positive");
    return Rational(num, den);
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational '" + text + "'");
  } catch (const std::out_of_range&) {
    throw ParseError("rational out of range '" + text + "'");
  }
}

std::string format_rational(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

bool label_less(ColourSet a, ColourSet b) {
  if (a == b) return false;
  std::uint64_t diff = a.bits() ^ b.bits();
  std::size_t i = static_cast<std::size_t>(__builtin_ctzll(diff));
  // The sorted index sequences agree below i. The set containing i continues
  // with i there, the other with something larger or nothing at all.
  if (a.test(i)) return (b.bits() >> i) != 0;
  return (a.bits() >> i) == 0;
}

ColourAlphabet::ColourAlphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw ParseError("alphabet must not be empty");
  if (names_.size() > 64) throw ParseError("alphabet too large (max 64 colours)");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw ParseError("colour name must not be empty");
    if (!seen.insert(n).second) throw ParseError("duplicate colour '" + n + "'");
  }
}

std::optional<std::size_t> ColourAlphabet::index(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::string ColourAlphabet::set_string(ColourSet s) const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : s.indices()) {
    if (!first) out += ",";
    out += names_[i];
    first = false;
  }
  return out + "}";
}

MullerCondition::MullerCondition(ColourAlphabet alphabet, std::vector<ColourSet> winning)
    : alphabet_(std::move(alphabet)), winning_(std::move(winning)) {
  for (ColourSet s : winning_)
    if (!s.subset_of(alphabet_.all()))
      throw ParseError("winning set not a subset of the alphabet");
  std::sort(winning_.begin(), winning_.end(), label_less);
  winning_.erase(std::unique(winning_.begin(), winning_.end()), winning_.end());
}

bool MullerCondition::contains(ColourSet s) const {
  auto it = std::lower_bound(winning_.begin(), winning_.end(), s, label_less);
  return it != winning_.end() && *it == s;
}

MullerCondition MullerCondition::complement() const {
  if (alphabet_.size() > 24)
    throw Unsupported("complement requires enumerating the powerset; alphabet too large");
  std::vector<ColourSet> out;
  std::uint64_t all = alphabet_.all().bits();
  for (std::uint64_t m = 0;; ++m) {
    ColourSet s(m);
    if (!contains(s)) out.push_back(s);
    if (m == all) break;
  }
  return MullerCondition(alphabet_, std::move(out));
}

bool is_upward_closed(const MullerCondition& condition) {
  return is_upward_closed_within(condition, condition.alphabet().all());
}

bool is_upward_closed_within(const MullerCondition& condition, ColourSet universe) {
  // One-step closure suffices: if U+c stays winning for every c, induction
  // reaches all supersets within the universe.
  for (ColourSet u : condition.winning()) {
    if (!u.subset_of(universe)) continue;
    for (std::size_t c : (universe - u).indices())
      if (!condition.contains(u | ColourSet::single(c))) return false;
  }
  return true;
}

}  // namespace muller
