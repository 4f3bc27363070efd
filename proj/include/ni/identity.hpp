#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ni/error.hpp"

namespace ni {

using Die = std::uint8_t;

inline constexpr int max_dice = 26;

enum class Op : std::uint8_t { equal, less };

constexpr char to_char(Op op) noexcept { return op == Op::less ? '<' : '='; }

constexpr char die_letter(Die d) noexcept { return static_cast<char>('A' + d); }

/// A chain of die-face slots joined by '<' or '='.
///
/// Slot i (i >= 1) is joined to slot i-1 by join(i). Nothing about viability
/// or nontransitivity is implied by construction.
class Identity {
 public:
  Identity() = default;

  explicit Identity(Die first) : dice_{first} {}

  Identity(std::vector<Die> dice, std::vector<Op> joins) : dice_(std::move(dice)), joins_(std::move(joins)) {
    if (dice_.empty() ? !joins_.empty() : joins_.size() + 1 != dice_.size()) {
      throw Error("identity needs exactly one operator between consecutive slots");
    }
    for (Die d : dice_) {
      if (d >= max_dice) throw Error("die label out of range");
    }
  }

  void push(Op op, Die d) {
    if (d >= max_dice) throw Error("die label out of range");
    if (dice_.empty()) {
      dice_.push_back(d);
      return;
    }
    joins_.push_back(op);
    dice_.push_back(d);
  }

  std::size_t size() const noexcept { return dice_.size(); }
  bool empty() const noexcept { return dice_.empty(); }

  Die die(std::size_t slot) const { return dice_[slot]; }

  // Operator joining slot `slot` to its predecessor; slot must be >= 1.
  Op join(std::size_t slot) const { return joins_[slot - 1]; }

  std::span<const Die> dice() const noexcept { return dice_; }
  std::span<const Op> joins() const noexcept { return joins_; }

  int dice_count() const noexcept {
    int k = 0;
    for (Die d : dice_) k = std::max(k, d + 1);
    return k;
  }

  std::size_t face_count(Die d) const noexcept {
    return static_cast<std::size_t>(std::count(dice_.begin(), dice_.end(), d));
  }

  std::size_t less_count() const noexcept {
    return static_cast<std::size_t>(std::count(joins_.begin(), joins_.end(), Op::less));
  }

  friend bool operator==(const Identity&, const Identity&) = default;
  friend auto operator<=>(const Identity&, const Identity&) = default;

 private:
  std::vector<Die> dice_;
  std::vector<Op> joins_;
};

/// Parses identity notation such as "A<C<B=B". Whitespace is ignored.
inline Identity parse_identity(std::string_view text) {
  Identity id;
  bool expect_die = true;
  Op pending = Op::less;
  std::size_t last_op = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c >= 'A' && c <= 'Z') {
      if (!expect_die) throw SyntaxError("expected operator", i);
      id.push(pending, static_cast<Die>(c - 'A'));
      expect_die = false;
    } else if (c == '<' || c == '=') {
      if (expect_die) throw SyntaxError(id.empty() ? "identity must start with a die" : "consecutive operators", i);
      pending = c == '<' ? Op::less : Op::equal;
      last_op = i;
      expect_die = true;
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", i);
    }
  }
  if (id.empty()) throw SyntaxError("empty identity", text.size());
  if (expect_die) throw SyntaxError("trailing operator", last_op);
  return id;
}

inline std::string format_identity(const Identity& id) {
  std::string out;
  out.reserve(id.size() * 2);
  for (std::size_t i = 0; i < id.size(); ++i) {
    if (i > 0) out.push_back(to_char(id.join(i)));
    out.push_back(die_letter(id.die(i)));
  }
  return out;
}

/// Maximal runs of slots joined by '='. Each span views the identity's storage.
inline std::vector<std::span<const Die>> groups(const Identity& id) {
  std::vector<std::span<const Die>> out;
  const auto dice = id.dice();
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= dice.size(); ++i) {
    if (i == dice.size() || id.join(i) == Op::less) {
      out.push_back(dice.subspan(begin, i - begin));
      begin = i;
    }
  }
  return out;
}

/// Rebuilds an identity from equal-value groups listed in ascending order.
template <typename Groups>
Identity from_groups(const Groups& gs) {
  Identity id;
  for (const auto& g : gs) {
    bool first = true;
    for (Die d : g) {
      id.push(first ? Op::less : Op::equal, d);
      first = false;
    }
  }
  return id;
}

inline bool is_viable(const Identity& id, int dice, int sides) {
  if (id.size() != static_cast<std::size_t>(dice) * static_cast<std::size_t>(sides)) return false;
  std::vector<int> count(static_cast<std::size_t>(max_dice), 0);
  for (Die d : id.dice()) {
    if (d >= dice) return false;
    ++count[d];
  }
  return std::all_of(count.begin(), count.begin() + dice, [&](int c) { return c == sides; });
}

enum class CanonLevel { alphabetical_dupe, irreducible };

namespace detail {

inline bool pure_group_of(std::span<const Die> g, Die d) {
  return std::all_of(g.begin(), g.end(), [d](Die x) { return x == d; });
}

}  // namespace detail

/// alphabetical_dupe sorts every '='-run by label. irreducible additionally
/// merges neighbouring runs that hold faces of a single die only ("<N<N" ->
/// "<N=N"), the one rewrite that leaves every cross-die comparison intact.
inline Identity canonicalize(const Identity& id, CanonLevel level) {
  if (id.empty()) return id;
  std::vector<std::vector<Die>> gs;
  for (auto g : groups(id)) {
    std::vector<Die> run(g.begin(), g.end());
    std::sort(run.begin(), run.end());
    if (level == CanonLevel::irreducible && !gs.empty()) {
      auto& prev = gs.back();
      if (detail::pure_group_of(prev, run.front()) && detail::pure_group_of(run, run.front())) {
        prev.insert(prev.end(), run.begin(), run.end());
        continue;
      }
    }
    gs.push_back(std::move(run));
  }
  return from_groups(gs);
}

/// Base-2k digit string for an identity whose first slot is die A.
/// Digit d encodes '=' for d < k and '<' otherwise, with die d mod k.
struct EncodedIdentity {
  int dice = 0;
  std::vector<std::uint8_t> digits;

  std::string to_string() const {
    std::string s;
    s.reserve(digits.size());
    for (auto d : digits) s.push_back(static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)));
    return s;
  }

  friend bool operator==(const EncodedIdentity&, const EncodedIdentity&) = default;
  friend auto operator<=>(const EncodedIdentity&, const EncodedIdentity&) = default;
};

inline EncodedIdentity encode_identity(const Identity& id, int dice) {
  if (id.empty() || id.die(0) != 0) throw Error("encoding requires an identity starting with die A");
  EncodedIdentity e{dice, {}};
  e.digits.reserve(id.size() - 1);
  for (std::size_t i = 1; i < id.size(); ++i) {
    if (id.die(i) >= dice) throw Error("die label exceeds dice count");
    e.digits.push_back(static_cast<std::uint8_t>((id.join(i) == Op::less ? dice : 0) + id.die(i)));
  }
  return e;
}

inline Identity decode_identity(const EncodedIdentity& e) {
  Identity id(Die{0});
  for (auto d : e.digits) {
    if (d >= 2 * e.dice) throw Error("digit " + std::to_string(d) + " out of range for base " + std::to_string(2 * e.dice));
    id.push(d < e.dice ? Op::equal : Op::less, static_cast<Die>(d % e.dice));
  }
  return id;
}

inline EncodedIdentity parse_encoding(std::string_view text, int dice) {
  EncodedIdentity e{dice, {}};
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'z') v = c - 'a' + 10;
    else throw SyntaxError("bad digit", i);
    if (v >= 2 * dice) throw SyntaxError("digit out of range", i);
    e.digits.push_back(static_cast<std::uint8_t>(v));
  }
  return e;
}

}  // namespace ni
