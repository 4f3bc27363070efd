#pragma once

#include <cctype>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ni/error.hpp"
#include "ni/identity.hpp"

namespace ni {

/// "[kDnS:steps] ORDER" metadata. sides == 0 means the side count was omitted
/// ("[5D:1]"), which is enough to derive a win pattern.
struct Descriptor {
  int dice = 3;
  int sides = 0;
  std::vector<int> steps;
  std::optional<std::vector<Die>> primary_order;

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

inline int secondary_chain_count(int dice) { return (dice - 1) / 2 - 1; }

inline void validate(const Descriptor& d) {
  if (d.dice < 3 || d.dice % 2 == 0 || d.dice > max_dice) {
    throw InvalidDescriptor("dice count must be odd and between 3 and 25");
  }
  if (d.sides < 0) throw InvalidDescriptor("negative side count");
  if (static_cast<int>(d.steps.size()) != secondary_chain_count(d.dice)) {
    throw InvalidDescriptor("expected " + std::to_string(secondary_chain_count(d.dice)) + " step entries for " +
                            std::to_string(d.dice) + " dice");
  }
  for (int s : d.steps) {
    if (s < 0) throw InvalidDescriptor("negative step");
  }
  if (d.primary_order) {
    const auto& order = *d.primary_order;
    std::vector<bool> seen(static_cast<std::size_t>(d.dice), false);
    if (static_cast<int>(order.size()) != d.dice) throw InvalidDescriptor("primary order must list every die once");
    for (Die x : order) {
      if (x >= d.dice || seen[x]) throw InvalidDescriptor("primary order must list every die once");
      seen[x] = true;
    }
  }
}

inline Descriptor parse_descriptor(std::string_view text) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto number = [&]() -> int {
    const std::size_t start = i;
    int v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = v * 10 + (text[i] - '0');
      if (v > 1'000'000) throw SyntaxError("number too large", start);
      ++i;
    }
    if (i == start) throw SyntaxError("expected number", start);
    return v;
  };
  auto expect = [&](char c) {
    if (i >= text.size() || text[i] != c) throw SyntaxError(std::string("expected '") + c + "'", i);
    ++i;
  };

  Descriptor d;
  skip_ws();
  expect('[');
  d.dice = number();
  expect('D');
  if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    d.sides = number();
    expect('S');
  }
  while (i < text.size() && text[i] == ':') {
    ++i;
    d.steps.push_back(i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])) ? number() : 0);
  }
  expect(']');
  skip_ws();
  if (i < text.size()) {
    std::vector<Die> order;
    while (i < text.size() && text[i] >= 'A' && text[i] <= 'Z') order.push_back(static_cast<Die>(text[i++] - 'A'));
    skip_ws();
    if (i != text.size() || order.empty()) throw SyntaxError("unexpected trailing text", i);
    d.primary_order = std::move(order);
  }
  validate(d);
  return d;
}

inline std::string format_descriptor(const Descriptor& d) {
  std::string s = "[" + std::to_string(d.dice) + "D";
  if (d.sides > 0) s += std::to_string(d.sides) + "S";
  for (int step : d.steps) {
    s += ':';
    if (step != 0) s += std::to_string(step);
  }
  s += ']';
  if (d.primary_order) {
    s += ' ';
    for (Die x : *d.primary_order) s += die_letter(x);
  }
  return s;
}

/// Descriptor with default (zero) steps for k dice and n sides.
inline Descriptor make_descriptor(int dice, int sides) {
  Descriptor d{dice, sides, std::vector<int>(static_cast<std::size_t>(std::max(0, secondary_chain_count(dice))), 0),
               std::nullopt};
  validate(d);
  return d;
}

inline bool is_viable(const Identity& id, const Descriptor& d) { return is_viable(id, d.dice, d.sides); }

/// Irreflexive, antisymmetric "i beats j" relation over k dice.
class WinPattern {
 public:
  WinPattern() = default;
  explicit WinPattern(int dice) : dice_(dice), beats_(static_cast<std::size_t>(dice * dice), false) {}

  int dice() const noexcept { return dice_; }

  bool beats(int i, int j) const { return beats_[index(i, j)]; }
  void set(int i, int j, bool v = true) { beats_[index(i, j)] = v; }

  int out_degree(int i) const {
    int c = 0;
    for (int j = 0; j < dice_; ++j) c += beats(i, j);
    return c;
  }

  /// Every die beats and loses to exactly (k-1)/2 others.
  bool is_regular_tournament() const {
    for (int i = 0; i < dice_; ++i) {
      if (beats(i, i)) return false;
      int wins = 0, losses = 0;
      for (int j = 0; j < dice_; ++j) {
        if (i == j) continue;
        if (beats(i, j) == beats(j, i)) return false;
        wins += beats(i, j);
        losses += beats(j, i);
      }
      if (wins != (dice_ - 1) / 2 || losses != (dice_ - 1) / 2) return false;
    }
    return true;
  }

  /// Pattern with die p[x] playing the role die x plays here.
  WinPattern relabeled(const std::vector<Die>& p) const {
    WinPattern out(dice_);
    for (int i = 0; i < dice_; ++i)
      for (int j = 0; j < dice_; ++j) out.set(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)], beats(i, j));
    return out;
  }

  /// Block product: die b*ks+s beats c*ks+t iff b beats c, or b == c and s beats t.
  static WinPattern product(const WinPattern& base, const WinPattern& sub) {
    const int ks = sub.dice();
    WinPattern out(base.dice() * ks);
    for (int b = 0; b < base.dice(); ++b)
      for (int s = 0; s < ks; ++s)
        for (int c = 0; c < base.dice(); ++c)
          for (int t = 0; t < ks; ++t) {
            const bool v = b == c ? sub.beats(s, t) : base.beats(b, c);
            out.set(b * ks + s, c * ks + t, v);
          }
    return out;
  }

  friend bool operator==(const WinPattern&, const WinPattern&) = default;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i * dice_ + j); }

  int dice_ = 0;
  std::vector<bool> beats_;
};

/// Strides of the win chains: the primary chain steps by 1, secondary chain j
/// (1-based) by j + 1 + steps[0] + ... + steps[j-1].
inline std::vector<int> chain_strides(const Descriptor& d) {
  std::vector<int> strides{1};
  int offset = 0;
  for (std::size_t j = 0; j < d.steps.size(); ++j) {
    offset += d.steps[j];
    strides.push_back(static_cast<int>(j) + 2 + offset);
  }
  return strides;
}

inline WinPattern pattern_from_descriptor(const Descriptor& d) {
  validate(d);
  const int k = d.dice;
  std::vector<Die> order(static_cast<std::size_t>(k));
  if (d.primary_order) order = *d.primary_order;
  else std::iota(order.begin(), order.end(), Die{0});

  WinPattern p(k);
  for (int stride : chain_strides(d)) {
    if (stride % k == 0) throw InvalidDescriptor("win chain stride is a multiple of the dice count");
    for (int pos = 0; pos < k; ++pos) {
      const Die winner = order[static_cast<std::size_t>(pos)];
      const Die loser = order[static_cast<std::size_t>((pos + stride) % k)];
      if (p.beats(winner, loser)) throw InvalidDescriptor("two win chains coincide");
      p.set(winner, loser);
    }
  }
  if (!p.is_regular_tournament()) throw InvalidDescriptor("step pattern does not give a perfectly nontransitive relation");
  return p;
}

}  // namespace ni
