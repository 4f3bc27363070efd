#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ni/descriptor.hpp"
#include "ni/error.hpp"
#include "ni/identity.hpp"

namespace ni {

/// k dice with n positive integer faces each.
class DiceSet {
 public:
  DiceSet() = default;

  explicit DiceSet(std::vector<std::vector<int>> faces) : faces_(std::move(faces)) {
    if (faces_.empty() || static_cast<int>(faces_.size()) > max_dice) throw Error("dice count out of range");
    const std::size_t n = faces_.front().size();
    if (n == 0) throw Error("dice need at least one face");
    for (const auto& die : faces_) {
      if (die.size() != n) throw Error("all dice must have the same number of faces");
      for (int v : die) {
        if (v < 1) throw Error("face values must be positive");
      }
    }
  }

  int dice() const noexcept { return static_cast<int>(faces_.size()); }
  int sides() const noexcept { return faces_.empty() ? 0 : static_cast<int>(faces_.front().size()); }

  const std::vector<int>& faces(int die) const { return faces_[static_cast<std::size_t>(die)]; }

  std::vector<int> sorted(int die) const {
    auto f = faces(die);
    std::sort(f.begin(), f.end());
    return f;
  }

  friend bool operator==(const DiceSet&, const DiceSet&) = default;

 private:
  std::vector<std::vector<int>> faces_;
};

/// wins(i, j) counts face pairs (a from i, b from j) with a > b.
class WinMatrix {
 public:
  WinMatrix(int dice, int sides) : dice_(dice), sides_(sides), wins_(static_cast<std::size_t>(dice * dice), 0) {}

  int dice() const noexcept { return dice_; }
  int sides() const noexcept { return sides_; }

  long wins(int i, int j) const { return wins_[index(i, j)]; }
  long& wins(int i, int j) { return wins_[index(i, j)]; }

  long ties(int i, int j) const {
    if (i == j) return 0;
    return static_cast<long>(sides_) * sides_ - wins(i, j) - wins(j, i);
  }

  bool beats(int i, int j) const { return wins(i, j) > wins(j, i); }

  WinPattern pattern() const {
    WinPattern p(dice_);
    for (int i = 0; i < dice_; ++i)
      for (int j = 0; j < dice_; ++j)
        if (i != j && beats(i, j)) p.set(i, j);
    return p;
  }

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i * dice_ + j); }

  int dice_;
  int sides_;
  std::vector<long> wins_;
};

/// Minimal dice for an identity: 1 for the first slot, +1 after every '<'.
inline DiceSet solve(const Identity& id) {
  if (id.empty()) throw NotViable("empty identity");
  const int k = id.dice_count();
  const std::size_t n = id.face_count(0);
  std::vector<std::vector<int>> faces(static_cast<std::size_t>(k));
  int value = 1;
  for (std::size_t i = 0; i < id.size(); ++i) {
    if (i > 0 && id.join(i) == Op::less) ++value;
    faces[id.die(i)].push_back(value);
  }
  for (const auto& f : faces) {
    if (f.size() != n) throw NotViable("identity " + format_identity(id) + " does not give every die the same face count");
  }
  return DiceSet(std::move(faces));
}

inline WinMatrix win_matrix(const DiceSet& ds) {
  const int k = ds.dice();
  WinMatrix m(k, ds.sides());
  std::vector<std::vector<int>> sorted;
  sorted.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) sorted.push_back(ds.sorted(i));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      const auto& a = sorted[static_cast<std::size_t>(i)];
      const auto& b = sorted[static_cast<std::size_t>(j)];
      long total = 0;
      std::size_t below = 0;
      for (int v : a) {
        while (below < b.size() && b[below] < v) ++below;
        total += static_cast<long>(below);
      }
      m.wins(i, j) = total;
    }
  }
  return m;
}

inline bool is_nontransitive(const DiceSet& ds, const WinPattern& p) {
  if (ds.dice() != p.dice()) return false;
  return win_matrix(ds).pattern() == p;
}

inline bool is_nontransitive(const Identity& id, const WinPattern& p) { return is_nontransitive(solve(id), p); }

/// Identity of a dice set with its labels kept as given, in irreducible form.
inline Identity dice_chain(const DiceSet& ds, const std::vector<Die>& label) {
  std::vector<std::pair<int, Die>> all;
  for (int i = 0; i < ds.dice(); ++i)
    for (int v : ds.faces(i)) all.emplace_back(v, label[static_cast<std::size_t>(i)]);
  std::sort(all.begin(), all.end());
  Identity id;
  for (std::size_t i = 0; i < all.size(); ++i) {
    id.push(i > 0 && all[i].first == all[i - 1].first ? Op::equal : Op::less, all[i].second);
  }
  return canonicalize(id, CanonLevel::irreducible);
}

inline Identity dice_chain(const DiceSet& ds) {
  std::vector<Die> label(static_cast<std::size_t>(ds.dice()));
  for (std::size_t i = 0; i < label.size(); ++i) label[i] = static_cast<Die>(i);
  return dice_chain(ds, label);
}

namespace detail {

// Assigns labels 1..k-1 so the measured beats relation matches the pattern.
inline void match_labels(const WinPattern& measured, const WinPattern& target, std::vector<int>& die_of_label,
                         std::vector<bool>& used, int next, const std::function<void()>& emit) {
  const int k = target.dice();
  if (next == k) {
    emit();
    return;
  }
  for (int x = 0; x < k; ++x) {
    if (used[static_cast<std::size_t>(x)]) continue;
    bool ok = true;
    for (int lab = 0; lab < next && ok; ++lab) {
      const int y = die_of_label[static_cast<std::size_t>(lab)];
      ok = measured.beats(x, y) == target.beats(next, lab) && measured.beats(y, x) == target.beats(lab, next);
    }
    if (!ok) continue;
    used[static_cast<std::size_t>(x)] = true;
    die_of_label[static_cast<std::size_t>(next)] = x;
    match_labels(measured, target, die_of_label, used, next + 1, emit);
    used[static_cast<std::size_t>(x)] = false;
  }
}

}  // namespace detail

/// Canonical identity of a perfectly nontransitive dice set.
///
/// Die A is the die with the lowest face, ties broken by the next-lowest face
/// and so on. The remaining labels follow the target pattern. When dice have
/// identical faces the lexicographically smallest identity text wins.
inline Identity dice_to_identity(const DiceSet& ds, const WinPattern& target) {
  const int k = ds.dice();
  if (k != target.dice()) throw NotNontransitive("dice count does not match the win pattern");
  const WinPattern measured = win_matrix(ds).pattern();

  std::vector<std::vector<int>> sorted;
  for (int i = 0; i < k; ++i) sorted.push_back(ds.sorted(i));
  const auto lowest = *std::min_element(sorted.begin(), sorted.end());

  std::optional<Identity> best;
  std::string best_text;
  for (int a = 0; a < k; ++a) {
    if (sorted[static_cast<std::size_t>(a)] != lowest) continue;
    std::vector<int> die_of_label(static_cast<std::size_t>(k), -1);
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    die_of_label[0] = a;
    used[static_cast<std::size_t>(a)] = true;
    detail::match_labels(measured, target, die_of_label, used, 1, [&] {
      std::vector<Die> label(static_cast<std::size_t>(k));
      for (int lab = 0; lab < k; ++lab) label[static_cast<std::size_t>(die_of_label[static_cast<std::size_t>(lab)])] = static_cast<Die>(lab);
      Identity id = dice_chain(ds, label);
      std::string text = format_identity(id);
      if (!best || text < best_text) {
        best = std::move(id);
        best_text = std::move(text);
      }
    });
  }
  if (!best) throw NotNontransitive("no labelling of the dice realises the win pattern");
  return *best;
}

inline Identity dice_to_identity(const DiceSet& ds, const Descriptor& d) {
  if (d.sides > 0 && d.sides != ds.sides()) throw NotNontransitive("side count does not match the descriptor");
  return dice_to_identity(ds, pattern_from_descriptor(d));
}

/// True iff some relabelling of the dice realises the pattern.
inline bool is_nontransitive_up_to_labels(const DiceSet& ds, const WinPattern& target) {
  if (ds.dice() != target.dice()) return false;
  const WinPattern measured = win_matrix(ds).pattern();
  const int k = ds.dice();
  bool found = false;
  for (int a = 0; a < k && !found; ++a) {
    std::vector<int> die_of_label(static_cast<std::size_t>(k), -1);
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    die_of_label[0] = a;
    used[static_cast<std::size_t>(a)] = true;
    detail::match_labels(measured, target, die_of_label, used, 1, [&] { found = true; });
  }
  return found;
}

// Dice files hold one die per line: "A: 1 6 8".
inline void write_dice(std::ostream& os, const DiceSet& ds) {
  for (int i = 0; i < ds.dice(); ++i) {
    os << die_letter(static_cast<Die>(i)) << ':';
    for (int v : ds.faces(i)) os << ' ' << v;
    os << '\n';
  }
}

inline DiceSet read_dice(std::istream& is) {
  std::map<int, std::vector<int>> by_label;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line.substr(first));
    char letter = 0, colon = 0;
    ls >> letter >> colon;
    if (letter < 'A' || letter > 'Z' || colon != ':') throw SyntaxError("expected '<Letter>:' on line " + std::to_string(line_no), first);
    if (by_label.count(letter - 'A')) throw Error("die " + std::string(1, letter) + " listed twice");
    std::vector<int> faces;
    long v;
    while (ls >> v) {
      if (v < 1 || v > 1'000'000'000) throw Error("face value out of range on line " + std::to_string(line_no));
      faces.push_back(static_cast<int>(v));
    }
    if (!ls.eof()) throw SyntaxError("bad face value on line " + std::to_string(line_no), first);
    by_label[letter - 'A'] = std::move(faces);
  }
  std::vector<std::vector<int>> faces;
  for (const auto& [label, f] : by_label) {
    if (label != static_cast<int>(faces.size())) throw Error("dice labels must run A, B, C, ... without gaps");
    faces.push_back(f);
  }
  return DiceSet(std::move(faces));
}

}  // namespace ni
