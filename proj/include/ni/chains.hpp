#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <istream>
#include <ostream>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ni/descriptor.hpp"
#include "ni/dice.hpp"
#include "ni/error.hpp"
#include "ni/identity.hpp"

namespace ni {

/// Bijection on die labels 0..k-1: die x becomes image(x).
class DiePermutation {
 public:
  explicit DiePermutation(std::vector<Die> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (Die d : image_) {
      if (d >= image_.size() || seen[d]) throw Error("not a permutation of die labels");
      seen[d] = true;
    }
  }

  static DiePermutation identity(int dice) {
    std::vector<Die> image(static_cast<std::size_t>(dice));
    std::iota(image.begin(), image.end(), Die{0});
    return DiePermutation(std::move(image));
  }

  int dice() const noexcept { return static_cast<int>(image_.size()); }
  Die operator()(Die d) const { return image_[d]; }
  const std::vector<Die>& image() const noexcept { return image_; }

  DiePermutation inverse() const {
    std::vector<Die> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = static_cast<Die>(i);
    return DiePermutation(std::move(inv));
  }

  // (a * b)(x) = a(b(x))
  friend DiePermutation operator*(const DiePermutation& a, const DiePermutation& b) {
    if (a.dice() != b.dice()) throw Error("permutations act on different dice counts");
    std::vector<Die> image(b.image_.size());
    for (std::size_t i = 0; i < image.size(); ++i) image[i] = a(b(static_cast<Die>(i)));
    return DiePermutation(std::move(image));
  }

  Identity apply(const Identity& id) const {
    Identity out;
    for (std::size_t i = 0; i < id.size(); ++i) {
      if (id.die(i) >= image_.size()) throw Error("identity uses a die outside the permutation");
      out.push(i == 0 ? Op::less : id.join(i), image_[id.die(i)]);
    }
    return out;
  }

  friend bool operator==(const DiePermutation&, const DiePermutation&) = default;

 private:
  std::vector<Die> image_;
};

/// Relabelling that turns a [5D:] identity into its [5D:1] form:
/// B -> D, C -> B, D -> E, E -> C.
inline DiePermutation five_dice_step_map() { return DiePermutation({0, 3, 1, 4, 2}); }

/// Moves a 5-dice identity between the [5D:] and [5D:1] step patterns.
inline Identity step_relabel(const Identity& id, const Descriptor& from, const Descriptor& to) {
  if (from.dice != 5 || to.dice != 5) throw InvalidDescriptor("step relabelling is defined for 5 dice only");
  if (from.primary_order || to.primary_order) throw InvalidDescriptor("step relabelling expects alphabetical primary chains");
  pattern_from_descriptor(from);
  pattern_from_descriptor(to);
  const bool from_zero = from.steps.at(0) == 0;
  const bool to_zero = to.steps.at(0) == 0;
  DiePermutation p = DiePermutation::identity(5);
  if (from_zero && !to_zero) p = five_dice_step_map();
  else if (!from_zero && to_zero) p = five_dice_step_map().inverse();
  return canonicalize(p.apply(id), CanonLevel::irreducible);
}

/// Deletes every die outside `order` and relabels order[i] as die i. The
/// operator between two surviving faces is '<' iff a '<' separated them.
inline Identity restrict_as(const Identity& id, const std::vector<Die>& order) {
  std::vector<int> label(static_cast<std::size_t>(max_dice), -1);
  for (std::size_t i = 0; i < order.size(); ++i) label[order[i]] = static_cast<int>(i);
  Identity out;
  bool gap_less = false;
  for (std::size_t i = 0; i < id.size(); ++i) {
    if (i > 0 && id.join(i) == Op::less) gap_less = true;
    const int l = label[id.die(i)];
    if (l < 0) continue;
    out.push(gap_less ? Op::less : Op::equal, static_cast<Die>(l));
    gap_less = false;
  }
  return canonicalize(out, CanonLevel::irreducible);
}

/// Survivors in ascending label order, rotated so the die with the lowest
/// faces (compared as sorted lists) comes first.
inline std::vector<Die> anchored_order(const Identity& id, std::vector<Die> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty()) return keep;
  const DiceSet ds = solve(id);
  auto anchor = keep.begin();
  for (auto it = keep.begin(); it != keep.end(); ++it) {
    if (ds.sorted(*it) < ds.sorted(*anchor)) anchor = it;
  }
  std::rotate(keep.begin(), anchor, keep.end());
  return keep;
}

inline Identity restrict(const Identity& id, const std::vector<Die>& keep) {
  if (std::set<Die>(keep.begin(), keep.end()).size() < 3) throw Error("restriction needs at least three dice");
  for (Die d : keep) {
    if (d >= id.dice_count()) throw Error("restriction names a die the identity does not use");
  }
  return restrict_as(id, anchored_order(id, keep));
}

/// The five 3-dice triples of a [5D:] identity.
inline const std::array<std::array<Die, 3>, 5>& composing_triples() {
  static const std::array<std::array<Die, 3>, 5> triples{{{0, 1, 3}, {0, 2, 3}, {0, 2, 4}, {1, 2, 4}, {1, 3, 4}}};
  return triples;
}

/// One composing identity. `order[0]` plays the composing identity's die A.
struct ComposingEntry {
  std::array<Die, 3> order{};
  Identity identity;

  bool anchored() const { return order[0] == 0; }
  std::array<Die, 3> triple() const {
    auto t = order;
    std::sort(t.begin(), t.end());
    return t;
  }
};

inline std::string triple_name(const std::array<Die, 3>& t) {
  return {die_letter(t[0]), die_letter(t[1]), die_letter(t[2])};
}

inline const WinPattern& five_dice_pattern() {
  static const WinPattern p = pattern_from_descriptor(parse_descriptor("[5D:]"));
  return p;
}

inline const WinPattern& three_dice_pattern() {
  static const WinPattern p = pattern_from_descriptor(parse_descriptor("[3D]"));
  return p;
}

/// Restricts a [5D:] NI to its five composing triples.
inline std::vector<ComposingEntry> decompose5(const Identity& id) {
  if (id.dice_count() != 5) throw ShapeMismatch("decomposition needs a 5-dice identity");
  if (!is_nontransitive(id, five_dice_pattern())) throw NotNontransitive(format_identity(id) + " is not a [5D:] NI");
  std::vector<ComposingEntry> out;
  for (const auto& t : composing_triples()) {
    auto order = anchored_order(id, {t.begin(), t.end()});
    ComposingEntry e;
    std::copy(order.begin(), order.end(), e.order.begin());
    e.identity = restrict_as(id, order);
    out.push_back(std::move(e));
  }
  return out;
}

/// Assignments for the five composing triples.
struct CompositionSpec {
  std::vector<ComposingEntry> entries;

  /// Throws unless the entries cover the five composing triples once each,
  /// anchored triples are anchored at A, and identities are 3-dice NIs of
  /// one side count.
  int validate() const {
    if (entries.size() != 5) throw Error("composition needs exactly five composing identities");
    std::set<std::array<Die, 3>> seen;
    int sides = -1;
    for (const auto& e : entries) {
      const auto t = e.triple();
      if (std::find(composing_triples().begin(), composing_triples().end(), t) == composing_triples().end()) {
        throw Error("triple " + triple_name(t) + " is not a composing triple");
      }
      if (!seen.insert(t).second) throw Error("triple " + triple_name(t) + " assigned twice");
      // Rotations of the sorted triple keep the win cycle orientation.
      auto rotated = t;
      bool is_rotation = false;
      for (int r = 0; r < 3; ++r) {
        if (rotated == e.order) is_rotation = true;
        std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
      }
      if (!is_rotation) throw Error("order " + triple_name(e.order) + " reverses the win cycle of its triple");
      if (t[0] == 0 && !e.anchored()) throw Error("triple " + triple_name(t) + " contains die A and must be anchored at it");
      if (e.identity.dice_count() != 3 || !is_nontransitive(e.identity, three_dice_pattern())) {
        throw NotNontransitive(format_identity(e.identity) + " is not a 3-dice NI");
      }
      const int n = static_cast<int>(e.identity.face_count(0));
      if (sides >= 0 && n != sides) throw ShapeMismatch("composing identities must share one side count");
      sides = n;
    }
    return sides;
  }
};

namespace detail {

// Face (die, rank) ordering constraints gathered from composing identities.
class FaceRelations {
 public:
  explicit FaceRelations(int sides) : n_(sides), rel_(static_cast<std::size_t>(25 * sides * sides), 2) {}

  // Records sign(value(a, i) - value(b, j)) for every face pair; false on conflict.
  bool add(const ComposingEntry& e) {
    const DiceSet ds = solve(e.identity);
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) {
        if (x == y) continue;
        const auto& fx = ds.sorted(x);
        const auto& fy = ds.sorted(y);
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j) {
            const int a = fx[static_cast<std::size_t>(i)], b = fy[static_cast<std::size_t>(j)];
            const std::int8_t s = static_cast<std::int8_t>((a > b) - (a < b));
            auto& slot = at(e.order[static_cast<std::size_t>(x)], i, e.order[static_cast<std::size_t>(y)], j);
            if (slot != 2 && slot != s) return false;
            slot = s;
          }
      }
    return true;
  }

  // Orders all 5n faces; nullopt when the relations are cyclic or incomplete.
  std::optional<Identity> merge() const {
    const int total = 5 * n_;
    auto face = [&](int die, int rank) { return die * n_ + rank; };
    std::vector<int> parent(static_cast<std::size_t>(total));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      return x;
    };
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) {
        if (a == b) continue;
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j) {
            const auto s = get(a, i, b, j);
            if (s == 2) return std::nullopt;
            if (s == 0) parent[static_cast<std::size_t>(find(face(a, i)))] = find(face(b, j));
          }
      }
    // Edges between classes: strict cross-die relations and per-die rank order.
    std::vector<std::set<int>> succ(static_cast<std::size_t>(total));
    std::vector<int> indegree(static_cast<std::size_t>(total), 0);
    auto add_edge = [&](int lo, int hi) {
      const int a = find(lo), b = find(hi);
      if (a == b) return false;
      if (succ[static_cast<std::size_t>(a)].insert(b).second) ++indegree[static_cast<std::size_t>(b)];
      return true;
    };
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) {
        if (a == b) continue;
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j)
            if (get(a, i, b, j) < 0 && !add_edge(face(a, i), face(b, j))) return std::nullopt;
      }
    for (int a = 0; a < 5; ++a)
      for (int i = 0; i + 1 < n_; ++i) add_edge(face(a, i), face(a, i + 1));

    std::vector<std::vector<Die>> runs;
    std::set<int> ready;
    int classes = 0;
    for (int f = 0; f < total; ++f) {
      if (find(f) != f) continue;
      ++classes;
      if (indegree[static_cast<std::size_t>(f)] == 0) ready.insert(f);
    }
    while (!ready.empty()) {
      const int c = *ready.begin();
      ready.erase(ready.begin());
      std::vector<Die> run;
      for (int f = 0; f < total; ++f)
        if (find(f) == c) run.push_back(static_cast<Die>(f / n_));
      std::sort(run.begin(), run.end());
      runs.push_back(std::move(run));
      for (int s : succ[static_cast<std::size_t>(c)]) {
        if (--indegree[static_cast<std::size_t>(s)] == 0) ready.insert(s);
      }
    }
    if (static_cast<int>(runs.size()) != classes) return std::nullopt;
    return canonicalize(from_groups(runs), CanonLevel::irreducible);
  }

 private:
  std::int8_t& at(int a, int i, int b, int j) { return rel_[index(a, i, b, j)]; }
  std::int8_t get(int a, int i, int b, int j) const { return rel_[index(a, i, b, j)]; }
  std::size_t index(int a, int i, int b, int j) const {
    return static_cast<std::size_t>(((a * 5 + b) * n_ + i) * n_ + j);
  }

  int n_;
  std::vector<std::int8_t> rel_;  // 2 = unknown
};

inline bool reproduces(const Identity& merged, const ComposingEntry& e) {
  return restrict_as(merged, {e.order.begin(), e.order.end()}) == canonicalize(e.identity, CanonLevel::irreducible);
}

}  // namespace detail

/// Interleaves the five composing identities into [5D:] NIs.
///
/// Every pair of the five dice lies in some composing triple, so the face
/// relations pin down the merged order up to ties of one die with itself;
/// the result set therefore holds at most one identity. Unsatisfiable
/// specs give an empty set; malformed specs throw.
inline std::set<Identity> compose5(const CompositionSpec& spec) {
  const int sides = spec.validate();
  detail::FaceRelations rel(sides);
  for (const auto& e : spec.entries) {
    if (!rel.add(e)) return {};
  }
  auto merged = rel.merge();
  if (!merged) return {};
  for (const auto& e : spec.entries) {
    if (!detail::reproduces(*merged, e)) return {};
  }
  if (!is_nontransitive(*merged, five_dice_pattern())) return {};
  return {dice_to_identity(solve(*merged), five_dice_pattern())};
}

/// Spec whose composing identities are the decomposition of a [5D:] NI.
inline CompositionSpec spec_from_decomposition(const Identity& id) { return CompositionSpec{decompose5(id)}; }

/// Searches composition specs built from a pool of 3-dice NIs and returns up
/// to `limit` distinct composed [5D:] NIs in discovery order.
inline std::vector<Identity> generate_compositions(const std::vector<Identity>& pool, std::size_t limit) {
  std::vector<Identity> found;
  std::set<Identity> seen;
  if (pool.empty()) return found;
  const int sides = static_cast<int>(pool.front().face_count(0));

  std::vector<std::vector<ComposingEntry>> options;
  for (const auto& t : composing_triples()) {
    std::vector<ComposingEntry> opts;
    const int rotations = t[0] == 0 ? 1 : 3;
    for (int r = 0; r < rotations; ++r) {
      std::array<Die, 3> order = t;
      std::rotate(order.begin(), order.begin() + r, order.end());
      for (const auto& id : pool) opts.push_back(ComposingEntry{order, id});
    }
    options.push_back(std::move(opts));
  }

  std::vector<ComposingEntry> chosen;
  std::function<void(std::size_t, const detail::FaceRelations&)> search = [&](std::size_t depth,
                                                                             const detail::FaceRelations& rel) {
    if (found.size() >= limit) return;
    if (depth == options.size()) {
      auto merged = rel.merge();
      if (!merged) return;
      for (const auto& e : chosen) {
        if (!detail::reproduces(*merged, e)) return;
      }
      if (!is_nontransitive(*merged, five_dice_pattern())) return;
      auto id = dice_to_identity(solve(*merged), five_dice_pattern());
      if (seen.insert(id).second) found.push_back(std::move(id));
      return;
    }
    for (const auto& e : options[depth]) {
      detail::FaceRelations next = rel;
      if (!next.add(e)) continue;
      chosen.push_back(e);
      search(depth + 1, next);
      chosen.pop_back();
      if (found.size() >= limit) return;
    }
  };
  search(0, detail::FaceRelations(sides));
  return found;
}

/// True iff the dice left after dropping `drop` realise the target pattern
/// under some labelling.
inline bool check_removal(const Identity& id, const std::vector<Die>& drop, const Descriptor& target) {
  const DiceSet ds = solve(id);
  std::vector<std::vector<int>> kept;
  for (int d = 0; d < ds.dice(); ++d) {
    if (std::find(drop.begin(), drop.end(), static_cast<Die>(d)) == drop.end()) kept.push_back(ds.faces(d));
  }
  if (static_cast<int>(kept.size()) != target.dice) return false;
  return is_nontransitive_up_to_labels(DiceSet(std::move(kept)), pattern_from_descriptor(target));
}

/// Parses "ABD: A<C<B<..." lines; the letters give the composing order, so
/// "DEB: ..." anchors the B, D, E triple at D.
inline CompositionSpec read_composition_spec(std::istream& is) {
  CompositionSpec spec;
  std::string line;
  while (std::getline(is, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto colon = line.find(':', first);
    if (colon == std::string::npos) throw SyntaxError("expected '<triple>: <identity>'", first);
    std::string letters;
    for (std::size_t i = first; i < colon; ++i) {
      if (line[i] >= 'A' && line[i] <= 'E') letters.push_back(line[i]);
      else if (!std::isspace(static_cast<unsigned char>(line[i]))) throw SyntaxError("bad triple letter", i);
    }
    if (letters.size() != 3) throw SyntaxError("a triple names three dice", first);
    ComposingEntry e;
    for (int i = 0; i < 3; ++i) e.order[static_cast<std::size_t>(i)] = static_cast<Die>(letters[static_cast<std::size_t>(i)] - 'A');
    e.identity = parse_identity(std::string_view(line).substr(colon + 1));
    spec.entries.push_back(std::move(e));
  }
  return spec;
}

inline void write_composition_spec(std::ostream& os, const CompositionSpec& spec) {
  for (const auto& e : spec.entries) os << triple_name(e.order) << ": " << format_identity(e.identity) << '\n';
}

}  // namespace ni
