#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ni/descriptor.hpp"
#include "ni/dice.hpp"
#include "ni/error.hpp"
#include "ni/identity.hpp"

namespace ni {

/// Result of an expansion. `identity` is irreducible-canonical, `raw` is the
/// literal construction. `nontransitive` reports whether the solved output
/// realises `expected` exactly.
struct Expansion {
  Identity identity;
  Identity raw;
  WinPattern expected;
  bool nontransitive = false;
};

namespace detail {

struct Shape {
  int dice;
  int sides;
  friend bool operator==(const Shape&, const Shape&) = default;
};

inline Shape shape_of(const Identity& id) {
  const int k = id.dice_count();
  const int n = static_cast<int>(id.face_count(0));
  if (!is_viable(id, k, n)) throw NotViable(format_identity(id) + " is not viable");
  return {k, n};
}

inline WinPattern measured_pattern(const Identity& id) { return win_matrix(solve(id)).pattern(); }

inline Expansion finish(Identity raw, WinPattern expected) {
  Expansion e;
  e.identity = canonicalize(raw, CanonLevel::irreducible);
  e.raw = std::move(raw);
  e.nontransitive = expected.is_regular_tournament() && measured_pattern(e.identity) == expected;
  e.expected = std::move(expected);
  return e;
}

}  // namespace detail

/// Appends "<A=B=...=N", one more face per die, all tied.
inline Expansion add_zero(const Identity& id) {
  const auto shape = detail::shape_of(id);
  Identity raw = id;
  for (int d = 0; d < shape.dice; ++d) raw.push(d == 0 ? Op::less : Op::equal, static_cast<Die>(d));
  return detail::finish(std::move(raw), detail::measured_pattern(id));
}

/// Replaces every face N by "N=N" or "N<N".
inline Expansion multiply_by_one(const Identity& id, Op joiner) {
  detail::shape_of(id);
  Identity raw;
  for (std::size_t i = 0; i < id.size(); ++i) {
    raw.push(i == 0 ? Op::less : id.join(i), id.die(i));
    raw.push(joiner, id.die(i));
  }
  return detail::finish(std::move(raw), detail::measured_pattern(id));
}

/// Concatenates identities of one shape, joined by the given operators.
inline Expansion identity_addition(const std::vector<Identity>& ids, const std::vector<Op>& joiners) {
  if (ids.empty()) throw ShapeMismatch("identity addition needs at least one identity");
  if (joiners.size() + 1 != ids.size()) throw ShapeMismatch("need exactly one joiner between consecutive identities");
  const auto shape = detail::shape_of(ids.front());
  const auto expected = detail::measured_pattern(ids.front());
  Identity raw;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!(detail::shape_of(ids[i]) == shape)) throw ShapeMismatch("identity addition needs identities of one shape");
    for (std::size_t s = 0; s < ids[i].size(); ++s) {
      const Op op = s > 0 ? ids[i].join(s) : (i > 0 ? joiners[i - 1] : Op::less);
      raw.push(op, ids[i].die(s));
    }
  }
  return detail::finish(std::move(raw), expected);
}

enum class NestMode { face_exponentiation, dice_multiplication };

/// Die of a dice-multiplication result: block of base die `base`, die `sub`
/// inside it.
constexpr Die block_label(Die base, Die sub, int sub_dice) noexcept {
  return static_cast<Die>(base * sub_dice + sub);
}

/// One substituting identity per base slot.
struct SubstitutionPlan {
  NestMode mode = NestMode::face_exponentiation;
  std::vector<Identity> per_slot;

  /// The same substituting identity for every face of a base die.
  static SubstitutionPlan per_die(const Identity& base, const std::vector<Identity>& by_die, NestMode mode) {
    if (static_cast<int>(by_die.size()) != base.dice_count()) throw ShapeMismatch("need one substituting identity per base die");
    SubstitutionPlan plan{mode, {}};
    for (Die d : base.dice()) plan.per_slot.push_back(by_die[d]);
    return plan;
  }

  static SubstitutionPlan uniform(const Identity& base, const Identity& sub, NestMode mode) {
    return SubstitutionPlan{mode, std::vector<Identity>(base.size(), sub)};
  }

  /// Faces of one base die expand with different identities.
  bool heterogeneous(const Identity& base) const {
    for (std::size_t i = 0; i < per_slot.size(); ++i)
      for (std::size_t j = i + 1; j < per_slot.size(); ++j)
        if (base.die(i) == base.die(j) && per_slot[i] != per_slot[j]) return true;
    return false;
  }
};

/// Substitutes an identity into every base face.
///
/// Faces joined by '=' in the base ("<N=N", "<M=N") must share one
/// substituting identity; their copies are interleaved slot by slot, each
/// column tied, the way multiply-by-one doubles a face.
inline Expansion nest(const Identity& base, const SubstitutionPlan& plan) {
  const auto base_shape = detail::shape_of(base);
  if (plan.per_slot.size() != base.size()) throw ShapeMismatch("plan needs one entry per base slot");
  const auto sub_shape = detail::shape_of(plan.per_slot.front());
  for (const auto& s : plan.per_slot) {
    if (!(detail::shape_of(s) == sub_shape)) throw ShapeMismatch("substituting identities must share one shape");
  }
  const int ks = sub_shape.dice;
  const auto sub_pattern = detail::measured_pattern(plan.per_slot.front());
  for (const auto& s : plan.per_slot) {
    if (!(detail::measured_pattern(s) == sub_pattern)) throw ShapeMismatch("substituting identities must share one win pattern");
  }
  if (plan.mode == NestMode::dice_multiplication && base_shape.dice * ks > max_dice) {
    throw ShapeMismatch("dice multiplication would exceed 26 dice");
  }

  Identity raw;
  std::size_t begin = 0;
  for (auto run : groups(base)) {
    const Identity& sub = plan.per_slot[begin];
    for (std::size_t m = 1; m < run.size(); ++m) {
      if (plan.per_slot[begin + m] != sub) {
        throw SpecialCaseViolation("faces tied in the base must expand with the same substituting identity");
      }
    }
    for (std::size_t col = 0; col < sub.size(); ++col) {
      const Op between = col == 0 ? Op::less : sub.join(col);
      for (std::size_t m = 0; m < run.size(); ++m) {
        const Die d = plan.mode == NestMode::dice_multiplication ? block_label(run[m], sub.die(col), ks) : sub.die(col);
        raw.push(m == 0 ? between : Op::equal, d);
      }
    }
    begin += run.size();
  }

  WinPattern expected = plan.mode == NestMode::dice_multiplication
                            ? WinPattern::product(detail::measured_pattern(base), sub_pattern)
                            : sub_pattern;
  return detail::finish(std::move(raw), std::move(expected));
}

/// Base "<M=N" with M != N: a tie between faces of different dice.
inline bool has_cross_die_tie(const Identity& id) {
  for (std::size_t i = 1; i < id.size(); ++i) {
    if (id.join(i) == Op::equal && id.die(i) != id.die(i - 1)) return true;
  }
  return false;
}

/// Every die of block b beats every die of block c whenever b beats c in the
/// base pattern.
inline bool block_dominance(const WinMatrix& m, const WinPattern& base, int sub_dice) {
  for (int b = 0; b < base.dice(); ++b)
    for (int c = 0; c < base.dice(); ++c) {
      if (!base.beats(b, c)) continue;
      for (int s = 0; s < sub_dice; ++s)
        for (int t = 0; t < sub_dice; ++t) {
          if (!m.beats(b * sub_dice + s, c * sub_dice + t)) return false;
        }
    }
  return true;
}

}  // namespace ni
