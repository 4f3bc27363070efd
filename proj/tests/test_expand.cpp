#include <catch_amalgamated.hpp>

#include <random>

#include "ni/ni.hpp"

using namespace ni;

namespace {

const Identity X = parse_identity("A<C<B<C<B<A<B<A<C");

std::vector<Identity> list_of(int k, int n) {
  std::vector<Identity> out;
  for (const auto& r : collect_ni(make_descriptor(k, n), Mode::irreducible)) out.push_back(r.identity);
  return out;
}

int sides_of(const Identity& id) { return static_cast<int>(id.face_count(0)); }

}  // namespace

TEST_CASE("add zero appends a tied face to every die") {
  const auto e = add_zero(X);
  CHECK(format_identity(e.identity) == "A<C<B<C<B<A<B<A<C<A=B=C");
  CHECK(e.nontransitive);
  CHECK(sides_of(e.identity) == 4);
}

TEST_CASE("add zero lands in the [3D4S] list") {
  const auto four = list_of(3, 4);
  const std::set<Identity> known(four.begin(), four.end());
  for (const auto& id : list_of(3, 3)) {
    const auto e = add_zero(id);
    CHECK(e.nontransitive);
    CHECK(known.count(e.identity) == 1);
  }
}

TEST_CASE("multiply by one doubles every face") {
  const auto eq = multiply_by_one(X, Op::equal);
  const auto lt = multiply_by_one(X, Op::less);
  CHECK(format_identity(eq.raw) == "A=A<C=C<B=B<C=C<B=B<A=A<B=B<A=A<C=C");
  CHECK(format_identity(eq.identity) == "A=A<C=C<B=B<C=C<B=B<A=A<B=B<A=A<C=C");
  CHECK(format_identity(lt.raw) == "A<A<C<C<B<B<C<C<B<B<A<A<B<B<A<A<C<C");
  CHECK(format_identity(lt.identity) == "A=A<C=C<B=B<C=C<B=B<A=A<B=B<A=A<C=C");
  for (const auto& id : list_of(3, 3)) {
    const auto e = multiply_by_one(id, Op::equal);
    CHECK(e.nontransitive);
    CHECK(sides_of(e.identity) == 6);
  }
}

TEST_CASE("identity addition concatenates") {
  const auto e = identity_addition({X, X}, {Op::less});
  CHECK(format_identity(e.raw) == "A<C<B<C<B<A<B<A<C<A<C<B<C<B<A<B<A<C");
  CHECK(e.nontransitive);
  CHECK(sides_of(e.identity) == 6);

  const auto single = identity_addition({X}, {});
  CHECK(single.identity == X);

  CHECK_THROWS_AS(identity_addition({X, add_zero(X).identity}, {Op::less}), ShapeMismatch);
  CHECK_THROWS_AS(identity_addition({X, X}, {}), ShapeMismatch);
  CHECK_THROWS_AS(identity_addition({}, {}), ShapeMismatch);
}

TEST_CASE("identity addition over all ordered pairs") {
  const auto list = list_of(3, 3);
  std::size_t checked = 0;
  for (const auto& a : list)
    for (const auto& b : list)
      for (Op j : {Op::less, Op::equal}) {
        const auto e = identity_addition({a, b}, {j});
        CHECK(e.nontransitive);
        CHECK(sides_of(e.identity) == 6);
        ++checked;
      }
  CHECK(checked == 2 * 25 * 25);
}

TEST_CASE("identity addition over random triples") {
  const auto list = list_of(3, 3);
  std::mt19937 rng(20240601);
  std::uniform_int_distribution<std::size_t> pick(0, list.size() - 1);
  std::bernoulli_distribution coin;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<Identity> ids{list[pick(rng)], list[pick(rng)], list[pick(rng)]};
    const std::vector<Op> joins{coin(rng) ? Op::less : Op::equal, coin(rng) ? Op::less : Op::equal};
    const auto e = identity_addition(ids, joins);
    CHECK(e.nontransitive);
    CHECK(sides_of(e.identity) == 9);
  }
}

TEST_CASE("face exponentiation of X with itself") {
  const auto e = nest(X, SubstitutionPlan::uniform(X, X, NestMode::face_exponentiation));
  CHECK(e.identity.dice_count() == 3);
  CHECK(sides_of(e.identity) == 27);
  CHECK(e.nontransitive);
  const auto m = win_matrix(solve(e.identity));
  CHECK(m.wins(0, 1) + m.wins(1, 0) + m.ties(0, 1) == 729);
}

TEST_CASE("dice multiplication gives block dominance") {
  const auto e = nest(X, SubstitutionPlan::uniform(X, X, NestMode::dice_multiplication));
  CHECK(e.identity.dice_count() == 9);
  CHECK(sides_of(e.identity) == 9);
  CHECK(e.nontransitive);
  const auto base = pattern_from_descriptor(make_descriptor(3, 3));
  CHECK(block_dominance(win_matrix(solve(e.identity)), base, 3));
  CHECK(e.expected == WinPattern::product(base, base));
}

TEST_CASE("nesting over every [3D3S] base and substitution") {
  const auto list = list_of(3, 3);
  const auto base_pattern = pattern_from_descriptor(make_descriptor(3, 3));
  for (const auto& base : list) {
    for (const auto& sub : list) {
      for (auto mode : {NestMode::face_exponentiation, NestMode::dice_multiplication}) {
        const auto e = nest(base, SubstitutionPlan::uniform(base, sub, mode));
        CHECK(e.nontransitive);
        if (mode == NestMode::dice_multiplication) {
          CHECK(block_dominance(win_matrix(solve(e.identity)), base_pattern, 3));
          CHECK(sides_of(e.identity) == 9);
        } else {
          CHECK(sides_of(e.identity) == 27);
        }
      }
    }
  }
}

TEST_CASE("per-die plans keep tied base faces on one identity") {
  const auto list = list_of(3, 3);
  std::size_t without_ties = 0;
  for (const auto& base : list) {
    const std::vector<Identity> by_die{list[0], list[1], list[2]};
    const auto plan = SubstitutionPlan::per_die(base, by_die, NestMode::face_exponentiation);
    CHECK(plan.heterogeneous(base) == false);
    if (has_cross_die_tie(base)) {
      CHECK_THROWS_AS(nest(base, plan), SpecialCaseViolation);
    } else {
      ++without_ties;
      CHECK(nest(base, plan).nontransitive);
      CHECK(nest(base, SubstitutionPlan::per_die(base, by_die, NestMode::dice_multiplication)).nontransitive);
    }
  }
  CHECK(without_ties == 5);
}

TEST_CASE("tied base faces must share a substituting identity") {
  const auto base = parse_identity("A<C<B=C<B<A<B<A<C");
  REQUIRE(has_cross_die_tie(base));
  auto plan = SubstitutionPlan::uniform(base, X, NestMode::face_exponentiation);
  plan.per_slot[2] = add_zero(X).identity;
  CHECK_THROWS_AS(nest(base, plan), ShapeMismatch);
  plan.per_slot[2] = parse_identity("A<C<B=B<A<C=C<B<A");
  CHECK_THROWS_AS(nest(base, plan), SpecialCaseViolation);
}

TEST_CASE("heterogeneous plans are detected") {
  auto plan = SubstitutionPlan::uniform(X, X, NestMode::face_exponentiation);
  CHECK_FALSE(plan.heterogeneous(X));
  plan.per_slot[0] = list_of(3, 3).front();
  CHECK(plan.heterogeneous(X));
}

TEST_CASE("non-viable input is rejected") {
  CHECK_THROWS_AS(add_zero(parse_identity("A<B<B")), NotViable);
  CHECK_THROWS_AS(multiply_by_one(parse_identity("A<A<B"), Op::less), NotViable);
}
