// Walkthrough of the library on the worked examples.

#include <iostream>

#include "ni/ni.hpp"

using namespace ni;

int main() {
  const auto x = parse_identity("A<C<B<C<B<A<B<A<C");
  std::cout << "identity      " << format_identity(x) << '\n';
  write_dice(std::cout, solve(x));

  const auto m = win_matrix(solve(x));
  std::cout << "A beats B " << m.wins(0, 1) << " to " << m.wins(1, 0) << '\n';

  const auto other = DiceSet({{1, 10, 14}, {7, 9, 13}, {4, 8, 22}});
  std::cout << "from dice     " << format_identity(dice_to_identity(other, make_descriptor(3, 3))) << '\n';

  std::cout << "add zero      " << format_identity(add_zero(x).identity) << '\n';
  std::cout << "mul one       " << format_identity(multiply_by_one(x, Op::equal).identity) << '\n';
  const auto nine = nest(x, SubstitutionPlan::uniform(x, x, NestMode::dice_multiplication));
  std::cout << "dice product  " << format_identity(nine.identity) << (nine.nontransitive ? "" : " (fails)") << '\n';

  const auto g = gap_sequence(make_descriptor(3, 3), Mode::irreducible);
  std::cout << g.identities.size() << " [3D3S] NIs, gaps:";
  for (auto v : g.gaps) std::cout << ' ' << v;
  std::cout << '\n';

  const auto five = parse_identity("A<D<B<E<C<E<D<C<B<A<C<B<A<E<D");
  write_composition_spec(std::cout, spec_from_decomposition(five));
  for (const auto& id : compose5(spec_from_decomposition(five))) std::cout << "composed      " << format_identity(id) << '\n';
  std::cout << "as [5D:1]     "
            << format_identity(step_relabel(five, parse_descriptor("[5D:]"), parse_descriptor("[5D:1]"))) << '\n';
}
