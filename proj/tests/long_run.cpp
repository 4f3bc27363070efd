// Sweeps too slow for the default suite. Enabled with -DNI_LONG_TESTS=ON.

#include <algorithm>
#include <iostream>
#include <set>
#include <vector>

#include "ni/ni.hpp"

using namespace ni;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  failures += !ok;
  std::cout << (ok ? "PASS" : "FAIL") << " - " << name << " (" << detail << ")\n";
}

std::vector<Identity> identities(const std::vector<EnumerationRecord>& records) {
  std::vector<Identity> out;
  for (const auto& r : records) out.push_back(r.identity);
  return out;
}

}  // namespace

int main() {
  const auto three = identities(collect_ni(make_descriptor(3, 3), Mode::irreducible));

  {
    const auto d = make_descriptor(3, 5);
    const auto sequential = collect_ni(d, Mode::irreducible);
    const auto parallel = enumerate_ni_partitioned(d, Mode::irreducible, ParallelOptions{4, 3, std::nullopt});
    bool same = sequential.size() == parallel.size();
    for (std::size_t i = 0; same && i < sequential.size(); ++i) same = sequential[i].identity == parallel[i].identity;
    const auto p = pattern_from_descriptor(d);
    std::size_t verified = 0;
    for (const auto& r : sequential) verified += is_nontransitive(r.identity, p);
    report("[3D5S] enumeration", same && verified == sequential.size(),
           std::to_string(sequential.size()) + " NIs, partitioned run agrees");
  }

  {
    const auto d = parse_descriptor("[5D3S:]");
    const auto listed = identities(collect_ni(d, Mode::irreducible));
    const auto composed = generate_compositions(three, 1'000'000);
    const std::set<Identity> a(listed.begin(), listed.end()), b(composed.begin(), composed.end());
    report("[5D3S:] enumeration against composition", a == b,
           std::to_string(a.size()) + " enumerated, " + std::to_string(b.size()) + " composed");
  }

  {
    // Dropping four dice from a 3x3 dice-multiplication product never leaves
    // a 5-dice NI, under either step pattern.
    const auto p5 = parse_descriptor("[5D:]");
    const auto p51 = parse_descriptor("[5D:1]");
    std::size_t checked = 0, realised = 0;
    for (const auto& base : three)
      for (const auto& sub : three) {
        const auto nine = nest(base, SubstitutionPlan::uniform(base, sub, NestMode::dice_multiplication)).identity;
        std::vector<bool> mask(9, false);
        std::fill(mask.end() - 4, mask.end(), true);
        do {
          std::vector<Die> drop;
          for (int d = 0; d < 9; ++d)
            if (mask[static_cast<std::size_t>(d)]) drop.push_back(static_cast<Die>(d));
          ++checked;
          realised += check_removal(nine, drop, p5) || check_removal(nine, drop, p51);
        } while (std::next_permutation(mask.begin(), mask.end()));
      }
    report("9-dice removal sweep", realised == 0,
           std::to_string(realised) + " of " + std::to_string(checked) + " drop sets leave a 5-dice NI");
  }

  return failures == 0 ? 0 : 1;
}
