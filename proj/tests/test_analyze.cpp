#include <catch_amalgamated.hpp>

#include <numeric>
#include <sstream>

#include "ni/ni.hpp"

using namespace ni;

namespace {

using Seq = std::vector<std::uint64_t>;

}  // namespace

TEST_CASE("irreducible [3D3S] gaps") {
  const auto g = gap_sequence(make_descriptor(3, 3), Mode::irreducible);
  CHECK(g.identities.size() == 25);
  CHECK(g.gaps == Seq{42, 10, 7, 7, 1282, 10, 7, 7, 35, 505, 7, 7, 7, 45, 67, 42, 10, 7, 7, 211, 42, 10, 7, 7});
}

TEST_CASE("gaps rebuild the viable indexes") {
  for (auto mode : {Mode::irreducible, Mode::alphabetical_dupe, Mode::duplicative}) {
    const auto g = gap_sequence(make_descriptor(3, 3), mode);
    REQUIRE(g.gaps.size() + 1 == g.viable_indexes.size());
    std::uint64_t at = g.viable_indexes.front();
    for (std::size_t i = 0; i < g.gaps.size(); ++i) {
      CHECK(g.gaps[i] >= 1);
      at += g.gaps[i];
      CHECK(at == g.viable_indexes[i + 1]);
    }
  }
}

TEST_CASE("a list with at most one NI has no gaps") {
  CHECK(gap_sequence(make_descriptor(3, 2), Mode::irreducible).gaps.empty());
  const EnumerationRecord only{parse_identity("A<C<B<C<B<A<B<A<C"), 7, {}};
  CHECK(gaps_from_records(make_descriptor(3, 3), Mode::irreducible, {only}).gaps.empty());
}

TEST_CASE("42, 10, 7, 7 repeats three times in full and twice in part") {
  const auto g = gap_sequence(make_descriptor(3, 3), Mode::irreducible);
  const auto reports = find_repeats(g.gaps, RepeatOptions{4, 3});
  const auto* r = find_pattern(reports, {42, 10, 7, 7});
  REQUIRE(r != nullptr);
  CHECK(r->count() == 3);
  CHECK(r->positions == std::vector<std::size_t>{0, 15, 20});
  REQUIRE(r->partials.size() == 2);
  CHECK(r->partials[0].position == 5);
  CHECK(r->partials[0].length == 3);
  CHECK_FALSE(r->partials[0].prefix);
  CHECK(r->partials[1].position == 10);
  CHECK(r->partials[1].length == 2);
  CHECK(reports.size() == 1);
}

TEST_CASE("duplicative [3D3S] gaps tile into two patterns") {
  const auto g = gap_sequence(make_descriptor(3, 3), Mode::duplicative);
  CHECK(g.identities.size() == 152);
  const auto tiles = tile_repeats(g.gaps, RepeatOptions{4, 3});
  REQUIRE(tiles.size() == 2);
  CHECK(tiles[0].pattern == Seq{8, 4, 24, 12, 4, 8, 4});
  CHECK(tiles[0].count() == 13);
  CHECK(tiles[0].preceded_by.at(32) == 10);
  CHECK(tiles[1].pattern == Seq{168, 40, 8, 4});
  CHECK(tiles[1].count() == 8);
  CHECK(tiles[1].preceded_by.at(164) == 4);
}

TEST_CASE("maximal repeats of the duplicative gaps") {
  const auto g = gap_sequence(make_descriptor(3, 3), Mode::duplicative);
  const auto reports = find_repeats(g.gaps, RepeatOptions{4, 3});
  const auto* seven = find_pattern(reports, {8, 4, 24, 12, 4, 8, 4});
  REQUIRE(seven != nullptr);
  CHECK(seven->count() == 13);
  // Without tiling the four-element pattern only appears inside its longer
  // extension, which repeats just as often.
  CHECK(find_pattern(reports, {168, 40, 8, 4}) == nullptr);
  const auto* longer = find_pattern(reports, {168, 40, 8, 4, 32, 8, 4, 24, 12, 4, 8, 4});
  REQUIRE(longer != nullptr);
  CHECK(longer->count() == 8);
}

TEST_CASE("constant sequences") {
  const auto reports = find_repeats({5, 5, 5, 5}, RepeatOptions{2, 2});
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].pattern == Seq{5, 5});
  CHECK(reports[0].count() == 2);
  CHECK(reports[0].positions == std::vector<std::size_t>{0, 2});
}

TEST_CASE("occurrences never overlap") {
  const auto reports = find_repeats({1, 1, 1, 1, 1}, RepeatOptions{2, 2});
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].pattern == Seq{1, 1});
  CHECK(reports[0].count() == 2);
  CHECK(find_repeats({1, 2, 1, 2, 3}, RepeatOptions{2, 3}).empty());
}

TEST_CASE("split occurrences preserve the sum") {
  const Seq s{9, 2, 4, 1, 41, 2, 1, 2, 30, 2, 4, 1, 41, 2, 1, 2, 17, 2, 4, 1, 18, 2, 21, 2, 1, 2, 11, 2, 4, 1, 41, 2, 1, 2, 5};
  RepeatOptions opt{7, 3};
  opt.detect_splits = true;
  const auto reports = find_repeats(s, opt);
  const auto* r = find_pattern(reports, {2, 4, 1, 41, 2, 1, 2});
  REQUIRE(r != nullptr);
  CHECK(r->count() == 3);
  REQUIRE(r->splits.size() == 1);
  CHECK(r->splits[0].position == 17);
  CHECK(r->splits[0].element == 3);
  CHECK(r->splits[0].parts == Seq{18, 2, 21});
  for (const auto& rep : reports)
    for (const auto& sp : rep.splits)
      CHECK(std::accumulate(sp.parts.begin(), sp.parts.end(), std::uint64_t{0}) == rep.pattern[sp.element]);
}

TEST_CASE("splits are only searched on request") {
  const Seq s{2, 4, 1, 41, 2, 9, 2, 4, 1, 41, 2, 8, 2, 4, 1, 41, 2, 7, 2, 4, 1, 18, 2, 21, 2};
  const auto* r = find_pattern(find_repeats(s, RepeatOptions{5, 3}), {2, 4, 1, 41, 2});
  REQUIRE(r != nullptr);
  CHECK(r->splits.empty());
}

TEST_CASE("gap CSV") {
  const auto g = gap_sequence(make_descriptor(3, 3), Mode::irreducible);
  std::ostringstream os;
  write_gaps_csv(os, g);
  std::istringstream is(os.str());
  std::string header, first, second;
  std::getline(is, header);
  std::getline(is, first);
  std::getline(is, second);
  CHECK(header == "index,viable_index,gap,identity");
  CHECK(first.rfind("0," + std::to_string(g.viable_indexes[0]) + ",,", 0) == 0);
  CHECK(second.rfind("1," + std::to_string(g.viable_indexes[1]) + ",42,", 0) == 0);
}

TEST_CASE("repeat reports as JSON") {
  const auto reports = find_repeats({5, 5, 5, 5}, RepeatOptions{2, 2});
  const auto j = to_json(reports);
  REQUIRE(j.is_array());
  CHECK(j[0]["pattern"] == nlohmann::json::array({5, 5}));
  CHECK(j[0]["count"] == 2);
  CHECK(j[0]["preceded_by"]["5"] == 1);
  CHECK(j[0]["partials"].empty());
}
