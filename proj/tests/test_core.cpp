#include <catch_amalgamated.hpp>

#include "ni/ni.hpp"

using namespace ni;

namespace {

const std::vector<Identity>& ni_3d3s() {
  static const auto list = [] {
    std::vector<Identity> out;
    for (const auto& r : collect_ni(make_descriptor(3, 3), Mode::irreducible)) out.push_back(r.identity);
    return out;
  }();
  return list;
}

}  // namespace

TEST_CASE("parse reads slots and operators") {
  const auto id = parse_identity("A<C<B<C<B<A<B<A<C");
  CHECK(id.size() == 9);
  CHECK(id.less_count() == 8);
  CHECK(id.dice_count() == 3);
  for (std::size_t i = 1; i < id.size(); ++i) CHECK(id.join(i) == Op::less);

  const auto single = parse_identity("A");
  CHECK(single.size() == 1);
  CHECK(single.less_count() == 0);
}

TEST_CASE("parse reports malformed input with its offset") {
  try {
    parse_identity("A<<B");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 2);
  }
  CHECK_THROWS_AS(parse_identity("A<B<"), SyntaxError);
  CHECK_THROWS_AS(parse_identity("A<b"), SyntaxError);
  CHECK_THROWS_AS(parse_identity("A+B"), SyntaxError);
  CHECK_THROWS_AS(parse_identity(""), SyntaxError);
  CHECK_THROWS_AS(parse_identity("<A"), SyntaxError);
}

TEST_CASE("whitespace is ignored on input and dropped on output") {
  CHECK(format_identity(parse_identity(" A < C = B ")) == "A<C=B");
}

TEST_CASE("format inverts parse") {
  CHECK(format_identity(parse_identity("A<C<B<C<B<A<B<A<C")) == "A<C<B<C<B<A<B<A<C");
  CHECK(format_identity(parse_identity("A")) == "A");
  for (const auto& id : ni_3d3s()) CHECK(parse_identity(format_identity(id)) == id);
}

TEST_CASE("viability counts faces per die") {
  const auto d = make_descriptor(3, 3);
  CHECK(is_viable(parse_identity("A=A=A=B=B=B=C=C=C"), d));
  CHECK_FALSE(is_viable(parse_identity("A=A=A=B=B=B=C=C<A"), d));
  CHECK_FALSE(is_viable(parse_identity("A<B<C"), d));
}

TEST_CASE("encoding uses '=' digits below k and '<' digits from k") {
  const auto all_equal = parse_identity("A=A=A=B=B=B=C=C=C");
  CHECK(encode_identity(all_equal, 3).to_string() == "00111222");
  CHECK(decode_identity(parse_encoding("00111222", 3)) == all_equal);

  // '<C' is 3 + 2, '<B' is 3 + 1, '<A' is 3 + 0.
  CHECK(encode_identity(parse_identity("A<C<B<C<B<A<B<A<C"), 3).to_string() == "54543435");
  CHECK(encode_identity(parse_identity("A"), 3).to_string().empty());
  CHECK(decode_identity(parse_encoding("", 3)) == parse_identity("A"));

  CHECK_THROWS_AS(encode_identity(parse_identity("B<A"), 3), Error);
  CHECK_THROWS_AS(parse_encoding("0016", 3), Error);
}

TEST_CASE("encoding round-trips every viable [3D3S] identity") {
  std::size_t seen = 0;
  std::string previous;
  enumerate_viable(make_descriptor(3, 3), Mode::duplicative, [&](const Identity& id, std::uint64_t) {
    const auto e = encode_identity(id, 3);
    REQUIRE(decode_identity(e) == id);
    const auto text = e.to_string();
    REQUIRE(text > previous);
    previous = text;
    ++seen;
  });
  CHECK(seen == 143360);
}

TEST_CASE("canonicalize sorts tied runs") {
  CHECK(format_identity(canonicalize(parse_identity("A<C<B=A=C"), CanonLevel::alphabetical_dupe)) == "A<C<A=B=C");
  CHECK(format_identity(canonicalize(parse_identity("C=A<B"), CanonLevel::alphabetical_dupe)) == "A=C<B");
}

TEST_CASE("irreducible form closes gaps between faces of one die") {
  CHECK(format_identity(canonicalize(parse_identity("A<C<B<C<B<A<B<A<C<A<A"), CanonLevel::irreducible)) ==
        "A<C<B<C<B<A<B<A<C<A=A");
  CHECK(format_identity(canonicalize(parse_identity("A<B<B<C"), CanonLevel::irreducible)) == "A<B=B<C");
  // The alphabetical level leaves such gaps alone.
  CHECK(format_identity(canonicalize(parse_identity("A<B<B<C"), CanonLevel::alphabetical_dupe)) == "A<B<B<C");
}

TEST_CASE("canonicalize is idempotent and keeps the verdict") {
  const auto pattern = pattern_from_descriptor(make_descriptor(3, 3));
  for (const auto& id : ni_3d3s()) {
    for (auto level : {CanonLevel::alphabetical_dupe, CanonLevel::irreducible}) {
      const auto once = canonicalize(id, level);
      CHECK(canonicalize(once, level) == once);
      CHECK(is_viable(once, 3, 3));
      CHECK(is_nontransitive(once, pattern));
    }
  }
  std::vector<Identity> dupes;
  enumerate_ni(make_descriptor(3, 3), Mode::duplicative, [&](const EnumerationRecord& r) { dupes.push_back(r.identity); });
  for (const auto& id : dupes) {
    const auto c = canonicalize(id, CanonLevel::irreducible);
    CHECK(canonicalize(c, CanonLevel::irreducible) == c);
    CHECK(is_nontransitive(c, pattern) == is_nontransitive(id, pattern));
  }
}

TEST_CASE("descriptors print the way they parse") {
  for (const char* text : {"[3D3S]", "[5D3S:]", "[5D3S:1]", "[7D3S::]", "[5D:1]", "[5D3S:] ACEBD", "[9D4S:2:1:]"}) {
    CHECK(format_descriptor(parse_descriptor(text)) == text);
  }
  const auto d = parse_descriptor("[7D3S:1:]");
  CHECK(d.dice == 7);
  CHECK(d.sides == 3);
  CHECK(d.steps == std::vector<int>{1, 0});
}

TEST_CASE("malformed descriptors are rejected") {
  CHECK_THROWS_AS(parse_descriptor("[4D3S]"), InvalidDescriptor);
  CHECK_THROWS_AS(parse_descriptor("[5D3S]"), InvalidDescriptor);
  CHECK_THROWS_AS(parse_descriptor("[3D3S:]"), InvalidDescriptor);
  CHECK_THROWS_AS(parse_descriptor("[5D3S:] ABCDA"), InvalidDescriptor);
  CHECK_THROWS_AS(parse_descriptor("3D3S"), SyntaxError);
  CHECK_THROWS_AS(parse_descriptor("[3D3S"), SyntaxError);
  CHECK_THROWS_AS(parse_descriptor("[3D3S] x"), SyntaxError);
}

TEST_CASE("win patterns follow the chain strides") {
  const auto p3 = pattern_from_descriptor(parse_descriptor("[3D3S]"));
  CHECK(p3.beats(0, 1));
  CHECK(p3.beats(1, 2));
  CHECK(p3.beats(2, 0));
  CHECK_FALSE(p3.beats(1, 0));

  const auto p5 = pattern_from_descriptor(parse_descriptor("[5D3S:]"));
  const auto p51 = pattern_from_descriptor(parse_descriptor("[5D3S:1]"));
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const int step = (j - i + 5) % 5;
      CHECK(p5.beats(i, j) == (step == 1 || step == 2));
      CHECK(p51.beats(i, j) == (step == 1 || step == 3));
    }
  }
  CHECK(p5.is_regular_tournament());
  CHECK(p51.is_regular_tournament());
  CHECK_FALSE(p5 == p51);
}

TEST_CASE("the two 5-dice patterns are isomorphic under the step map") {
  const auto p5 = pattern_from_descriptor(parse_descriptor("[5D:]"));
  const auto p51 = pattern_from_descriptor(parse_descriptor("[5D:1]"));
  // A->A, B->D, C->B, D->E, E->C
  CHECK(p5.relabeled({0, 3, 1, 4, 2}) == p51);
}

TEST_CASE("primary order suffix permutes the chain") {
  const auto p = pattern_from_descriptor(parse_descriptor("[3D] ACB"));
  CHECK(p.beats(0, 2));
  CHECK(p.beats(2, 1));
  CHECK(p.beats(1, 0));
}

TEST_CASE("strides that collapse a chain are invalid") {
  // k = 5 with steps {2}: the second chain strides 4, the reverse of the first.
  CHECK_THROWS_AS(pattern_from_descriptor(parse_descriptor("[5D:2]")), InvalidDescriptor);
  CHECK_THROWS_AS(pattern_from_descriptor(parse_descriptor("[5D:3]")), InvalidDescriptor);
}
