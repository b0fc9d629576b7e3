#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bmw/catalog.hpp"
#include "bmw/core.hpp"
#include "test_util.hpp"

using namespace bmw;

namespace {

std::pair<Letter, Letter> corner(const BmwPresentation& p, const std::string& a, const std::string& x) {
  return {*p.find_letter(a), *p.find_letter(x)};
}

}  // namespace

TEST_CASE("parse stix-vdovina document") {
  auto p = catalog_bmw("sv");
  CHECK(p.degree().M() == 4);
  CHECK(p.degree().N() == 4);
  CHECK(p.squares().size() == 4);
}

TEST_CASE("parse rejects malformed documents") {
  CHECK_THROWS_AS(parse_bmw(R"({"a_gens":[{"name":"a","involutive":false}],
                               "x_gens":[{"name":"a","involutive":false}],"squares":[]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_bmw(R"({"a_gens":[{"name":"a","involutive":false}],
                               "x_gens":[{"name":"x","involutive":false}],"squares":[["a","q","a","x"]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_bmw(R"({"a_gens":[{"name":"a","involutive":false}],
                               "x_gens":[{"name":"x","involutive":false}],"squares":[["x","a","a","x"]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_bmw(R"({"a_gens":[{"name":"a","involutive":true}],
                               "x_gens":[{"name":"x","involutive":true}],"squares":[["a^-1","x","a","x"]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_bmw("{not json"), ParseError);
}

TEST_CASE("z2 corner map") {
  auto p = catalog_bmw("z2");
  auto k = corner_map(p);
  auto [a, x] = corner(p, "a", "x");
  CHECK(k(a, x) == std::pair{a.inv(), x.inv()});
}

TEST_CASE("stix-vdovina corner (a,x) maps to (a,y)") {
  auto p = catalog_bmw("sv");
  auto k = corner_map(p);
  auto [a, x] = corner(p, "a", "x");
  CHECK(k(a, x) == std::pair{a, *p.find_letter("y")});
}

TEST_CASE("removing a square leaves an uncovered corner") {
  auto p = catalog_bmw("sv");
  std::vector<Square> sq;
  auto b = *p.find_letter("b"), x = *p.find_letter("x"), yi = *p.find_letter("y^-1");
  Square drop = Square{b, x, b, yi}.canonical();
  for (const auto& s : p.squares())
    if (!(s == drop)) sq.push_back(s);
  CHECK(sq.size() == 3);
  BmwPresentation q(p.gens(Side::A), p.gens(Side::X), sq);
  auto r = validate(q);
  REQUIRE_FALSE(r.ok());
  bool found = false;
  for (const auto& v : r.violations)
    if (v.kind == Violation::Kind::Uncovered && v.a == b && v.x == x) found = true;
  CHECK(found);
  CHECK_THROWS_AS(corner_map(q), ValidationError);
}

TEST_CASE("doubly covered corner is reported") {
  auto p = parse_bmw(R"({"a_gens":[{"name":"a","involutive":false}],
                        "x_gens":[{"name":"x","involutive":false}],
                        "squares":[["a","x","a^-1","x^-1"],["a","x","a^-1","x"]]})");
  auto r = validate(p);
  REQUIRE_FALSE(r.ok());
  bool doubly = false;
  for (const auto& v : r.violations) doubly = doubly || v.kind == Violation::Kind::DoublyCovered;
  CHECK(doubly);
}

TEST_CASE("degenerate degree is rejected") {
  BmwPresentation p({{"a", false}}, {}, {});
  CHECK_FALSE(validate(p).ok());
}

TEST_CASE("catalog degrees") {
  struct Row {
    const char* name;
    int M, N;
  };
  for (Row r : {Row{"wise", 4, 6}, Row{"sv", 4, 4}, Row{"jw", 4, 4}, Row{"ratt", 4, 6}, Row{"bdr", 6, 6},
                Row{"rung", 3, 3}, Row{"gamma33", 3, 3}, Row{"gamma45", 4, 5}, Row{"gamma66", 6, 6},
                Row{"z2", 2, 2}, Row{"klein", 2, 2}, Row{"c2xc2", 1, 1}}) {
    CAPTURE(r.name);
    auto p = catalog_bmw(r.name);
    CHECK(validate(p).ok());
    CHECK(p.degree().M() == r.M);
    CHECK(p.degree().N() == r.N);
    auto info = catalog_info(r.name);
    REQUIRE(info.degree.has_value());
    CHECK(info.degree->first == r.M);
    CHECK(info.degree->second == r.N);
  }
}

TEST_CASE("wise has 6 squares on 5 generators") {
  auto p = catalog_bmw("wise");
  CHECK(p.gens(Side::A).size() + p.gens(Side::X).size() == 5);
  CHECK(p.squares().size() == 6);
}

TEST_CASE("generic catalog entries") {
  auto g = catalog_generic("gamma45plus");
  CHECK(g.gen_count() == 6);
  CHECK(g.relators.size() == 11);
  CHECK(catalog_generic("higman").gen_count() == 4);
  CHECK_THROWS_AS(catalog("nosuch"), PreconditionError);
}

TEST_CASE("four-reading symmetry on catalog and random presentations") {
  std::mt19937_64 rng(7);
  std::vector<BmwPresentation> ps;
  for (const auto& info : catalog_index())
    if (info.kind == "bmw") ps.push_back(catalog_bmw(info.name));
  for (int i = 0; i < 150; ++i) ps.push_back(testutil::random_presentation(rng, 1 + rng() % 3, 1 + rng() % 3));
  for (const auto& p : ps) {
    auto k = corner_map(p);
    int corners = 0;
    for (Letter a : k.a_labels())
      for (Letter x : k.x_labels()) {
        auto [a2, x2] = k(a, x);
        CHECK(k(a2, x2) == std::pair{a, x});
        CHECK(k(a.inv(), x2.inv()) == std::pair{a2.inv(), x.inv()});
        CHECK(k(a2.inv(), x.inv()) == std::pair{a.inv(), x2.inv()});
        ++corners;
      }
    CHECK(corners == k.M() * k.N());
    std::size_t covered = 0;
    for (const auto& s : p.squares()) covered += covered_corners(s).size();
    CHECK(covered == static_cast<std::size_t>(k.M() * k.N()));
    auto d = p.degree();
    if (d.m_inv == 0 && d.n_inv == 0) CHECK(static_cast<int>(p.squares().size()) >= d.m * d.n);
  }
}

TEST_CASE("serialize round trip") {
  for (const auto& info : catalog_index()) {
    if (info.kind != "bmw") continue;
    auto p = catalog_bmw(info.name);
    std::string t = serialize_bmw(p);
    CHECK(parse_bmw(t) == p);
    CHECK(serialize_bmw(parse_bmw(t)) == t);
  }
  auto g = catalog_generic("escher");
  std::string t = serialize_generic(g);
  CHECK(serialize_generic(parse_generic(t)) == t);
}

TEST_CASE("torsion profiles") {
  CHECK(torsion_profile(catalog_bmw("sv")).torsion_free());
  CHECK_FALSE(torsion_profile(catalog_bmw("rung")).torsion_free());
  auto g66 = torsion_profile(catalog_bmw("gamma66"));
  CHECK(g66.generators_infinite_order);
  CHECK(g66.square_count == 10);
  CHECK_FALSE(g66.minimal_square_count);
}

TEST_CASE("degree (1,1)") {
  auto p = catalog_bmw("c2xc2");
  CHECK(p.degree() == Degree{0, 1, 0, 1});
}

TEST_CASE("parity quotient has index 4 and is closed") {
  for (const auto& info : catalog_index()) {
    if (info.kind != "bmw") continue;
    auto p = catalog_bmw(info.name);
    auto q = parity_quotient(p);
    CHECK(q.index() == 4);
    CHECK(q.columns.size() == static_cast<std::size_t>(p.degree().M() + p.degree().N()));
    for (const auto& row : q.rows)
      for (int c : row) CHECK((c >= 0 && c < 4));
  }
}

TEST_CASE("amalgam ranks") {
  auto [f1, f2] = amalgam_ranks(4, 5);
  CHECK(f2.factor_rank == 3);
  CHECK(f2.amalgamated_rank == 11);
  auto [g1, g2] = amalgam_ranks(6, 6);
  CHECK(g1.factor_rank == 5);
  CHECK(g1.amalgamated_rank == 25);
  auto [h1, h2] = amalgam_ranks(2, 2);
  CHECK(h1.factor_rank == 1);
  CHECK(h1.amalgamated_rank == 1);
  CHECK_FALSE(f1.caveat.empty());
}

TEST_CASE("subpresentations") {
  CHECK(is_subpresentation(catalog_bmw("jw"), catalog_bmw("gamma66")));
  CHECK(is_subpresentation(catalog_bmw("gamma33"), catalog_bmw("gamma45")));
  CHECK_FALSE(is_subpresentation(catalog_bmw("sv"), catalog_bmw("jw")));
}

TEST_CASE("generic word parsing") {
  GenericPresentation g{{"x", "y"}, {}};
  Word w = g.parse_word("[x^3, y^4]");
  CHECK(w.size() == 14);
  CHECK(g.word_text(w) == "x^3 y^4 x^-3 y^-4");
  CHECK(g.parse_word("x y = y x") == g.parse_word("[x, y]"));
  CHECK(g.parse_word("(x y)^2") == Word{1, 2, 1, 2});
  CHECK(g.parse_word("x x^-1").empty());
  CHECK_THROWS_AS(g.parse_word("q"), ParseError);
  CHECK_THROWS_AS(parse_generic(R"({"gens":["a"],"relators":[""]})"), ParseError);
}
