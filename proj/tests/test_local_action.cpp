#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bmw/catalog.hpp"
#include "bmw/local_action.hpp"
#include "test_util.hpp"

using namespace bmw;

TEST_CASE("stix-vdovina sigma(a) on the X-star") {
  auto p = catalog_bmw("sv");
  auto s = sigma(p, Side::X, *p.find_letter("a"));
  CHECK(label_cycles(p, Side::X, s.perm) == "(x y^-1 y x^-1)");
}

TEST_CASE("stix-vdovina local group is Sym(4) on both sides") {
  auto p = catalog_bmw("sv");
  for (Side side : {Side::A, Side::X}) {
    auto g = local_group(p, side);
    CHECK(g.order() == 24);
    CHECK(identify_label(signature(g)) == "Sym(4)");
  }
}

TEST_CASE("janzen-wise sigma on the X-star") {
  auto p = catalog_bmw("jw");
  // derived by hand from the corner table of axay, ax^-1by^-1, ay^-1b^-1x^-1, bxb^-1y^-1
  CHECK(label_cycles(p, Side::X, sigma(p, Side::X, *p.find_letter("a")).perm) == "(x y^-1)(y x^-1)");
  CHECK(label_cycles(p, Side::X, sigma(p, Side::X, *p.find_letter("b")).perm) == "(x y x^-1 y^-1)");
  CHECK(identify_label(signature(local_group(p, Side::X))) == "D8");
}

TEST_CASE("z2 acts trivially") {
  auto p = catalog_bmw("z2");
  CHECK(sigma(p, Side::X, *p.find_letter("a")).perm.is_identity());
}

TEST_CASE("local groups of catalog entries") {
  CHECK(identify_label(signature(local_group(catalog_bmw("gamma33"), Side::X))) == "C2");
  CHECK(identify_label(signature(local_group(catalog_bmw("gamma66"), Side::X))) == "Alt(6)");
  for (const char* name : {"z2", "klein"})
    for (Side side : {Side::A, Side::X}) CHECK(local_group(catalog_bmw(name), side).order() <= 2);
}

TEST_CASE("classification flags") {
  auto w = classify(catalog_bmw("wise"));
  CHECK(w.a.label == "C2 x C2");
  CHECK(w.a.nilpotent);
  CHECK_FALSE(w.a.note.empty());
  CHECK(w.x.label == "Sym(3) x Sym(3)");
  auto jw = classify(catalog_bmw("jw"));
  CHECK(jw.a.label == "Alt(4)");
  CHECK(jw.x.label == "D8");
  CHECK(jw.x.nilpotent);
  CHECK(jw.a.contains_alt);
  auto g45 = classify(catalog_bmw("gamma45"));
  CHECK(g45.a.label == "Sym(4)");
  CHECK(g45.x.label == "Sym(5)");
  CHECK(g45.x.two_transitive);
  CHECK(g45.x.primitive);
}

TEST_CASE("sigma of inverse letters and involutions") {
  std::mt19937_64 rng(17);
  std::vector<BmwPresentation> ps;
  for (const auto& info : catalog_index())
    if (info.kind == "bmw") ps.push_back(catalog_bmw(info.name));
  for (int i = 0; i < 120; ++i) ps.push_back(testutil::random_presentation(rng, 1 + rng() % 3, 1 + rng() % 3));
  for (const auto& p : ps) {
    auto k = corner_map(p);
    for (Side side : {Side::A, Side::X}) {
      Side other = opposite(side);
      for (Letter g : p.star_labels(other)) {
        auto s = sigma(p, k, side, g).perm;
        auto si = sigma(p, k, side, g.inv()).perm;
        CHECK(si == s.inverse());
        if (g.involutive) CHECK(compose(s, s).is_identity());
      }
    }
  }
}

TEST_CASE("local group survives re-canonicalization") {
  for (const auto& name : table1_names()) {
    auto p = catalog_bmw(name);
    auto q = parse_bmw(serialize_bmw(p));
    for (Side side : {Side::A, Side::X})
      CHECK(local_group(p, side).elements() == local_group(q, side).elements());
  }
}

TEST_CASE("table rows") {
  auto rows = table1_report();
  REQUIRE(rows.size() == 9);
  CHECK(rows[0].label_a == "Sym(3)");
  CHECK(rows[7].label_a == "Sym(3) x C3");
  CHECK(rows[8].label_a == "Sym(6)");
  CHECK(rows[8].label_x == "Alt(6)");
}
