#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <tuple>

#include "bmw/catalog.hpp"
#include "bmw/enumerate.hpp"
#include "bmw/local_action.hpp"
#include "test_util.hpp"

using namespace bmw;

namespace {

// Random signed relabeling: generator order shuffled, non-involutive
// generators inverted at random.
BmwPresentation relabel(const BmwPresentation& p, std::mt19937_64& rng) {
  std::array<std::vector<int>, 2> perm;
  std::array<std::vector<bool>, 2> flip;
  std::array<std::vector<Generator>, 2> gens;
  for (Side s : {Side::A, Side::X}) {
    int i = static_cast<int>(s);
    int n = static_cast<int>(p.gens(s).size());
    perm[i].resize(n);
    std::iota(perm[i].begin(), perm[i].end(), 0);
    std::shuffle(perm[i].begin(), perm[i].end(), rng);
    gens[i].resize(n);
    for (int g = 0; g < n; ++g) {
      gens[i][perm[i][g]] = {p.gens(s)[g].name + "_r", p.gens(s)[g].involutive};
      flip[i].push_back(!p.gens(s)[g].involutive && rng() % 2);
    }
  }
  auto map = [&](Letter l) {
    int i = static_cast<int>(l.side);
    l.inverse = l.inverse != flip[i][l.id];
    l.id = static_cast<std::uint16_t>(perm[i][l.id]);
    return l;
  };
  std::vector<Square> sqs;
  for (const Square& s : p.squares()) sqs.push_back({map(s.a1), map(s.x1), map(s.a2), map(s.x2)});
  return BmwPresentation(gens[0], gens[1], sqs);
}

// Exchanges the roles of A and X.
BmwPresentation swap_sides(const BmwPresentation& p) {
  auto flip = [](Letter l) {
    l.side = l.side == Side::A ? Side::X : Side::A;
    return l;
  };
  std::vector<Square> sqs;
  for (const Square& s : p.squares()) sqs.push_back({flip(s.x1), flip(s.a2), flip(s.x2), flip(s.a1)});
  return BmwPresentation(p.gens(Side::X), p.gens(Side::A), sqs);
}

bool contains(const EnumerationResult& r, const CanonicalForm& f) {
  return std::binary_search(r.classes.begin(), r.classes.end(), f);
}

EnumerateOptions torsion_free(CountMode mode = CountMode::Complexes, int jobs = 1) {
  EnumerateOptions o;
  o.torsion_free = true;
  o.mode = mode;
  o.jobs = jobs;
  return o;
}

}  // namespace

TEST_CASE("degree (1,1) has a single presentation") {
  CHECK(enumerate({0, 1, 0, 1}).count() == 1);
}

TEST_CASE("torsion-free degree (2,2) gives the torus and the Klein bottle") {
  auto r = enumerate({1, 0, 1, 0}, torsion_free());
  CHECK(r.count() == 2);
  CHECK(contains(r, canonical_form(catalog_bmw("z2"), true)));
  CHECK(contains(r, canonical_form(catalog_bmw("klein"), true)));
}

TEST_CASE("torsion-free degree (4,4) complexes") {
  auto r = enumerate({2, 0, 2, 0}, torsion_free());
  CHECK(r.count() == 52);
  CHECK(contains(r, canonical_form(catalog_bmw("sv"), true)));
  CHECK(contains(r, canonical_form(catalog_bmw("jw"), true)));
  // presentations mode forgets the swap, so classes can only split
  auto pres = enumerate({2, 0, 2, 0}, torsion_free(CountMode::Presentations));
  CHECK(pres.count() >= r.count());
  CHECK(pres.count() <= 2 * r.count());
}

TEST_CASE("stix-vdovina and janzen-wise are inequivalent") {
  CHECK(canonical_form(catalog_bmw("sv"), true) != canonical_form(catalog_bmw("jw"), true));
}

TEST_CASE("canonical form is invariant under relabeling") {
  std::mt19937_64 rng(5);
  for (const char* name : {"sv", "jw", "wise", "ratt", "gamma33", "rung", "klein", "gamma45"}) {
    auto p = catalog_bmw(name);
    auto f = canonical_form(p, false);
    for (int i = 0; i < 10; ++i) CHECK(canonical_form(relabel(p, rng), false) == f);
  }
  for (int i = 0; i < 100; ++i) {
    auto p = testutil::random_presentation(rng, 1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 3));
    CHECK(canonical_form(relabel(p, rng), true) == canonical_form(p, true));
  }
}

TEST_CASE("swap closure") {
  auto sv = catalog_bmw("jw");
  auto sw = swap_sides(sv);
  CHECK(canonical_form(sw, true) == canonical_form(sv, true));
  CHECK(canonical_form(sw, false) != canonical_form(sv, false));
}

TEST_CASE("emitted presentations validate and are canonical") {
  for (auto mode : {CountMode::Complexes, CountMode::Presentations}) {
    auto r = enumerate({2, 0, 2, 0}, torsion_free(mode));
    for (const auto& f : r.classes) {
      auto p = to_presentation(f);
      REQUIRE(validate(p).ok());
      CHECK(torsion_profile(p).torsion_free());
      CHECK(canonical_form(p, mode == CountMode::Complexes) == f);
    }
  }
  for (const auto& f : enumerate({1, 1, 0, 2}).classes) {
    REQUIRE(validate(to_presentation(f)).ok());
    CHECK(canonical_form(to_presentation(f), true) == f);
  }
}

TEST_CASE("random presentations appear in the enumeration of their profile") {
  std::mt19937_64 rng(17);
  std::map<std::pair<Profile, bool>, EnumerationResult> cache;
  for (int i = 0; i < 1000; ++i) {
    auto p = testutil::random_presentation(rng, 1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 2));
    bool swap = rng() % 2;
    auto key = std::pair{Profile::of(p), swap};
    if (!cache.count(key)) {
      EnumerateOptions o;
      o.mode = swap ? CountMode::Complexes : CountMode::Presentations;
      cache[key] = enumerate(key.first, o);
    }
    CHECK(contains(cache[key], canonical_form(p, swap)));
  }
}

TEST_CASE("enumeration is independent of the job count") {
  for (Profile pr : {Profile{2, 0, 2, 0}, Profile{2, 0, 3, 0}}) {
    auto one = enumerate(pr, torsion_free(CountMode::Complexes, 1));
    auto four = enumerate(pr, torsion_free(CountMode::Complexes, 4));
    CHECK(one.classes == four.classes);
    CHECK(one.labelled == four.labelled);
  }
  auto a = enumerate({1, 1, 1, 1}, EnumerateOptions{CountMode::Presentations, false, 1, 0, ""});
  auto b = enumerate({1, 1, 1, 1}, EnumerateOptions{CountMode::Presentations, false, 3, 0, ""});
  CHECK(a.classes == b.classes);
}

TEST_CASE("randomized 1 vs k thread determinism") {
  std::mt19937_64 rng(31);
  std::map<std::tuple<Profile, int, bool>, EnumerationResult> serial;
  int cases = 0;
  while (cases < 100) {
    int M = 1 + static_cast<int>(rng() % 4), N = 1 + static_cast<int>(rng() % 4);
    if (M * N > 12) continue;
    int m = static_cast<int>(rng() % (M / 2 + 1)), n = static_cast<int>(rng() % (N / 2 + 1));
    Profile pr{m, M - 2 * m, n, N - 2 * n};
    bool tf = pr.m_inv == 0 && pr.n_inv == 0 && rng() % 2;
    auto mode = rng() % 2 ? CountMode::Complexes : CountMode::Presentations;
    EnumerateOptions o{mode, tf, 1, 0, ""};
    auto key = std::tuple{pr, static_cast<int>(mode), tf};
    if (!serial.count(key)) serial[key] = enumerate(pr, o);
    o.jobs = 2 + static_cast<int>(rng() % 5);
    auto par = enumerate(pr, o);
    CAPTURE(o.jobs);
    CHECK(par.classes == serial[key].classes);
    CHECK(par.labelled == serial[key].labelled);
    ++cases;
  }
  CHECK(cases >= 100);
}

TEST_CASE("node budget raises ResourceLimit and the checkpoint resumes") {
  auto path = (std::filesystem::temp_directory_path() / "bmw_enum_checkpoint.json").string();
  std::filesystem::remove(path);
  auto full = enumerate({2, 0, 3, 0}, torsion_free());
  auto o = torsion_free();
  o.checkpoint = path;
  o.max_nodes = 2000;
  int interruptions = 0;
  EnumerationResult r;
  for (;;) {
    try {
      r = enumerate({2, 0, 3, 0}, o);
      break;
    } catch (const ResourceLimit&) {
      ++interruptions;
      REQUIRE(interruptions < 10000);
    }
  }
  CHECK(interruptions > 0);
  CHECK(r.classes == full.classes);
  CHECK(r.count() == 1001);
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint of a different enumeration is rejected") {
  auto path = (std::filesystem::temp_directory_path() / "bmw_enum_checkpoint2.json").string();
  auto o = torsion_free();
  o.checkpoint = path;
  enumerate({1, 0, 1, 0}, o);
  CHECK_THROWS_AS(enumerate({2, 0, 2, 0}, o), PreconditionError);
  std::filesystem::remove(path);
}

TEST_CASE("invalid profiles") {
  CHECK_THROWS_AS(enumerate({0, 0, 1, 0}), PreconditionError);
  CHECK_THROWS_AS(enumerate({1, 1, 1, 0}, torsion_free()), PreconditionError);
}

TEST_CASE("filters over the (4,4) stream") {
  auto r = enumerate({2, 0, 2, 0}, torsion_free());
  CHECK(filter_enumeration(r, {}) == 52);
  // every class whose local actions are at most C2 has an abelian-like square set
  auto small = [](const BmwPresentation& p) {
    return local_group(p, Side::A).order() <= 2 && local_group(p, Side::X).order() <= 2;
  };
  CHECK(filter_enumeration(r, small) >= 1);
  auto sv = canonical_form(catalog_bmw("sv"), true), jw = canonical_form(catalog_bmw("jw"), true);
  std::vector<CanonicalForm> both_2t, both_transitive;
  for (const auto& f : r.classes) {
    auto c = classify(to_presentation(f));
    if (c.a.two_transitive && c.x.two_transitive) both_2t.push_back(f);
    if (local_group(to_presentation(f), Side::A).is_transitive() &&
        local_group(to_presentation(f), Side::X).is_transitive())
      both_transitive.push_back(f);
  }
  // the X-side action of janzen-wise is D8, so only stix-vdovina is 2-transitive on both sides
  CHECK(both_2t == std::vector<CanonicalForm>{sv});
  CHECK(std::find(both_transitive.begin(), both_transitive.end(), jw) != both_transitive.end());
}
