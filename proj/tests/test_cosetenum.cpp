#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "bmw/catalog.hpp"
#include "bmw/cosetenum.hpp"
#include "bmw/local_action.hpp"

using namespace bmw;

namespace {

GenericPresentation presentation(std::vector<std::string> gens, const std::vector<std::string>& rels) {
  GenericPresentation p;
  p.gens = std::move(gens);
  for (const auto& r : rels) p.relators.push_back(p.parse_word(r));
  return p;
}

// Coxeter presentation of Sym(n) on s1..s(n-1).
GenericPresentation coxeter_sym(int n) {
  std::vector<std::string> gens;
  for (int i = 1; i < n; ++i) gens.push_back("s" + std::to_string(i));
  std::vector<std::string> rels;
  for (int i = 1; i < n; ++i) {
    rels.push_back("s" + std::to_string(i) + "^2");
    for (int j = i + 1; j < n; ++j)
      rels.push_back("(s" + std::to_string(i) + " s" + std::to_string(j) + ")^" + (j == i + 1 ? "3" : "2"));
  }
  return presentation(gens, rels);
}

void check_table(const GenericPresentation& p, const CosetTable& t, const std::vector<Word>& subgroup) {
  REQUIRE(t.complete);
  std::vector<bool> seen(t.index(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (int d : t.rows[c]) {
      REQUIRE(d >= 0);
      if (!seen[d]) {
        seen[d] = true;
        stack.push_back(d);
      }
    }
  }
  CHECK(std::count(seen.begin(), seen.end(), true) == t.index());
  for (int c = 0; c < t.index(); ++c)
    for (const auto& r : p.relators) CHECK(t.act_word(c, r) == c);
  for (const auto& h : subgroup) CHECK(t.act_word(0, h) == 0);
}

// Determinantal divisors d_k = gcd of k×k minors; invariant factors are ratios.
BigInt det(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  BigInt out = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<BigInt> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    BigInt term = m[0][j] * det(minor);
    out += j % 2 ? BigInt(-term) : term;
  }
  return out;
}

std::vector<BigInt> invariant_factors_oracle(const IntMatrix& m) {
  const std::size_t r = m.size(), c = m[0].size();
  std::vector<BigInt> dk{1};
  for (std::size_t k = 1; k <= std::min(r, c); ++k) {
    BigInt g = 0;
    for (std::uint32_t rows = 0; rows < (1u << r); ++rows) {
      if (static_cast<std::size_t>(__builtin_popcount(rows)) != k) continue;
      for (std::uint32_t cols = 0; cols < (1u << c); ++cols) {
        if (static_cast<std::size_t>(__builtin_popcount(cols)) != k) continue;
        IntMatrix sub;
        for (std::size_t i = 0; i < r; ++i) {
          if (!(rows >> i & 1)) continue;
          std::vector<BigInt> row;
          for (std::size_t j = 0; j < c; ++j)
            if (cols >> j & 1) row.push_back(m[i][j]);
          sub.push_back(row);
        }
        g = gcd(g, BigInt(abs(det(sub))));
      }
    }
    dk.push_back(g);
  }
  std::vector<BigInt> out;
  for (std::size_t k = 1; k < dk.size(); ++k) out.push_back(dk[k] == 0 ? BigInt(0) : BigInt(dk[k] / dk[k - 1]));
  return out;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.size(), std::vector<BigInt>(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// Number of homomorphisms from the abelianization into an abelian group.
std::size_t predicted_abelian_homs(const Abelianization& ab, const PermGroup& target) {
  auto elems = target.elements();
  std::size_t out = 1;
  for (int i = 0; i < ab.free_rank; ++i) out *= elems.size();
  for (const auto& d : ab.torsion) {
    std::size_t n = 0;
    for (const auto& e : elems) {
      BigInt o = e.order();
      if (d % o == 0) ++n;
    }
    out *= n;
  }
  return out;
}

}  // namespace

TEST_CASE("gamma66 quotients by the two commutators have order 4") {
  auto g = to_generic(catalog_bmw("gamma66"));
  CHECK(quotient_order(g, {g.parse_word("[x^3, y^4]")}) == std::optional<std::uint64_t>(4));
  CHECK(quotient_order(g, {g.parse_word("[y^3, x^4]")}) == std::optional<std::uint64_t>(4));
}

TEST_CASE("killing a generator of the higman group collapses it") {
  auto h = catalog_generic("higman");
  CHECK(quotient_order(h, {h.parse_word("a0")}) == std::optional<std::uint64_t>(1));
}

TEST_CASE("infinite index overflows") {
  auto z2 = to_generic(catalog_bmw("z2"));
  for (std::size_t limit : {10, 100, 1000}) {
    auto t = todd_coxeter(z2, {z2.parse_word("a")}, {limit});
    CHECK(!t.complete);
  }
  CHECK(!quotient_order(z2, {}, {500}).has_value());
}

TEST_CASE("killing every generator gives the trivial group") {
  for (const char* name : {"sv", "wise", "gamma45", "ratt"}) {
    auto g = to_generic(catalog_bmw(name));
    std::vector<Word> all;
    for (int i = 1; i <= g.gen_count(); ++i) all.push_back({i});
    CHECK(quotient_order(g, all) == std::optional<std::uint64_t>(1));
  }
}

TEST_CASE("coxeter presentations of symmetric groups") {
  for (int n = 2; n <= 6; ++n) {
    auto p = coxeter_sym(n);
    auto t = todd_coxeter(p, {});
    check_table(p, t, {});
    int fact = 1;
    for (int k = 2; k <= n; ++k) fact *= k;
    CHECK(t.index() == fact);
    // point stabilizer Sym(n-1) has index n
    std::vector<Word> sub;
    for (int i = 1; i < n - 1; ++i) sub.push_back({i});
    auto s = todd_coxeter(p, sub);
    check_table(p, s, sub);
    CHECK(s.index() == n);
  }
}

TEST_CASE("small presentations") {
  auto a5 = presentation({"a", "b"}, {"a^2", "b^3", "(a b)^5"});
  CHECK(todd_coxeter(a5, {}).index() == 60);
  auto s3 = presentation({"a", "b"}, {"a^2", "b^3", "(a b)^2"});
  auto t = todd_coxeter(s3, {s3.parse_word("a")});
  check_table(s3, t, {s3.parse_word("a")});
  CHECK(t.index() == 3);
  auto cyc = presentation({"a"}, {"a^12"});
  CHECK(todd_coxeter(cyc, {cyc.parse_word("a^8")}).index() == 4);
}

TEST_CASE("tight limits still complete or overflow cleanly") {
  auto p = coxeter_sym(5);
  for (std::size_t limit : {60, 100, 120, 200, 400}) {
    auto t = todd_coxeter(p, {}, {limit});
    if (t.complete) {
      check_table(p, t, {});
      CHECK(t.index() == 120);
    }
  }
  CHECK(todd_coxeter(p, {}, {5000}).complete);
}

TEST_CASE("parity tables agree with the parity quotient") {
  for (const char* name : {"sv", "gamma45", "gamma66", "wise"}) {
    auto p = catalog_bmw(name);
    auto g = to_generic(p);
    auto t = parity_table(p);
    check_table(g, t, {});
    // coset c = 2·(A parity) + (X parity)
    CHECK(t.act(0, 1) == 2);
    CHECK(t.act(0, static_cast<int>(p.gens(Side::A).size()) + 1) == 1);
  }
}

TEST_CASE("reidemeister-schreier on free groups") {
  auto f2 = presentation({"a", "b"}, {});
  CosetTable even;
  even.gen_count = 2;
  even.complete = true;
  even.rows = {{1, 1, 1, 1}, {0, 0, 0, 0}};
  for (auto tree : {SpanningTree::Bfs, SpanningTree::Dfs}) {
    auto s = reidemeister_schreier(f2, even, tree);
    CHECK(s.gen_count() == 3);
    CHECK(s.relators.empty());
    CHECK(abelianization(s).text() == "Z^3");
  }
  // index k subgroup of F3 has rank 1 + k(3-1)
  auto f3 = presentation({"a", "b", "c"}, {});
  CosetTable cyc;
  cyc.gen_count = 3;
  cyc.complete = true;
  for (int c = 0; c < 5; ++c) cyc.rows.push_back({(c + 1) % 5, (c + 4) % 5, c, c, c, c});
  CHECK(reidemeister_schreier(f3, cyc).gen_count() == 1 + 5 * 2);
}

TEST_CASE("reidemeister-schreier at index one returns the group") {
  for (const char* name : {"klein", "sv", "jw"}) {
    auto g = to_generic(catalog_bmw(name));
    std::vector<Word> all;
    for (int i = 1; i <= g.gen_count(); ++i) all.push_back({i});
    auto t = todd_coxeter(g, all);
    REQUIRE(t.index() == 1);
    CHECK(abelianization(reidemeister_schreier(g, t)).text() == abelianization(g).text());
  }
}

TEST_CASE("parity subgroups of gamma45 and gamma66 are perfect") {
  for (const char* name : {"gamma45", "gamma66"}) {
    auto p = catalog_bmw(name);
    auto g = to_generic(p);
    for (auto tree : {SpanningTree::Bfs, SpanningTree::Dfs}) {
      auto s = reidemeister_schreier(g, parity_table(p), tree);
      CHECK(abelianization(s).trivial());
      CHECK(s.gen_count() >= 1);
    }
  }
}

TEST_CASE("spanning tree choice does not change the abelianization") {
  for (const char* name : {"sv", "jw", "klein", "z2", "wise", "rung", "gamma33"}) {
    auto p = catalog_bmw(name);
    auto g = to_generic(p);
    auto bfs = reidemeister_schreier(g, parity_table(p), SpanningTree::Bfs);
    auto dfs = reidemeister_schreier(g, parity_table(p), SpanningTree::Dfs);
    CHECK(abelianization(bfs).text() == abelianization(dfs).text());
  }
  auto p = coxeter_sym(4);
  auto t = todd_coxeter(p, {{1}, {2}});
  CHECK(abelianization(reidemeister_schreier(p, t, SpanningTree::Bfs)).text() ==
        abelianization(reidemeister_schreier(p, t, SpanningTree::Dfs)).text());
}

TEST_CASE("abelianizations") {
  CHECK(abelianization(to_generic(catalog_bmw("klein"))).text() == "Z + Z/2");
  CHECK(abelianization(to_generic(catalog_bmw("z2"))).text() == "Z^2");
  CHECK(abelianization(catalog_generic("higman")).trivial());
  CHECK(abelianization(catalog_generic("gamma45plus")).trivial());
  CHECK(abelianization(coxeter_sym(5)).text() == "Z/2");
}

TEST_CASE("smith normal form basics") {
  auto d = smith_normal_form({{2, 0}, {0, 3}}).diagonal;
  CHECK(d == std::vector<BigInt>{1, 6});
  auto z = smith_normal_form({{0, 0, 0}, {0, 0, 0}}).diagonal;
  CHECK(z == std::vector<BigInt>{0, 0});
}

TEST_CASE("smith normal form against determinantal divisors") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (int n = 0; n < 200; ++n) {
    IntMatrix m(4, std::vector<BigInt>(4));
    for (auto& row : m)
      for (auto& x : row) x = entry(rng);
    if (n % 5 == 0) m[3] = m[0];  // force rank deficiency sometimes
    auto s = smith_normal_form(m);
    CHECK(s.diagonal == invariant_factors_oracle(m));
    auto prod = multiply(multiply(s.u, m), s.v);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(prod[i][j] == (i == j ? s.diagonal[i] : BigInt(0)));
    CHECK(abs(det(s.u)) == 1);
    CHECK(abs(det(s.v)) == 1);
    for (std::size_t i = 0; i + 1 < 4; ++i)
      if (s.diagonal[i] != 0) CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
  }
}

TEST_CASE("abelianization is invariant under tietze moves") {
  std::mt19937_64 rng(7);
  std::vector<GenericPresentation> inputs = {to_generic(catalog_bmw("sv")), to_generic(catalog_bmw("klein")),
                                             to_generic(catalog_bmw("wise")), catalog_generic("baumslag"),
                                             coxeter_sym(4)};
  for (int n = 0; n < 100; ++n) {
    GenericPresentation p = inputs[n % inputs.size()];
    const std::string before = abelianization(p).text();
    for (int move = 0; move < 6; ++move) {
      auto rand_word = [&](int len) {
        Word w;
        for (int i = 0; i < len; ++i) {
          int g = static_cast<int>(rng() % p.gen_count()) + 1;
          w.push_back(rng() % 2 ? g : -g);
        }
        return w;
      };
      switch (rng() % 3) {
        case 0: {  // conjugate of a relator
          Word u = rand_word(2), r = p.relators[rng() % p.relators.size()];
          Word w = u;
          w.insert(w.end(), r.begin(), r.end());
          for (auto it = u.rbegin(); it != u.rend(); ++it) w.push_back(-*it);
          p.relators.push_back(w);
          break;
        }
        case 1: {  // product of two relators
          Word w = p.relators[rng() % p.relators.size()];
          Word r = p.relators[rng() % p.relators.size()];
          w.insert(w.end(), r.begin(), r.end());
          p.relators.push_back(w);
          break;
        }
        default: {  // new generator equal to a word
          Word w = rand_word(3);
          p.gens.push_back("g" + std::to_string(p.gens.size()));
          w.push_back(-p.gen_count());
          p.relators.push_back(w);
        }
      }
    }
    CHECK(abelianization(p).text() == before);
    CHECK(abelianization(tietze_reduce(p)).text() == before);
  }
}

TEST_CASE("homomorphisms of the free group") {
  auto f2 = presentation({"a", "b"}, {});
  auto s3 = named_perm_group("sym3");
  CHECK(find_homomorphisms(f2, s3).size() == 36);
  HomSearchOptions surj;
  surj.surjective_only = true;
  auto onto = find_homomorphisms(f2, s3, surj);
  std::size_t oracle = 0;
  for (const auto& a : s3.elements())
    for (const auto& b : s3.elements())
      if (closure(3, {a, b}, 100).size() == 6) ++oracle;
  CHECK(onto.size() == oracle);
  HomSearchOptions jobs;
  jobs.jobs = 3;
  CHECK(find_homomorphisms(f2, s3, jobs) == find_homomorphisms(f2, s3));
}

TEST_CASE("higman group maps trivially to small symmetric groups") {
  HomSearchOptions o;
  o.up_to_conjugacy = true;
  auto h = find_homomorphisms(catalog_generic("higman"), named_perm_group("sym5"), o);
  REQUIRE(h.size() == 1);
  for (const auto& g : h[0]) CHECK(g.is_identity());
}

TEST_CASE("baumslag group has only cyclic images in Sym(5)") {
  auto homs = find_homomorphisms(catalog_generic("baumslag"), named_perm_group("sym5"));
  CHECK(!homs.empty());
  for (const auto& h : homs) CHECK(is_cyclic(PermGroup(5, h)));
}

TEST_CASE("homomorphism counts to abelian targets match the abelianization") {
  std::vector<PermGroup> targets = {named_perm_group("c2"), PermGroup(4, {Permutation::from_cycles(4, {{0, 1}}),
                                                                          Permutation::from_cycles(4, {{2, 3}})}),
                                    named_perm_group("c6")};
  for (const char* name : {"klein", "z2", "sv", "jw", "gamma33", "rung"}) {
    auto g = to_generic(catalog_bmw(name));
    auto ab = abelianization(g);
    for (const auto& t : targets) CHECK(find_homomorphisms(g, t).size() == predicted_abelian_homs(ab, t));
  }
  auto b = catalog_generic("baumslag");
  for (const auto& t : targets) CHECK(find_homomorphisms(b, t).size() == predicted_abelian_homs(abelianization(b), t));
}

TEST_CASE("verify homomorphism") {
  auto e = catalog_generic("escher");
  auto imgs = escher_assignment(e);
  auto r = verify_homomorphism(e, imgs);
  CHECK(r.ok);
  CHECK(r.image_order == 50078);
  CHECK(imgs[0].degree() == 416);

  std::vector<Permutation> ids(e.gen_count(), Permutation(3));
  auto trivial = verify_homomorphism(e, ids);
  CHECK(trivial.ok);
  CHECK(trivial.image_order == 1);

  auto sv = catalog_bmw("sv");
  auto g = to_generic(sv);
  std::vector<Permutation> local;
  for (const auto& gen : sv.gens(Side::A)) local.push_back(sigma(sv, Side::X, *sv.find_letter(gen.name)).perm);
  for (std::size_t i = 0; i < sv.gens(Side::X).size(); ++i) local.push_back(Permutation(4));
  CHECK(!verify_homomorphism(g, local).ok);

  CHECK_THROWS_AS(verify_homomorphism(e, {Permutation(3)}), PreconditionError);
}

TEST_CASE("higman scan") {
  CHECK(higman_scan(1) == std::vector<std::uint64_t>{1});
  CHECK(higman_scan(1000000) == std::vector<std::uint64_t>{1});
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    BigInt p = 1;
    p <<= n;
    bool divides = (p - 1) % n == 0;
    CHECK(divides == (n == 1));
  }
}
