#include "bmw/marked.hpp"

#include <algorithm>
#include <cstdlib>

namespace bmw {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool shortlex(const Word& u, const Word& v) {
  if (u.size() != v.size()) return u.size() < v.size();
  return u < v;
}

}  // namespace

MarkedOracle permutation_oracle(std::vector<Permutation> gens, std::string name) {
  if (gens.empty()) throw PreconditionError("marking needs at least one generator");
  for (const auto& g : gens)
    if (g.degree() != gens[0].degree()) throw PreconditionError("marking generators have different degrees");
  std::vector<Permutation> inv;
  for (const auto& g : gens) inv.push_back(g.inverse());
  const int d = static_cast<int>(gens.size());
  return {d, std::move(name), [gens = std::move(gens), inv = std::move(inv)](const Word& w) {
            std::vector<Point> x(gens[0].degree());
            for (Point i = 0; i < x.size(); ++i) x[i] = i;
            // track the image of every point under the word, first letter first
            for (int tok : w) {
              const Permutation& g = tok > 0 ? gens[tok - 1] : inv[-tok - 1];
              for (auto& v : x) v = g(v);
            }
            for (Point i = 0; i < x.size(); ++i)
              if (x[i] != i) return false;
            return true;
          }};
}

MarkedOracle lamplighter_oracle(int p) {
  if (p < 2) throw PreconditionError("lamplighter needs p >= 2");
  return {2, "C" + std::to_string(p) + " wr Z", [p](const Word& w) {
            const long L = static_cast<long>(w.size());
            std::vector<int> lamps(2 * L + 1, 0);
            long pos = 0;
            for (int tok : w) {
              if (std::abs(tok) == 1) {
                int& l = lamps[pos + L];
                l = ((l + (tok > 0 ? 1 : -1)) % p + p) % p;
              } else if (std::abs(tok) == 2) {
                pos += tok > 0 ? 1 : -1;
              } else {
                throw PreconditionError("lamplighter words use two generators");
              }
            }
            return pos == 0 && std::all_of(lamps.begin(), lamps.end(), [](int l) { return l == 0; });
          }};
}

std::vector<Word> trivial_words(const MarkedOracle& o, int L, const WordBudget& budget) {
  if (L < 0) throw PreconditionError("word length must be non-negative");
  const std::uint64_t letters = 2 * static_cast<std::uint64_t>(o.arity);
  std::uint64_t total = 0, layer = 1;
  for (int l = 0; l <= L; ++l) {
    total += layer;
    if (total > budget.max_words) throw ResourceLimit("trivial_words: more than " + std::to_string(budget.max_words) + " words");
    layer *= letters;
  }
  std::vector<int> alphabet;
  for (int g = 1; g <= o.arity; ++g) {
    alphabet.push_back(g);
    alphabet.push_back(-g);
  }
  std::sort(alphabet.begin(), alphabet.end());
  std::vector<Word> out;
  for (int l = 0; l <= L; ++l) {
    std::vector<std::size_t> digits(l, 0);
    Word w(l, alphabet.empty() ? 0 : alphabet[0]);
    for (;;) {
      if (o.is_trivial(w)) out.push_back(w);
      int k = l - 1;
      while (k >= 0 && digits[k] + 1 == alphabet.size()) {
        digits[k] = 0;
        w[k] = alphabet[0];
        --k;
      }
      if (k < 0) break;
      w[k] = alphabet[++digits[k]];
    }
  }
  std::sort(out.begin(), out.end(), shortlex);
  return out;
}

BallComparison balls_isomorphic(const MarkedOracle& o1, const MarkedOracle& o2, int n, const WordBudget& budget) {
  if (o1.arity != o2.arity) throw PreconditionError("marked groups have different arities");
  if (n < 0) throw PreconditionError("radius must be non-negative");
  auto t1 = trivial_words(o1, 2 * n, budget), t2 = trivial_words(o2, 2 * n, budget);
  BallComparison out;
  out.radius = n;
  out.isomorphic = t1 == t2;
  if (!out.isomorphic) {
    std::vector<Word> only1, only2;
    std::set_difference(t1.begin(), t1.end(), t2.begin(), t2.end(), std::back_inserter(only1), shortlex);
    std::set_difference(t2.begin(), t2.end(), t1.begin(), t1.end(), std::back_inserter(only2), shortlex);
    if (!only1.empty() && (only2.empty() || shortlex(only1[0], only2[0]))) {
      out.witness = only1[0];
      out.witness_trivial_in_first = true;
    } else {
      out.witness = only2[0];
    }
  }
  return out;
}

std::optional<BallComparison> first_mismatch(const MarkedOracle& o1, const MarkedOracle& o2, int max_radius,
                                             const WordBudget& budget) {
  auto all = balls_isomorphic(o1, o2, max_radius, budget);
  if (all.isomorphic) return std::nullopt;
  // trivial-word sets are nested in L, so the shortest witness fixes the radius
  int len = static_cast<int>(all.witness->size());
  all.radius = (len + 1) / 2;
  return all;
}

MarkedOracle AltPair::oracle() const {
  return permutation_oracle({a, t}, "alt(" + std::to_string(p) + "," + std::to_string(q) + ")");
}

AltPair alt_pair(int p, int q) {
  if (!is_prime(p) || !is_prime(q)) throw PreconditionError("alt_pair needs primes p and q");
  if (q <= 2 * p) throw PreconditionError("alt_pair needs q > 2p");
  AltPair out;
  out.p = p;
  out.q = q;
  const auto n = static_cast<std::size_t>(q);
  if (p == 2) {
    out.a = Permutation::from_cycles(n, {{0, 1}, {2, 3}});
  } else {
    std::vector<Point> cyc(p);
    for (int i = 0; i < p; ++i) cyc[i] = static_cast<Point>(i);
    out.a = Permutation::from_cycles(n, {cyc});
  }
  std::vector<Point> cyc(q);
  for (int i = 0; i < q; ++i) cyc[i] = static_cast<Point>(i);
  out.b = Permutation::from_cycles(n, {cyc});
  out.t = Permutation(n);
  for (int i = 0; i < p; ++i) out.t = compose(out.b, out.t);
  out.order = PermGroup(n, {out.a, out.b}).order();
  return out;
}

std::string marked_word_text(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (int tok : w) {
    if (!out.empty()) out += ' ';
    int g = std::abs(tok);
    out += g == 1 ? "a" : g == 2 ? "t" : "g" + std::to_string(g);
    if (tok < 0) out += "^-1";
  }
  return out;
}

}  // namespace bmw
