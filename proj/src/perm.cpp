#include "bmw/perm.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "bmw/catalog.hpp"
#include "json.hpp"

namespace bmw {

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::size_t degree) : images_(degree) {
  std::iota(images_.begin(), images_.end(), Point{0});
}

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images)) {
  std::vector<char> seen(images_.size(), 0);
  for (Point p : images_) {
    if (p >= images_.size() || seen[p]) throw PreconditionError("image array is not a bijection");
    seen[p] = 1;
  }
}

Permutation Permutation::from_cycles(std::size_t degree, const std::vector<std::vector<Point>>& cycles) {
  std::vector<Point> img(degree);
  std::iota(img.begin(), img.end(), Point{0});
  std::vector<char> used(degree, 0);
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= degree) throw PreconditionError("cycle point out of range");
      if (used[c[i]]) throw PreconditionError("cycles are not disjoint");
      used[c[i]] = 1;
      img[c[i]] = c[(i + 1) % c.size()];
    }
  return Permutation(std::move(img));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  Permutation r;
  r.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) r.images_[images_[i]] = static_cast<Point>(i);
  return r;
}

std::vector<std::vector<Point>> Permutation::cycles() const {
  std::vector<std::vector<Point>> out;
  std::vector<char> seen(images_.size(), 0);
  for (Point i = 0; i < images_.size(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    std::vector<Point> c;
    for (Point j = i; !seen[j]; j = images_[j]) {
      seen[j] = 1;
      c.push_back(j);
    }
    out.push_back(std::move(c));
  }
  return out;
}

int Permutation::sign() const {
  int s = 1;
  for (const auto& c : cycles())
    if (c.size() % 2 == 0) s = -s;
  return s;
}

BigInt Permutation::order() const {
  BigInt o = 1;
  for (const auto& c : cycles()) {
    BigInt len = c.size();
    o = o / boost::multiprecision::gcd(o, len) * len;
  }
  return o;
}

std::string Permutation::cycle_string() const {
  auto cs = cycles();
  if (cs.empty()) return "()";
  std::ostringstream os;
  for (const auto& c : cs) {
    os << '(';
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i] + 1;
    os << ')';
  }
  return os.str();
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) throw PreconditionError("permutation degree mismatch");
  std::vector<Point> img(q.degree());
  const auto& pi = p.images();
  const auto& qi = q.images();
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = pi[qi[i]];
  return Permutation::unchecked(std::move(img));
}

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (Point x : p.images()) h = (h ^ x) * 1099511628211ull;
  return h;
}

// ---------------------------------------------------------------------------
// Schreier–Sims

BigInt Bsgs::order() const {
  BigInt o = 1;
  for (const auto& l : levels) o *= l.orbit.size();
  return o;
}

std::pair<Permutation, std::size_t> Bsgs::strip(Permutation g, std::size_t from) const {
  std::vector<Point> cur = g.images(), tmp(g.degree());
  for (std::size_t i = from; i < levels.size(); ++i) {
    const Level& l = levels[i];
    Point y = cur[l.base];
    if (y == l.base) continue;
    int s = l.slot[y];
    if (s < 0) return {Permutation::unchecked(std::move(cur)), i};
    const Point* ui = l.rep_inv[s].images().data();
    for (std::size_t k = 0; k < tmp.size(); ++k) tmp[k] = ui[cur[k]];
    cur.swap(tmp);
  }
  return {Permutation::unchecked(std::move(cur)), levels.size()};
}

namespace {

class SchreierSims {
 public:
  SchreierSims(std::size_t n, const std::vector<Permutation>& gens, const BsgsOptions& opt)
      : n_(n), opt_(opt) {
    for (const auto& g : gens)
      if (g.degree() != n) throw PreconditionError("generator degree mismatch");
    if (opt_.base_preference.empty()) {
      // orbit sizes under the input generators
      std::vector<int> comp(n, -1);
      std::vector<std::size_t> size;
      for (Point s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        int c = static_cast<int>(size.size());
        std::vector<Point> stack{s};
        comp[s] = c;
        std::size_t cnt = 0;
        while (!stack.empty()) {
          Point p = stack.back();
          stack.pop_back();
          ++cnt;
          for (const auto& g : gens)
            if (comp[g(p)] < 0) {
              comp[g(p)] = c;
              stack.push_back(g(p));
            }
        }
        size.push_back(cnt);
      }
      orbit_size_.resize(n);
      for (Point p = 0; p < n; ++p) orbit_size_[p] = size[comp[p]];
    }
    for (Point b : opt_.base_prefix) {
      if (b >= n) throw PreconditionError("base point out of range");
      if (std::find(bsgs_.base.begin(), bsgs_.base.end(), b) == bsgs_.base.end()) add_level(b);
    }
    std::set<Permutation> seen;
    for (const auto& g : gens)
      if (!g.is_identity() && seen.insert(g).second) {
        if (!moves_base(g)) add_level(choose_point(g));
        add_strong(g, 0);
      }
  }

  Bsgs run() {
    int i = static_cast<int>(bsgs_.levels.size()) - 1;
    while (i >= 0) {
      int next = i - 1;
      auto& lv = bsgs_.levels[i];
      auto& chk = checked_[i];
      bool restart = false;
      for (std::size_t pi = 0; pi < lv.orbit.size() && !restart; ++pi) {
        if (chk.size() <= pi) chk.resize(pi + 1);
        for (std::size_t gi = 0; gi < lv.gens.size(); ++gi) {
          if (chk[pi].size() <= gi) chk[pi].resize(gi + 1, 0);
          if (chk[pi][gi]) continue;
          chk[pi][gi] = 1;
          const Permutation& s = bsgs_.strong_gens[lv.gens[gi]];
          Point beta = lv.orbit[pi];
          Point gamma = s(beta);
          // h = u_gamma^{-1} s u_beta
          const auto& ub = lv.rep[pi].images();
          const auto& ugi = lv.rep_inv[lv.slot[gamma]].images();
          std::vector<Point> h(n_);
          bool trivial = true;
          for (std::size_t k = 0; k < n_; ++k) {
            h[k] = ugi[s(ub[k])];
            if (h[k] != k) trivial = false;
          }
          if (trivial) continue;
          auto [r, j] = bsgs_.strip(Permutation::unchecked(std::move(h)), i + 1);
          if (r.is_identity()) continue;
          if (j == bsgs_.levels.size()) add_level(choose_point(r));
          bsgs_.strong_gens.push_back(r);
          int idx = static_cast<int>(bsgs_.strong_gens.size()) - 1;
          for (std::size_t l = i + 1; l <= j; ++l) add_gen_to_level(l, idx);
          next = static_cast<int>(j);
          restart = true;
          break;
        }
      }
      i = next;
    }
    return std::move(bsgs_);
  }

 private:
  bool moves_base(const Permutation& g) const {
    for (Point b : bsgs_.base)
      if (g(b) != b) return true;
    return false;
  }

  Point choose_point(const Permutation& g) const {
    if (!opt_.base_preference.empty()) {
      for (Point p : opt_.base_preference)
        if (p < n_ && g(p) != p) return p;
    } else {
      Point best = 0;
      std::size_t best_size = 0;
      for (Point p = 0; p < n_; ++p)
        if (g(p) != p && orbit_size_[p] > best_size) {
          best = p;
          best_size = orbit_size_[p];
        }
      if (best_size > 0) return best;
    }
    for (Point p = 0; p < n_; ++p)
      if (g(p) != p) return p;
    throw PreconditionError("identity has no moved point");
  }

  void add_level(Point b) {
    Bsgs::Level l;
    l.base = b;
    l.orbit = {b};
    l.rep = {Permutation(n_)};
    l.rep_inv = {Permutation(n_)};
    l.slot.assign(n_, -1);
    l.slot[b] = 0;
    bsgs_.base.push_back(b);
    bsgs_.levels.push_back(std::move(l));
    checked_.emplace_back();
  }

  // Adds a new strong generator that fixes base points before `from`.
  void add_strong(const Permutation& g, std::size_t from) {
    bsgs_.strong_gens.push_back(g);
    int idx = static_cast<int>(bsgs_.strong_gens.size()) - 1;
    for (std::size_t l = from; l < bsgs_.levels.size(); ++l) {
      add_gen_to_level(l, idx);
      if (g(bsgs_.levels[l].base) != bsgs_.levels[l].base) break;
    }
  }

  void add_gen_to_level(std::size_t li, int idx) {
    auto& l = bsgs_.levels[li];
    l.gens.push_back(idx);
    const Permutation& s = bsgs_.strong_gens[idx];
    std::size_t old = l.orbit.size();
    for (std::size_t k = 0; k < old; ++k) extend(l, k, s);
    for (std::size_t k = old; k < l.orbit.size(); ++k)
      for (int gi : l.gens) extend(l, k, bsgs_.strong_gens[gi]);
  }

  static void extend(Bsgs::Level& l, std::size_t k, const Permutation& s) {
    Point y = s(l.orbit[k]);
    if (l.slot[y] >= 0) return;
    l.slot[y] = static_cast<int>(l.orbit.size());
    l.orbit.push_back(y);
    Permutation u = compose(s, l.rep[k]);
    l.rep_inv.push_back(u.inverse());
    l.rep.push_back(std::move(u));
  }

  std::size_t n_;
  BsgsOptions opt_;
  std::vector<std::size_t> orbit_size_;
  Bsgs bsgs_;
  std::vector<std::vector<std::vector<char>>> checked_;
};

}  // namespace

Bsgs schreier_sims(std::size_t degree, const std::vector<Permutation>& gens, const BsgsOptions& opt) {
  return SchreierSims(degree, gens, opt).run();
}

// ---------------------------------------------------------------------------
// PermGroup

struct PermGroup::Cache {
  std::once_flag once;
  Bsgs bsgs;
};

PermGroup::PermGroup(std::size_t degree, std::vector<Permutation> gens, BsgsOptions opt)
    : degree_(degree), gens_(std::move(gens)), opt_(std::move(opt)), cache_(std::make_shared<Cache>()) {
  for (const auto& g : gens_)
    if (g.degree() != degree_) throw PreconditionError("generator degree mismatch");
}

const Bsgs& PermGroup::bsgs() const {
  std::call_once(cache_->once, [this] { cache_->bsgs = schreier_sims(degree_, gens_, opt_); });
  return cache_->bsgs;
}

bool PermGroup::contains(const Permutation& g) const {
  if (g.degree() != degree_) return false;
  auto [r, j] = bsgs().strip(g);
  return j == bsgs().levels.size() && r.is_identity();
}

std::vector<std::vector<Point>> PermGroup::orbits() const {
  std::vector<char> seen(degree_, 0);
  std::vector<std::vector<Point>> out;
  for (Point s = 0; s < degree_; ++s) {
    if (seen[s]) continue;
    std::vector<Point> orb{s};
    seen[s] = 1;
    for (std::size_t k = 0; k < orb.size(); ++k)
      for (const auto& g : gens_)
        if (!seen[g(orb[k])]) {
          seen[g(orb[k])] = 1;
          orb.push_back(g(orb[k]));
        }
    std::sort(orb.begin(), orb.end());
    out.push_back(std::move(orb));
  }
  return out;
}

bool PermGroup::is_transitive() const { return degree_ <= 1 || orbits().size() == 1; }

void PermGroup::for_each_element(const std::function<void(const Permutation&)>& f,
                                 std::uint64_t bound) const {
  const Bsgs& b = bsgs();
  if (b.order() > bound) throw ResourceLimit("group order exceeds the enumeration bound");
  std::function<void(std::size_t, const Permutation&)> rec = [&](std::size_t i, const Permutation& acc) {
    if (i == b.levels.size()) {
      f(acc);
      return;
    }
    for (const auto& u : b.levels[i].rep) rec(i + 1, compose(acc, u));
  };
  rec(0, Permutation(degree_));
}

std::vector<Permutation> PermGroup::elements(std::uint64_t bound) const {
  std::vector<Permutation> out;
  for_each_element([&](const Permutation& g) { out.push_back(g); }, bound);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Permutation> closure(std::size_t degree, const std::vector<Permutation>& gens,
                                 std::size_t bound) {
  std::unordered_set<Permutation, PermutationHash> seen;
  std::vector<Permutation> out{Permutation(degree)};
  seen.insert(out[0]);
  for (std::size_t k = 0; k < out.size(); ++k)
    for (const auto& g : gens) {
      Permutation h = compose(g, out[k]);
      if (seen.insert(h).second) {
        if (out.size() >= bound) throw ResourceLimit("closure exceeds bound");
        out.push_back(std::move(h));
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Structure tests

bool is_k_transitive(const PermGroup& g, int k) {
  if (k < 1) throw PreconditionError("k must be at least 1");
  std::size_t n = g.degree();
  if (static_cast<std::size_t>(k) > n) return false;
  BsgsOptions opt;
  for (int i = 0; i < k; ++i) opt.base_prefix.push_back(static_cast<Point>(i));
  Bsgs b = schreier_sims(n, g.generators(), opt);
  for (int i = 0; i < k; ++i) {
    std::size_t orb = i < static_cast<int>(b.levels.size()) ? b.levels[i].orbit.size() : 1;
    if (orb != n - i) return false;
  }
  return true;
}

int transitivity_degree(const PermGroup& g) {
  if (g.degree() == 0 || !g.is_transitive()) return 0;
  int k = 1;
  while (k < static_cast<int>(g.degree()) && is_k_transitive(g, k + 1)) ++k;
  return k;
}

bool is_primitive(const PermGroup& g) {
  std::size_t n = g.degree();
  if (!g.is_transitive()) return false;
  if (n <= 2) return true;
  // minimal block containing {0, b} via union-find closure
  for (Point b = 1; b < n; ++b) {
    std::vector<Point> parent(n);
    std::iota(parent.begin(), parent.end(), Point{0});
    auto find = [&](Point x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<std::pair<Point, Point>> queue{{0, b}};
    parent[b] = 0;
    std::size_t classes = n - 1;
    while (!queue.empty()) {
      auto [x, y] = queue.back();
      queue.pop_back();
      for (const auto& s : g.generators()) {
        Point u = find(s(x)), v = find(s(y));
        if (u == v) continue;
        parent[std::max(u, v)] = std::min(u, v);
        --classes;
        queue.push_back({s(x), s(y)});
      }
    }
    if (classes > 1) return false;
  }
  return true;
}

bool is_abelian(const PermGroup& g) {
  const auto& gs = g.generators();
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j)
      if (compose(gs[i], gs[j]) != compose(gs[j], gs[i])) return false;
  return true;
}

bool is_cyclic(const PermGroup& g, std::uint64_t bound) {
  BigInt order = g.order();
  if (order > bound) throw ResourceLimit("group order exceeds the enumeration bound");
  if (!is_abelian(g)) return false;
  bool found = false;
  g.for_each_element([&](const Permutation& e) { found = found || e.order() == order; }, bound);
  return found;
}

namespace {

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) n /= p, ++e;
      out.push_back({p, e});
    }
  if (n > 1) out.push_back({n, 1});
  return out;
}

}  // namespace

bool is_nilpotent(const PermGroup& g, std::uint64_t bound) {
  BigInt order = g.order();
  if (order > bound) throw ResourceLimit("group order exceeds the enumeration bound");
  auto n = order.convert_to<std::uint64_t>();
  auto primes = factorize(n);
  // p-elements form a subgroup iff there are exactly |G|_p of them
  std::vector<std::uint64_t> count(primes.size(), 0);
  g.for_each_element(
      [&](const Permutation& e) {
        auto o = e.order().convert_to<std::uint64_t>();
        for (std::size_t i = 0; i < primes.size(); ++i) {
          std::uint64_t x = o;
          while (x % primes[i].first == 0) x /= primes[i].first;
          if (x == 1) ++count[i];
        }
      },
      bound);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    std::uint64_t pp = 1;
    for (int k = 0; k < primes[i].second; ++k) pp *= primes[i].first;
    if (count[i] != pp) return false;
  }
  return true;
}

GroupSignature signature(const PermGroup& g) {
  GroupSignature s;
  s.degree = g.degree();
  s.order = g.order();
  for (const auto& o : g.orbits()) s.orbit_sizes.push_back(o.size());
  std::sort(s.orbit_sizes.begin(), s.orbit_sizes.end());
  s.transitivity_degree = transitivity_degree(g);
  s.primitive = is_primitive(g);
  s.abelian = is_abelian(g);
  s.nilpotent = is_nilpotent(g);
  s.cyclic = is_cyclic(g);
  return s;
}

bool NamedGroup::matches(const GroupSignature& s) const {
  if (degree && *degree != s.degree) return false;
  if (order && *order != s.order) return false;
  if (orbit_sizes && *orbit_sizes != s.orbit_sizes) return false;
  if (transitivity_degree && *transitivity_degree != s.transitivity_degree) return false;
  if (primitive && *primitive != s.primitive) return false;
  if (abelian && *abelian != s.abelian) return false;
  if (nilpotent && *nilpotent != s.nilpotent) return false;
  if (cyclic && *cyclic != s.cyclic) return false;
  return true;
}

std::vector<NamedGroup> signature_catalog() {
  auto doc = nlohmann::json::parse(read_file(catalog_dir() / "signatures.json"));
  std::vector<NamedGroup> out;
  for (const auto& e : doc.at("groups")) {
    NamedGroup g;
    g.name = e.at("name");
    if (e.contains("aliases")) g.aliases = e["aliases"].get<std::vector<std::string>>();
    if (e.contains("degree")) g.degree = e["degree"].get<std::size_t>();
    if (e.contains("order")) g.order = BigInt(e["order"].get<std::uint64_t>());
    if (e.contains("orbit_sizes")) g.orbit_sizes = e["orbit_sizes"].get<std::vector<std::size_t>>();
    if (e.contains("transitivity")) g.transitivity_degree = e["transitivity"].get<int>();
    if (e.contains("primitive")) g.primitive = e["primitive"].get<bool>();
    if (e.contains("abelian")) g.abelian = e["abelian"].get<bool>();
    if (e.contains("nilpotent")) g.nilpotent = e["nilpotent"].get<bool>();
    if (e.contains("cyclic")) g.cyclic = e["cyclic"].get<bool>();
    out.push_back(std::move(g));
  }
  return out;
}

std::optional<NamedGroup> identify(const GroupSignature& sig) {
  static const std::vector<NamedGroup> cat = signature_catalog();
  for (const auto& g : cat)
    if (g.matches(sig)) return g;
  return std::nullopt;
}

std::string identify_label(const GroupSignature& sig) {
  auto g = identify(sig);
  return g ? g->name : "unrecognized";
}

// ---------------------------------------------------------------------------
// Projective type

namespace {

struct ProjectiveRow {
  int degree, q, k, e;  // q = p^e
};

// (q^k - 1)/(q - 1) points for q a prime power, k >= 2
constexpr ProjectiveRow kProjective[] = {
    {3, 2, 2, 1},  {4, 3, 2, 1},  {5, 4, 2, 2},  {6, 5, 2, 1}, {7, 2, 3, 1},
    {8, 7, 2, 1},  {9, 8, 2, 3},  {10, 9, 2, 2}, {12, 11, 2, 1}, {13, 3, 3, 1},
};

BigInt pgl_order(int q, int k) {
  BigInt o = 1;
  for (int i = 0; i < k * (k - 1) / 2; ++i) o *= q;
  for (int i = 2; i <= k; ++i) {
    BigInt t = 1;
    for (int j = 0; j < i; ++j) t *= q;
    o *= t - 1;
  }
  return o;
}

}  // namespace

std::optional<ProjectiveMatch> projective_type(const PermGroup& g) {
  int n = static_cast<int>(g.degree());
  if (n > 13) throw PreconditionError("degree outside the projective-type table");
  if (n == 11 || n <= 2) return std::nullopt;
  for (const auto& row : kProjective) {
    if (row.degree != n) continue;
    BigInt pgl = pgl_order(row.q, row.k);
    BigInt psl = pgl / std::gcd(row.k, row.q - 1);
    BigInt pgaml = pgl * row.e;
    BigInt o = g.order();
    if (o % psl == 0 && pgaml % o == 0) return ProjectiveMatch{row.q, row.k};
  }
  return std::nullopt;
}

bool is_projective_type(const PermGroup& g) { return projective_type(g).has_value(); }

// ---------------------------------------------------------------------------
// Named groups

PermGroup named_perm_group(const std::string& name) {
  auto number = [&](std::size_t prefix) -> std::size_t {
    std::string rest = name.substr(prefix);
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), ::isdigit))
      throw PreconditionError("unknown group name '" + name + "'");
    return std::stoul(rest);
  };
  auto cycle = [](std::size_t n, std::size_t from, std::size_t len) {
    std::vector<Point> c;
    for (std::size_t i = 0; i < len; ++i) c.push_back(static_cast<Point>(from + i));
    return Permutation::from_cycles(n, {c});
  };
  if (name.rfind("sym", 0) == 0) {
    std::size_t n = number(3);
    if (n < 1 || n > 64) throw PreconditionError("symmetric group degree out of range");
    if (n == 1) return PermGroup(1, {});
    return PermGroup(n, {cycle(n, 0, 2), cycle(n, 0, n)});
  }
  if (name.rfind("alt", 0) == 0) {
    std::size_t n = number(3);
    if (n < 3 || n > 64) throw PreconditionError("alternating group degree out of range");
    std::vector<Permutation> gens;
    for (std::size_t i = 2; i < n; ++i)
      gens.push_back(Permutation::from_cycles(n, {{0, 1, static_cast<Point>(i)}}));
    return PermGroup(n, gens);
  }
  if (name.rfind("c", 0) == 0) {
    std::size_t n = number(1);
    if (n < 1 || n > 100000) throw PreconditionError("cyclic group order out of range");
    if (n == 1) return PermGroup(1, {});
    return PermGroup(n, {cycle(n, 0, n)});
  }
  if (name.rfind("d", 0) == 0) {
    // dihedral group of order 2k on k points
    std::size_t order = number(1);
    if (order < 4 || order % 2) throw PreconditionError("dihedral group order must be even and >= 4");
    std::size_t k = order / 2;
    std::vector<Point> refl(k);
    for (std::size_t i = 0; i < k; ++i) refl[i] = static_cast<Point>((k - i) % k);
    return PermGroup(k, {cycle(k, 0, k), Permutation(refl)});
  }
  throw PreconditionError("unknown group name '" + name + "'");
}

}  // namespace bmw
