#include "bmw/cosetenum.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

namespace bmw {

namespace {

int col_of(int tok) { return tok > 0 ? 2 * (tok - 1) : 2 * (-tok - 1) + 1; }

Word free_reduce(const Word& w) {
  Word out;
  for (int t : w) {
    if (!out.empty() && out.back() == -t)
      out.pop_back();
    else
      out.push_back(t);
  }
  return out;
}

Word cyclic_reduce(Word w) {
  w = free_reduce(w);
  std::size_t i = 0, j = w.size();
  while (j - i >= 2 && w[i] == -w[j - 1]) {
    ++i;
    --j;
  }
  return Word(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(j));
}

Word invert(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& t : out) t = -t;
  return out;
}

struct NeedSpace {};

// Coset enumeration state; see todd_coxeter().
class Enumerator {
 public:
  Enumerator(int gens, const std::vector<Word>& relators, const std::vector<Word>& subgroup, std::size_t cap)
      : ncols_(2 * gens), cap_(std::max<std::size_t>(cap, 1)) {
    for (const Word& r : relators) {
      Word c = cyclic_reduce(r);
      if (c.empty()) continue;
      std::vector<int> cols;
      for (int t : c) cols.push_back(col_of(t));
      rels_.push_back(cols);
    }
    for (const Word& h : subgroup) {
      std::vector<int> cols;
      for (int t : free_reduce(h)) cols.push_back(col_of(t));
      if (!cols.empty()) subgroup_.push_back(cols);
    }
    // relator cycles by first column, for deduction processing
    cycles_.resize(ncols_);
    std::set<std::vector<int>> seen;
    for (const auto& r : rels_) {
      std::vector<int> inv(r.rbegin(), r.rend());
      for (int& c : inv) c ^= 1;
      for (const std::vector<int>* w : {&r, static_cast<const std::vector<int>*>(&inv)})
        for (std::size_t k = 0; k < w->size(); ++k) {
          std::vector<int> rot(w->begin() + static_cast<long>(k), w->end());
          rot.insert(rot.end(), w->begin(), w->begin() + static_cast<long>(k));
          if (seen.insert(rot).second) cycles_[rot[0]].push_back(rot);
        }
    }
    new_coset();
  }

  bool run() {
    bool subgroup_done = false;
    std::size_t alpha = 0;
    for (;;) {
      try {
        if (!subgroup_done) {
          for (const auto& h : subgroup_) scan_and_fill(0, h);
          subgroup_done = true;
        }
        if (!felsch_) {
          for (;;) {
            while (alpha < n_ && !alive(static_cast<int>(alpha))) ++alpha;
            if (alpha >= n_) break;
            if (live_ > cap_ / 2) {
              felsch_ = true;
              break;
            }
            int a = static_cast<int>(alpha);
            for (const auto& r : rels_) {
              scan_and_fill(a, r);
              if (!alive(a)) break;
            }
            if (alive(a))
              for (int x = 0; x < ncols_; ++x)
                if (T(a, x) < 0) define(a, x);
            ++alpha;
          }
        }
        if (felsch_) {
          full_scan();
          felsch_fill();
        }
        if (verify_closed()) break;
        // a verification pass changed the table; resume filling
        felsch_ = true;
      } catch (const NeedSpace&) {
        full_scan();
        alpha = compact(alpha);
        // too little reclaimed to make progress
        if (cap_ - n_ < std::max<std::size_t>(1, cap_ / 256)) return false;
      }
    }
    compact(0);
    return true;
  }

  CosetTable table(int gens) const {
    CosetTable t;
    t.gen_count = gens;
    t.complete = true;
    for (std::size_t c = 0; c < n_; ++c)
      t.rows.emplace_back(tab_.begin() + static_cast<long>(c * ncols_),
                          tab_.begin() + static_cast<long>((c + 1) * ncols_));
    return t;
  }

 private:
  int& T(int c, int x) { return tab_[static_cast<std::size_t>(c) * ncols_ + x]; }
  bool alive(int c) const { return p_[c] == c; }

  int new_coset() {
    if (n_ >= cap_) throw NeedSpace{};
    int d = static_cast<int>(n_++);
    tab_.resize(n_ * ncols_, -1);
    p_.push_back(d);
    ++live_;
    return d;
  }

  void define(int c, int x) {
    int d = new_coset();
    T(c, x) = d;
    T(d, x ^ 1) = c;
    push_deduction(c, x);
  }

  void push_deduction(int c, int x) {
    if (!felsch_) return;
    if (deductions_.size() >= kMaxDeductions) {
      deductions_overflow_ = true;
      deductions_.clear();
      return;
    }
    deductions_.push_back({c, x});
  }

  int rep(int k) {
    int r = k;
    while (p_[r] != r) r = p_[r];
    while (p_[k] != r) {
      int next = p_[k];
      p_[k] = r;
      k = next;
    }
    return r;
  }

  void merge(int k, int l) {
    int a = rep(k), b = rep(l);
    if (a == b) return;
    int mu = std::min(a, b), nu = std::max(a, b);
    p_[nu] = mu;
    --live_;
    queue_.push_back(nu);
  }

  void coincidence(int a, int b) {
    if (a == b) return;
    changed_ = true;
    merge(a, b);
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      int g = queue_[qi];
      for (int x = 0; x < ncols_; ++x) {
        int d = T(g, x);
        if (d < 0) continue;
        T(d, x ^ 1) = -1;
        int mu = rep(g), nu = rep(d);
        if (T(mu, x) >= 0) {
          merge(nu, T(mu, x));
        } else if (T(nu, x ^ 1) >= 0) {
          merge(mu, T(nu, x ^ 1));
        } else {
          T(mu, x) = nu;
          T(nu, x ^ 1) = mu;
          push_deduction(mu, x);
        }
      }
    }
    queue_.clear();
  }

  // Scans w at a; fills gaps when `fill`, otherwise records deductions only.
  void scan(int a, const std::vector<int>& w, bool fill) {
    int f = a, b = a;
    int i = 0, j = static_cast<int>(w.size()) - 1;
    for (;;) {
      while (i <= j && T(f, w[i]) >= 0) f = T(f, w[i++]);
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && T(b, w[j] ^ 1) >= 0) b = T(b, w[j--] ^ 1);
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        T(f, w[i]) = b;
        T(b, w[i] ^ 1) = f;
        changed_ = true;
        push_deduction(f, w[i]);
        return;
      }
      if (!fill) return;
      define(f, w[i]);
    }
  }
  void scan_and_fill(int a, const std::vector<int>& w) { scan(a, w, true); }

  void full_scan() {
    for (std::size_t c = 0; c < n_; ++c) {
      int a = static_cast<int>(c);
      for (const auto& r : rels_) {
        if (!alive(a)) break;
        scan(a, r, false);
      }
    }
    for (const auto& h : subgroup_) scan(0, h, false);
    deductions_overflow_ = false;
  }

  void process_deductions() {
    while (!deductions_.empty()) {
      auto [c, x] = deductions_.back();
      deductions_.pop_back();
      if (!alive(c)) continue;
      for (const auto& w : cycles_[x]) {
        scan(c, w, false);
        if (!alive(c)) break;
      }
      if (!alive(c)) continue;
      int d = T(c, x);
      if (d < 0) continue;
      for (const auto& w : cycles_[x ^ 1]) {
        scan(d, w, false);
        if (!alive(d)) break;
      }
    }
    if (deductions_overflow_) full_scan();
  }

  void felsch_fill() {
    std::size_t pos = 0;
    for (;;) {
      process_deductions();
      while (pos < n_ * ncols_ && (!alive(static_cast<int>(pos / ncols_)) || tab_[pos] >= 0)) ++pos;
      if (pos >= n_ * ncols_) {
        // coincidences may have reopened earlier rows
        pos = 0;
        while (pos < n_ * ncols_ && (!alive(static_cast<int>(pos / ncols_)) || tab_[pos] >= 0)) ++pos;
        if (pos >= n_ * ncols_) return;
      }
      define(static_cast<int>(pos / ncols_), static_cast<int>(pos % ncols_));
    }
  }

  // Complete, and every relator closes at every live coset.
  bool verify_closed() {
    for (std::size_t c = 0; c < n_; ++c) {
      if (!alive(static_cast<int>(c))) continue;
      for (int x = 0; x < ncols_; ++x)
        if (T(static_cast<int>(c), x) < 0) return false;
    }
    changed_ = false;
    full_scan();
    return !changed_;
  }

  // Renumbers live cosets in order; returns the new position of `alpha`.
  std::size_t compact(std::size_t alpha) {
    std::vector<int> to(n_, -1);
    std::size_t k = 0, new_alpha = 0;
    bool alpha_set = false;
    for (std::size_t c = 0; c < n_; ++c) {
      if (!alpha_set && c >= alpha) {
        new_alpha = k;
        alpha_set = true;
      }
      if (alive(static_cast<int>(c))) to[c] = static_cast<int>(k++);
    }
    if (!alpha_set) new_alpha = k;
    std::vector<int> nt(k * ncols_, -1);
    for (std::size_t c = 0; c < n_; ++c) {
      if (to[c] < 0) continue;
      for (int x = 0; x < ncols_; ++x) {
        int d = T(static_cast<int>(c), x);
        nt[static_cast<std::size_t>(to[c]) * ncols_ + x] = d < 0 ? -1 : to[rep(d)];
      }
    }
    std::vector<std::pair<int, int>> ded;
    for (auto [c, x] : deductions_)
      if (to[c] >= 0) ded.push_back({to[c], x});
    deductions_ = std::move(ded);
    tab_ = std::move(nt);
    n_ = k;
    live_ = k;
    p_.resize(k);
    for (std::size_t c = 0; c < k; ++c) p_[c] = static_cast<int>(c);
    return new_alpha;
  }

  static constexpr std::size_t kMaxDeductions = 1'000'000;

  int ncols_;
  std::size_t cap_;
  std::vector<std::vector<int>> rels_, subgroup_;
  std::vector<std::vector<std::vector<int>>> cycles_;
  std::vector<int> tab_, p_, queue_;
  std::size_t n_ = 0, live_ = 0;
  bool felsch_ = false, deductions_overflow_ = false, changed_ = false;
  std::vector<std::pair<int, int>> deductions_;
};

}  // namespace

int CosetTable::act(int coset, int token) const {
  if (coset < 0) return -1;
  return rows[coset][col_of(token)];
}

int CosetTable::act_word(int coset, const Word& w) const {
  for (int t : w) coset = act(coset, t);
  return coset;
}

CosetTable todd_coxeter(const GenericPresentation& p, const std::vector<Word>& subgroup, const CosetOptions& opt) {
  if (opt.max_cosets < 1) throw PreconditionError("max_cosets must be at least 1");
  Enumerator e(p.gen_count(), p.relators, subgroup, opt.max_cosets);
  if (!e.run()) {
    CosetTable t;
    t.gen_count = p.gen_count();
    t.complete = false;
    return t;
  }
  CosetTable t = e.table(p.gen_count());
  // post hoc: relators act trivially, subgroup fixes the base coset
  for (int c = 0; c < t.index(); ++c)
    for (const Word& r : p.relators)
      if (t.act_word(c, r) != c) throw std::logic_error("coset table does not satisfy a relator");
  for (const Word& h : subgroup)
    if (t.act_word(0, h) != 0) throw std::logic_error("coset table does not contain the subgroup");
  return t;
}

std::optional<std::uint64_t> quotient_order(const GenericPresentation& p, const std::vector<Word>& extra,
                                            const CosetOptions& opt) {
  GenericPresentation q = p;
  q.relators.insert(q.relators.end(), extra.begin(), extra.end());
  CosetTable t = todd_coxeter(q, {}, opt);
  if (!t.complete) return std::nullopt;
  return static_cast<std::uint64_t>(t.index());
}

CosetTable parity_table(const BmwPresentation& p) {
  const int na = static_cast<int>(p.gens(Side::A).size());
  const int g = na + static_cast<int>(p.gens(Side::X).size());
  CosetTable t;
  t.gen_count = g;
  t.complete = true;
  for (int c = 0; c < 4; ++c) {
    std::vector<int> row(2 * g);
    for (int j = 0; j < g; ++j) row[2 * j] = row[2 * j + 1] = j < na ? c ^ 2 : c ^ 1;
    t.rows.push_back(row);
  }
  return t;
}

GenericPresentation tietze_reduce(GenericPresentation p) {
  auto normalize = [](std::vector<Word>& rels) {
    std::set<Word> seen;
    std::vector<Word> out;
    for (const Word& r : rels) {
      Word c = cyclic_reduce(r);
      if (c.empty()) continue;
      // least rotation of the word or its inverse as a duplicate key
      Word key;
      for (const Word& w : {c, invert(c)})
        for (std::size_t k = 0; k < w.size(); ++k) {
          Word rot(w.begin() + static_cast<long>(k), w.end());
          rot.insert(rot.end(), w.begin(), w.begin() + static_cast<long>(k));
          if (key.empty() || rot < key) key = rot;
        }
      if (seen.insert(key).second) out.push_back(c);
    }
    rels = out;
  };
  std::vector<bool> removed(p.gens.size(), false);
  normalize(p.relators);
  for (bool progress = true; progress;) {
    progress = false;
    for (const Word& r : p.relators) {
      int g = -1;
      Word replacement;
      if (r.size() == 1) {
        g = std::abs(r[0]) - 1;
      } else if (r.size() == 2 && std::abs(r[0]) != std::abs(r[1])) {
        // r[1] = r[0]^-1, so generator |r[1]| is a power of |r[0]|
        g = std::abs(r[1]) - 1;
        int other = r[0];
        replacement = {r[1] > 0 ? -other : other};
      } else {
        continue;
      }
      for (Word& w : p.relators) {
        Word nw;
        for (int t : w) {
          if (std::abs(t) - 1 != g) {
            nw.push_back(t);
          } else if (t > 0) {
            nw.insert(nw.end(), replacement.begin(), replacement.end());
          } else {
            Word inv = invert(replacement);
            nw.insert(nw.end(), inv.begin(), inv.end());
          }
        }
        w = nw;
      }
      removed[g] = true;
      normalize(p.relators);
      progress = true;
      break;
    }
  }
  std::vector<int> to(p.gens.size(), -1);
  GenericPresentation out;
  for (std::size_t g = 0; g < p.gens.size(); ++g)
    if (!removed[g]) {
      to[g] = static_cast<int>(out.gens.size());
      out.gens.push_back(p.gens[g]);
    }
  for (const Word& r : p.relators) {
    Word w;
    for (int t : r) w.push_back(t > 0 ? to[t - 1] + 1 : -(to[-t - 1] + 1));
    out.relators.push_back(w);
  }
  return out;
}

GenericPresentation reidemeister_schreier(const GenericPresentation& p, const CosetTable& t, SpanningTree tree) {
  if (!t.complete) throw PreconditionError("Reidemeister-Schreier needs a complete coset table");
  if (t.gen_count != p.gen_count()) throw PreconditionError("coset table does not match the presentation");
  const int k = t.index(), g = p.gen_count();
  // tree_edge[c*g + j]: the edge c --g_j--> t(c, g_j) lies in the spanning tree
  std::vector<bool> tree_edge(static_cast<std::size_t>(k) * g, false);
  std::vector<bool> seen(k, false);
  seen[0] = true;
  auto visit_edge = [&](int c, int col) -> int {
    int d = t.rows[c][col];
    if (seen[d]) return -1;
    seen[d] = true;
    if (col % 2 == 0)
      tree_edge[static_cast<std::size_t>(c) * g + col / 2] = true;
    else
      tree_edge[static_cast<std::size_t>(d) * g + col / 2] = true;
    return d;
  };
  if (tree == SpanningTree::Bfs) {
    std::deque<int> q{0};
    while (!q.empty()) {
      int c = q.front();
      q.pop_front();
      for (int col = 0; col < 2 * g; ++col)
        if (int d = visit_edge(c, col); d >= 0) q.push_back(d);
    }
  } else {
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
      auto& [c, col] = stack.back();
      if (col == 2 * g) {
        stack.pop_back();
        continue;
      }
      int d = visit_edge(c, col++);
      if (d >= 0) stack.push_back({d, 0});
    }
  }
  GenericPresentation out;
  std::vector<int> gen_id(static_cast<std::size_t>(k) * g, 0);
  for (int c = 0; c < k; ++c)
    for (int j = 0; j < g; ++j)
      if (!tree_edge[static_cast<std::size_t>(c) * g + j]) {
        out.gens.push_back("s" + std::to_string(c) + "_" + p.gens[j]);
        gen_id[static_cast<std::size_t>(c) * g + j] = static_cast<int>(out.gens.size());
      }
  auto rewrite = [&](const Word& w, int c) {
    Word out_w;
    for (int tok : w) {
      int j = std::abs(tok) - 1;
      if (tok > 0) {
        if (int s = gen_id[static_cast<std::size_t>(c) * g + j]) out_w.push_back(s);
        c = t.rows[c][2 * j];
      } else {
        int d = t.rows[c][2 * j + 1];
        if (int s = gen_id[static_cast<std::size_t>(d) * g + j]) out_w.push_back(-s);
        c = d;
      }
    }
    return out_w;
  };
  for (int c = 0; c < k; ++c)
    for (const Word& r : p.relators) out.relators.push_back(rewrite(r, c));
  return tietze_reduce(out);
}

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t r = m.size(), c = r ? m[0].size() : 0;
  for (const auto& row : m)
    if (row.size() != c) throw PreconditionError("ragged matrix");
  IntMatrix a = m;
  SmithForm out;
  out.u.assign(r, std::vector<BigInt>(r, 0));
  out.v.assign(c, std::vector<BigInt>(c, 0));
  for (std::size_t i = 0; i < r; ++i) out.u[i][i] = 1;
  for (std::size_t j = 0; j < c; ++j) out.v[j][j] = 1;
  auto& u = out.u;
  auto& v = out.v;
  auto row_add = [&](std::size_t dst, std::size_t src, const BigInt& q) {  // row_dst -= q·row_src
    if (q == 0) return;
    for (std::size_t j = 0; j < c; ++j) a[dst][j] -= q * a[src][j];
    for (std::size_t j = 0; j < r; ++j) u[dst][j] -= q * u[src][j];
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const BigInt& q) {  // col_dst -= q·col_src
    if (q == 0) return;
    for (std::size_t i = 0; i < r; ++i) a[i][dst] -= q * a[i][src];
    for (std::size_t i = 0; i < c; ++i) v[i][dst] -= q * v[i][src];
  };
  auto row_swap = [&](std::size_t i, std::size_t k) {
    if (i == k) return;
    std::swap(a[i], a[k]);
    std::swap(u[i], u[k]);
  };
  auto col_swap = [&](std::size_t j, std::size_t k) {
    if (j == k) return;
    for (auto& row : a) std::swap(row[j], row[k]);
    for (auto& row : v) std::swap(row[j], row[k]);
  };
  const std::size_t n = std::min(r, c);
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // pivot: least nonzero absolute value in the lower-right block
      std::size_t pi = r, pj = c;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (a[i][j] != 0 && (pi == r || abs(a[i][j]) < abs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == r) break;
      row_swap(t, pi);
      col_swap(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        row_add(i, t, a[i][t] / a[t][t]);
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        col_add(j, t, a[t][j] / a[t][t]);
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      std::size_t bad = r;
      for (std::size_t i = t + 1; i < r && bad == r; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == r) break;
      row_add(t, bad, -1);
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : u[t]) x = -x;
    }
  }
  for (std::size_t t = 0; t < n; ++t) out.diagonal.push_back(a[t][t]);
  return out;
}

std::string Abelianization::text() const {
  std::vector<std::string> parts;
  if (free_rank == 1) parts.push_back("Z");
  if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
  for (const auto& d : torsion) parts.push_back("Z/" + d.str());
  if (parts.empty()) return "1";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += " + " + parts[i];
  return s;
}

Abelianization abelianization(const GenericPresentation& p) {
  const int g = p.gen_count();
  Abelianization out;
  if (g == 0) return out;
  IntMatrix m;
  for (const Word& r : p.relators) {
    std::vector<BigInt> row(g, 0);
    for (int t : r) row[std::abs(t) - 1] += t > 0 ? 1 : -1;
    m.push_back(row);
  }
  int nonzero = 0;
  if (!m.empty()) {
    for (const auto& d : smith_normal_form(m).diagonal) {
      if (d == 0) continue;
      ++nonzero;
      if (d > 1) out.torsion.push_back(d);
    }
  }
  out.free_rank = g - nonzero;
  return out;
}

Permutation evaluate(const Word& w, const std::vector<Permutation>& images) {
  if (images.empty()) throw PreconditionError("no generator images");
  Permutation out(images[0].degree());
  for (int t : w) {
    int j = std::abs(t) - 1;
    if (j >= static_cast<int>(images.size())) throw PreconditionError("word uses an unassigned generator");
    // words act left to right on the right: out·g means "out, then g"
    out = t > 0 ? compose(images[j], out) : compose(images[j].inverse(), out);
  }
  return out;
}

HomCheck verify_homomorphism(const GenericPresentation& p, const std::vector<Permutation>& images) {
  if (static_cast<int>(images.size()) != p.gen_count())
    throw PreconditionError("assignment must cover every generator");
  for (const auto& g : images)
    if (g.degree() != images[0].degree()) throw PreconditionError("generator images have different degrees");
  HomCheck out;
  out.ok = true;
  for (std::size_t i = 0; i < p.relators.size(); ++i)
    if (!evaluate(p.relators[i], images).is_identity()) {
      out.ok = false;
      out.failing_relator = static_cast<int>(i);
      break;
    }
  out.image_order = images.empty() ? BigInt(1) : PermGroup(images[0].degree(), images).order();
  return out;
}

std::vector<Permutation> escher_assignment(const GenericPresentation& e) {
  const std::vector<std::string> names = {"x", "y", "z", "t", "r"};
  if (e.gens != names) throw PreconditionError("expected generators x, y, z, t, r");
  constexpr Point kH = 343, kD = 73, kN = kH + kD;
  // (a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b') over F7
  auto heis = [&](int a2, int b2, int c2) {
    std::vector<Point> img(kN);
    std::iota(img.begin(), img.end(), 0);
    for (int a = 0; a < 7; ++a)
      for (int b = 0; b < 7; ++b)
        for (int c = 0; c < 7; ++c)
          img[a * 49 + b * 7 + c] = ((a + a2) % 7) * 49 + ((b + b2) % 7) * 7 + (c + c2 + a * b2) % 7;
    return Permutation(img);
  };
  auto dihedral = [&](bool reflect) {
    std::vector<Point> img(kN);
    std::iota(img.begin(), img.end(), 0);
    for (Point i = 0; i < kD; ++i) img[kH + i] = kH + (reflect ? (kD - i) % kD : (i + 1) % kD);
    return Permutation(img);
  };
  Permutation x = heis(1, 0, 0), y = heis(0, 1, 0);
  Permutation z = evaluate(e.parse_word("[x, y]"), {x, y});
  return {x, y, z, dihedral(true), dihedral(false)};
}

namespace {

// Backtracking state for find_homomorphisms.
class HomSearch {
 public:
  HomSearch(const GenericPresentation& p, const PermGroup& target, const HomSearchOptions& opt)
      : p_(p), target_(target), opt_(opt), elements_(target.elements(opt.element_bound)) {
    for (const Word& r : p.relators) {
      Word c = cyclic_reduce(r);
      if (!c.empty()) rels_.push_back(c);
    }
  }

  std::vector<std::vector<Permutation>> run() {
    const int g = p_.gen_count();
    if (g == 0) return {{}};
    std::vector<Permutation> firsts = opt_.up_to_conjugacy ? class_representatives() : elements_;
    std::vector<std::vector<std::vector<Permutation>>> found(firsts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (std::size_t i; (i = next.fetch_add(1)) < firsts.size();) {
        if (stop_) return;
        State s(g);
        s[0] = firsts[i];
        dfs(s, found[i]);
      }
    };
    int jobs = std::max(1, opt_.jobs);
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    std::vector<std::vector<Permutation>> out;
    for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
    std::sort(out.begin(), out.end());
    if (opt_.max_results && out.size() > opt_.max_results) out.resize(opt_.max_results);
    return out;
  }

 private:
  using State = std::vector<std::optional<Permutation>>;

  std::vector<Permutation> class_representatives() const {
    std::set<Permutation> seen;
    std::vector<Permutation> reps;
    for (const auto& e : elements_) {
      if (seen.count(e)) continue;
      reps.push_back(e);
      std::vector<Permutation> stack{e};
      seen.insert(e);
      while (!stack.empty()) {
        Permutation x = stack.back();
        stack.pop_back();
        for (const auto& h : target_.generators()) {
          Permutation y = compose(compose(h, x), h.inverse());
          if (seen.insert(y).second) stack.push_back(y);
        }
      }
    }
    return reps;
  }

  Permutation eval(const Word& w, const State& s, std::size_t from, std::size_t to) const {
    Permutation out(target_.degree());
    for (std::size_t k = from; k < to; ++k) {
      int j = std::abs(w[k]) - 1;
      out = w[k] > 0 ? compose(*s[j], out) : compose(s[j]->inverse(), out);
    }
    return out;
  }

  // Checks complete relators and forces generators occurring once in a
  // relator whose other generators are known. False on contradiction.
  bool propagate(State& s) const {
    for (bool progress = true; progress;) {
      progress = false;
      for (const Word& r : rels_) {
        int missing = -1, missing_count = 0;
        std::size_t pos = 0;
        for (std::size_t k = 0; k < r.size(); ++k) {
          int j = std::abs(r[k]) - 1;
          if (s[j]) continue;
          if (missing == -1 || missing == j) {
            missing = j;
            ++missing_count;
            pos = k;
          } else {
            missing = -2;
          }
        }
        if (missing == -1) {
          if (!eval(r, s, 0, r.size()).is_identity()) return false;
        } else if (missing >= 0 && missing_count == 1) {
          // u g^e v = 1  =>  g^e = u^-1 v^-1
          Permutation u = eval(r, s, 0, pos), v = eval(r, s, pos + 1, r.size());
          Permutation ge = compose(v.inverse(), u.inverse());
          Permutation gimg = r[pos] > 0 ? ge : ge.inverse();
          if (!target_.contains(gimg)) return false;
          s[missing] = gimg;
          progress = true;
        }
      }
    }
    return true;
  }

  void dfs(State s, std::vector<std::vector<Permutation>>& out) {
    if (stop_) return;
    if (!propagate(s)) return;
    auto it = std::find_if(s.begin(), s.end(), [](const auto& x) { return !x.has_value(); });
    if (it == s.end()) {
      std::vector<Permutation> images;
      for (auto& x : s) images.push_back(*x);
      if (opt_.surjective_only && PermGroup(target_.degree(), images).order() != target_.order()) return;
      out.push_back(images);
      if (opt_.max_results && ++count_ >= opt_.max_results) stop_ = true;
      return;
    }
    for (const auto& e : elements_) {
      State t = s;
      t[it - s.begin()] = e;
      dfs(std::move(t), out);
    }
  }

  const GenericPresentation& p_;
  const PermGroup& target_;
  HomSearchOptions opt_;
  std::vector<Permutation> elements_;
  std::vector<Word> rels_;
  std::atomic<std::size_t> count_{0};
  std::atomic<bool> stop_{false};
};

}  // namespace

std::vector<std::vector<Permutation>> find_homomorphisms(const GenericPresentation& p, const PermGroup& target,
                                                         const HomSearchOptions& opt) {
  target.bsgs();
  HomSearch s(p, target, opt);
  return s.run();
}

std::vector<std::uint64_t> higman_scan(std::uint64_t limit) {
  if (limit < 1) throw PreconditionError("limit must be at least 1");
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    unsigned __int128 result = 1 % n, base = 2 % n;
    for (std::uint64_t e = n; e; e >>= 1) {
      if (e & 1) result = result * base % n;
      base = base * base % n;
    }
    if (result == 1 % n) out.push_back(n);
  }
  return out;
}

}  // namespace bmw
