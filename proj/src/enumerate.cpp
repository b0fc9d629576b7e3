#include "bmw/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "json.hpp"

namespace bmw {

Profile Profile::of(const BmwPresentation& p) {
  Degree d = p.degree();
  return {d.m, d.m_inv, d.n, d.n_inv};
}

namespace {

using Code = std::uint8_t;

std::uint32_t pack(Code a1, Code x1, Code a2, Code x2) {
  return (std::uint32_t{a1} << 24) | (std::uint32_t{x1} << 16) | (std::uint32_t{a2} << 8) | x2;
}

// Letter codes 2·id + inverse on one side of the standard layout.
struct SideLayout {
  int m = 0, m_inv = 0;
  int code_space() const { return 2 * (m + m_inv); }
  bool involutive(Code c) const { return (c >> 1) >= m; }
  Code inv(Code c) const { return involutive(c) ? c : static_cast<Code>(c ^ 1); }
  std::vector<Code> codes() const {
    std::vector<Code> out;
    for (int i = 0; i < m; ++i) {
      out.push_back(static_cast<Code>(2 * i));
      out.push_back(static_cast<Code>(2 * i + 1));
    }
    for (int i = m; i < m + m_inv; ++i) out.push_back(static_cast<Code>(2 * i));
    return out;
  }
};

std::uint32_t canonical_square(const SideLayout& A, const SideLayout& X, Code a1, Code x1, Code a2, Code x2) {
  return std::min({pack(a1, x1, a2, x2), pack(a2, x2, a1, x1), pack(A.inv(a2), X.inv(x1), A.inv(a1), X.inv(x2)),
                   pack(A.inv(a1), X.inv(x2), A.inv(a2), X.inv(x1))});
}

// All relabelings of one side as maps from source letter key to standard code.
std::vector<std::vector<Code>> side_maps(const std::vector<Generator>& gens) {
  std::vector<int> non_inv, inv;
  for (int i = 0; i < static_cast<int>(gens.size()); ++i) (gens[i].involutive ? inv : non_inv).push_back(i);
  const int m = static_cast<int>(non_inv.size());
  std::vector<std::vector<Code>> out;
  std::vector<int> pn(non_inv.size()), pi(inv.size());
  std::iota(pn.begin(), pn.end(), 0);
  do {
    std::iota(pi.begin(), pi.end(), 0);
    do {
      for (std::uint32_t flips = 0; flips < (1u << m); ++flips) {
        std::vector<Code> map(2 * gens.size(), 0);
        for (int k = 0; k < m; ++k) {
          int id = non_inv[k];
          bool f = (flips >> k) & 1;
          map[2 * id] = static_cast<Code>(2 * pn[k] + (f ? 1 : 0));
          map[2 * id + 1] = static_cast<Code>(2 * pn[k] + (f ? 0 : 1));
        }
        for (std::size_t k = 0; k < inv.size(); ++k) {
          map[2 * inv[k]] = static_cast<Code>(2 * (m + pi[k]));
          map[2 * inv[k] + 1] = map[2 * inv[k]];
        }
        out.push_back(std::move(map));
      }
    } while (std::next_permutation(pi.begin(), pi.end()));
  } while (std::next_permutation(pn.begin(), pn.end()));
  return out;
}

// Canonicalizer for square sets given in source letter keys.
class Canonicalizer {
 public:
  Canonicalizer(const std::vector<Generator>& a, const std::vector<Generator>& x, bool with_swap)
      : amaps_(side_maps(a)), xmaps_(side_maps(x)) {
    for (const auto& g : a) (g.involutive ? A_.m_inv : A_.m)++;
    for (const auto& g : x) (g.involutive ? X_.m_inv : X_.m)++;
    swap_ = with_swap && A_.m == X_.m && A_.m_inv == X_.m_inv;
  }

  std::vector<std::uint32_t> operator()(const std::vector<std::array<Code, 4>>& sqs) const {
    std::vector<std::uint32_t> best, cur(sqs.size());
    bool have = false;
    for (const auto& am : amaps_)
      for (const auto& xm : xmaps_)
        for (int s = 0; s < (swap_ ? 2 : 1); ++s) {
          for (std::size_t i = 0; i < sqs.size(); ++i) {
            const auto& q = sqs[i];
            Code a1 = am[q[0]], x1 = xm[q[1]], a2 = am[q[2]], x2 = xm[q[3]];
            // swap reads the cyclic word from x1 with the sides exchanged
            cur[i] = s == 0 ? canonical_square(A_, X_, a1, x1, a2, x2) : canonical_square(X_, A_, x1, a2, x2, a1);
          }
          std::sort(cur.begin(), cur.end());
          if (!have || cur < best) {
            best = cur;
            have = true;
          }
        }
    return best;
  }

 private:
  std::vector<std::vector<Code>> amaps_, xmaps_;
  SideLayout A_, X_;
  bool swap_ = false;
};

std::vector<Generator> standard_gens(Side side, int m, int m_inv) {
  static const std::vector<std::string> an = {"a", "b", "c", "d", "e", "f", "g", "h"};
  static const std::vector<std::string> xn = {"x", "y", "z", "t", "u", "v", "w", "s"};
  const auto& names = side == Side::A ? an : xn;
  std::vector<Generator> out;
  for (int i = 0; i < m + m_inv; ++i) {
    std::string name = i < static_cast<int>(names.size()) ? names[i] : names[0] + std::to_string(i + 1);
    out.push_back({name, i >= m});
  }
  return out;
}

// Corner-by-corner exact-cover search over the standard layout.
class Search {
 public:
  Search(const Profile& pr, bool torsion_free)
      : A_{pr.m, pr.m_inv},
        X_{pr.n, pr.n_inv},
        acodes_(A_.codes()),
        xcodes_(X_.codes()),
        torsion_free_(torsion_free),
        table_(static_cast<std::size_t>(A_.code_space()) * X_.code_space(), kFree) {}

  using Sq = std::array<Code, 4>;

  // Candidate squares covering the first free corner; empty optional-like
  // flag `done` when every corner is covered.
  bool first_free(Code& a, Code& x) const {
    for (Code ca : acodes_)
      for (Code cx : xcodes_)
        if (table_[idx(ca, cx)] == kFree) {
          a = ca;
          x = cx;
          return true;
        }
    return false;
  }

  std::vector<Sq> candidates(Code a, Code x) const {
    std::vector<Sq> out;
    for (Code a2 : acodes_)
      for (Code x2 : xcodes_) {
        Sq s{a, x, a2, x2};
        if (fits(s)) out.push_back(s);
      }
    return out;
  }

  void place(const Sq& s) {
    for (const auto& r : readings(s)) table_[idx(r[0], r[1])] = pack(r[0], r[1], r[2], r[3]);
    squares_.push_back(s);
  }
  void remove() {
    for (const auto& r : readings(squares_.back())) table_[idx(r[0], r[1])] = kFree;
    squares_.pop_back();
  }
  const std::vector<Sq>& squares() const { return squares_; }

 private:
  static constexpr std::uint32_t kFree = 0xffffffffu;

  std::size_t idx(Code a, Code x) const { return static_cast<std::size_t>(a) * X_.code_space() + x; }

  std::array<Sq, 4> readings(const Sq& s) const {
    return {Sq{s[0], s[1], s[2], s[3]}, Sq{s[2], s[3], s[0], s[1]},
            Sq{A_.inv(s[2]), X_.inv(s[1]), A_.inv(s[0]), X_.inv(s[3])},
            Sq{A_.inv(s[0]), X_.inv(s[3]), A_.inv(s[2]), X_.inv(s[1])}};
  }

  bool fits(const Sq& s) const {
    auto rs = readings(s);
    int distinct = 0;
    for (int i = 0; i < 4; ++i) {
      bool repeat = false;
      for (int j = 0; j < i; ++j)
        if (rs[j][0] == rs[i][0] && rs[j][1] == rs[i][1]) {
          if (rs[j] != rs[i]) return false;
          repeat = true;
        }
      if (repeat) continue;
      if (table_[idx(rs[i][0], rs[i][1])] != kFree) return false;
      ++distinct;
    }
    return !torsion_free_ || distinct == 4;
  }

  SideLayout A_, X_;
  std::vector<Code> acodes_, xcodes_;
  bool torsion_free_;
  std::vector<std::uint32_t> table_;
  std::vector<Sq> squares_;
};

struct Task {
  std::vector<std::array<Code, 4>> prefix;
};

struct TaskResult {
  bool done = false;
  std::uint64_t labelled = 0;
  std::vector<CanonicalForm> forms;
};

std::vector<Task> make_tasks(const Profile& pr, bool tf) {
  std::vector<Task> tasks;
  Search s(pr, tf);
  std::function<void(int)> rec = [&](int depth) {
    Code a, x;
    if (depth == 2 || !s.first_free(a, x)) {
      tasks.push_back({s.squares()});
      return;
    }
    for (const auto& c : s.candidates(a, x)) {
      s.place(c);
      rec(depth + 1);
      s.remove();
    }
  };
  rec(0);
  return tasks;
}

std::string mode_name(CountMode m) { return m == CountMode::Complexes ? "complexes" : "presentations"; }

nlohmann::json checkpoint_header(const Profile& pr, const EnumerateOptions& opt, std::size_t tasks) {
  return {{"profile", {pr.m, pr.m_inv, pr.n, pr.n_inv}},
          {"count_mode", mode_name(opt.mode)},
          {"torsion_free", opt.torsion_free},
          {"tasks", tasks}};
}

void save_checkpoint(const std::string& path, const nlohmann::json& header, const std::vector<TaskResult>& results) {
  nlohmann::json j = header;
  j["completed"] = nlohmann::json::array();
  for (std::size_t t = 0; t < results.size(); ++t) {
    if (!results[t].done) continue;
    nlohmann::json forms = nlohmann::json::array();
    for (const auto& f : results[t].forms) forms.push_back(f.squares);
    j["completed"].push_back({{"task", t}, {"labelled", results[t].labelled}, {"forms", forms}});
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw PreconditionError("cannot write checkpoint " + path);
    out << j.dump() << "\n";
  }
  std::filesystem::rename(tmp, path);
}

void load_checkpoint(const std::string& path, const nlohmann::json& header, const Profile& pr,
                     std::vector<TaskResult>& results) {
  if (!std::filesystem::exists(path)) return;
  std::ifstream in(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed checkpoint " + path + ": " + e.what());
  }
  for (const char* key : {"profile", "count_mode", "torsion_free", "tasks"})
    if (!j.contains(key) || j[key] != header[key])
      throw PreconditionError("checkpoint " + path + " was written for a different enumeration");
  for (const auto& c : j.at("completed")) {
    auto t = c.at("task").get<std::size_t>();
    if (t >= results.size()) throw ParseError("checkpoint task index out of range");
    auto& r = results[t];
    r.done = true;
    r.labelled = c.at("labelled").get<std::uint64_t>();
    for (const auto& f : c.at("forms")) r.forms.push_back({pr, f.get<std::vector<std::uint32_t>>()});
  }
}

}  // namespace

CanonicalForm canonical_form(const BmwPresentation& p, bool with_swap) {
  corner_map(p);
  Canonicalizer canon(p.gens(Side::A), p.gens(Side::X), with_swap);
  std::vector<std::array<Code, 4>> sqs;
  for (const Square& s : p.squares())
    sqs.push_back({static_cast<Code>(s.a1.key()), static_cast<Code>(s.x1.key()), static_cast<Code>(s.a2.key()),
                   static_cast<Code>(s.x2.key())});
  return {Profile::of(p), canon(sqs)};
}

BmwPresentation to_presentation(const CanonicalForm& f) {
  const Profile& pr = f.profile;
  BmwPresentation base(standard_gens(Side::A, pr.m, pr.m_inv), standard_gens(Side::X, pr.n, pr.n_inv), {});
  auto letter = [&](Side side, std::uint32_t code) { return base.letter(side, code >> 1, code & 1); };
  std::vector<Square> sqs;
  for (std::uint32_t c : f.squares)
    sqs.push_back({letter(Side::A, c >> 24), letter(Side::X, (c >> 16) & 0xff), letter(Side::A, (c >> 8) & 0xff),
                   letter(Side::X, c & 0xff)});
  return BmwPresentation(base.gens(Side::A), base.gens(Side::X), sqs);
}

EnumerationResult enumerate(const Profile& pr, const EnumerateOptions& opt) {
  if (pr.m < 0 || pr.m_inv < 0 || pr.n < 0 || pr.n_inv < 0 || pr.M() == 0 || pr.N() == 0)
    throw PreconditionError("degree profile must have at least one generator on each side");
  if (pr.m + pr.m_inv > 127 || pr.n + pr.n_inv > 127) throw PreconditionError("too many generators");
  if (opt.torsion_free && (pr.m_inv != 0 || pr.n_inv != 0))
    throw PreconditionError("torsion-free enumeration requires m' = n' = 0");
  if (opt.jobs < 1) throw PreconditionError("jobs must be positive");

  const bool with_swap = opt.mode == CountMode::Complexes;
  const auto a_gens = standard_gens(Side::A, pr.m, pr.m_inv);
  const auto x_gens = standard_gens(Side::X, pr.n, pr.n_inv);
  const Canonicalizer canon(a_gens, x_gens, with_swap);

  const auto tasks = make_tasks(pr, opt.torsion_free);
  std::vector<TaskResult> results(tasks.size());
  const auto header = checkpoint_header(pr, opt, tasks.size());
  if (!opt.checkpoint.empty()) load_checkpoint(opt.checkpoint, header, pr, results);

  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> abort{false};

  auto run_task = [&](std::size_t t) {
    Search s(pr, opt.torsion_free);
    for (const auto& sq : tasks[t].prefix) s.place(sq);
    std::set<std::vector<std::uint32_t>> found;
    std::uint64_t labelled = 0;
    std::function<bool()> rec = [&]() -> bool {
      if (abort) return false;
      Code a, x;
      if (!s.first_free(a, x)) {
        ++labelled;
        found.insert(canon(s.squares()));
        return true;
      }
      for (const auto& c : s.candidates(a, x)) {
        if (opt.max_nodes && nodes.fetch_add(1) >= opt.max_nodes) {
          abort = true;
          return false;
        }
        s.place(c);
        bool ok = rec();
        s.remove();
        if (!ok) return false;
      }
      return true;
    };
    if (!rec()) return;
    auto& r = results[t];
    r.labelled = labelled;
    for (const auto& f : found) r.forms.push_back({pr, f});
    r.done = true;
  };

  auto worker = [&]() {
    for (;;) {
      std::size_t t = next.fetch_add(1);
      if (t >= tasks.size() || abort) return;
      if (!results[t].done) run_task(t);
    }
  };
  const int jobs = std::min<int>(opt.jobs, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (!opt.checkpoint.empty()) save_checkpoint(opt.checkpoint, header, results);
  if (abort) {
    std::size_t done = std::count_if(results.begin(), results.end(), [](const TaskResult& r) { return r.done; });
    throw ResourceLimit("enumeration node budget exhausted after " + std::to_string(done) + " of " +
                        std::to_string(tasks.size()) + " tasks" +
                        (opt.checkpoint.empty() ? std::string() : "; resume from " + opt.checkpoint));
  }

  EnumerationResult out;
  out.profile = pr;
  std::set<CanonicalForm> all;
  for (const auto& r : results) {
    out.labelled += r.labelled;
    all.insert(r.forms.begin(), r.forms.end());
  }
  out.classes.assign(all.begin(), all.end());
  return out;
}

std::size_t filter_enumeration(const EnumerationResult& r,
                               const std::function<bool(const BmwPresentation&)>& pred) {
  if (!pred) return r.count();
  std::size_t n = 0;
  for (const auto& f : r.classes)
    if (pred(to_presentation(f))) ++n;
  return n;
}

}  // namespace bmw
