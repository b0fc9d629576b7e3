#include "bmw/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmw/catalog.hpp"
#include "bmw/constructions.hpp"
#include "bmw/core.hpp"
#include "bmw/cosetenum.hpp"
#include "bmw/enumerate.hpp"
#include "bmw/error.hpp"
#include "bmw/local_action.hpp"
#include "bmw/marked.hpp"
#include "bmw/perm.hpp"
#include "bmw/quaternion.hpp"
#include "bmw/tree_ball.hpp"

namespace bmw::cli {
namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string format = "human";
  int jobs = 1;
  std::size_t max_cosets = 1'000'000;
  std::size_t max_ball_points = 200'000;
  std::uint64_t max_nodes = 0;
  std::string catalog;
};

/// Raised by handlers when an --expect check fails; carries the message.
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string big(const BigInt& v) { return v.str(); }

// ---------------------------------------------------------------- rendering

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

bool is_scalar_array(const Json& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return !e.is_structured(); });
}

bool is_row_array(const Json& v) {
  return v.is_array() && !v.empty() &&
         std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_object(); });
}

std::string cell_text(const Json& v) {
  if (is_scalar_array(v)) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ",") + scalar_text(e);
    return s;
  }
  if (v.is_structured()) return v.dump();
  return scalar_text(v);
}

std::vector<std::string> row_columns(const Json& rows) {
  std::vector<std::string> cols;
  for (const auto& r : rows)
    for (const auto& [k, _] : r.items())
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  return cols;
}

void render_table(const Json& rows, std::ostream& out, const std::string& indent) {
  auto cols = row_columns(rows);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) width[c] = cols[c].size();
  for (const auto& r : rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      line.push_back(r.contains(cols[c]) ? cell_text(r[cols[c]]) : "-");
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    out << indent;
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << line[c];
      if (c + 1 < line.size()) out << std::string(width[c] - line[c].size() + 2, ' ');
    }
    out << '\n';
  };
  emit(cols);
  for (const auto& line : cells) emit(line);
}

void render_human(const Json& doc, std::ostream& out, const std::string& indent = "") {
  for (const auto& [k, v] : doc.items()) {
    if (is_row_array(v)) {
      out << indent << k << ":\n";
      render_table(v, out, indent + "  ");
    } else if (v.is_object()) {
      out << indent << k << ":\n";
      render_human(v, out, indent + "  ");
    } else if (v.is_array() && !is_scalar_array(v)) {
      out << indent << k << ": " << v.dump() << '\n';
    } else {
      out << indent << k << ": " << cell_text(v) << '\n';
    }
  }
}

void render_tsv(const Json& doc, std::ostream& out) {
  // The first array of row objects becomes the table; otherwise key/value pairs.
  for (const auto& [k, v] : doc.items()) {
    if (!is_row_array(v)) continue;
    auto cols = row_columns(v);
    for (std::size_t c = 0; c < cols.size(); ++c) out << cols[c] << (c + 1 < cols.size() ? '\t' : '\n');
    for (const auto& r : v)
      for (std::size_t c = 0; c < cols.size(); ++c)
        out << (r.contains(cols[c]) ? cell_text(r[cols[c]]) : "") << (c + 1 < cols.size() ? '\t' : '\n');
    return;
  }
  for (const auto& [k, v] : doc.items()) out << k << '\t' << cell_text(v) << '\n';
}

void emit(const RunConfig& cfg, const Json& doc, std::ostream& out) {
  if (cfg.format == "json")
    out << doc.dump(2) << '\n';
  else if (cfg.format == "tsv")
    render_tsv(doc, out);
  else
    render_human(doc, out);
}

// ---------------------------------------------------------------- inputs

/// A file path, or a catalog name when no such file exists.
CatalogEntry load_input(const std::string& spec) {
  if (!std::filesystem::exists(spec)) return catalog(spec);
  std::string text = read_file(spec);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(spec + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("a_gens")) return parse_bmw(text);
  return parse_generic(text);
}

BmwPresentation load_bmw(const std::string& spec) {
  auto e = load_input(spec);
  if (auto* p = std::get_if<BmwPresentation>(&e)) return *p;
  throw PreconditionError(spec + " is not a square-complex presentation");
}

GenericPresentation load_generic(const std::string& spec) {
  auto e = load_input(spec);
  if (auto* p = std::get_if<BmwPresentation>(&e)) return to_generic(*p);
  return std::get<GenericPresentation>(e);
}

Json degree_json(const BmwPresentation& p) {
  auto d = p.degree();
  return Json::array({d.M(), d.N()});
}

Json presentation_json(const BmwPresentation& p) { return Json::parse(serialize_bmw(p)); }

Json generic_json(const GenericPresentation& p) { return Json::parse(serialize_generic(p)); }

std::vector<int> parse_int_list(const std::string& text, std::size_t count, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParseError(what + ": expected integers, got '" + text + "'");
    }
  }
  if (count && out.size() != count)
    throw ParseError(what + ": expected " + std::to_string(count) + " comma-separated integers");
  return out;
}

/// Cycle notation with 1-based points, e.g. "(1 2 3)(4 5)".
Permutation parse_cycles(std::size_t degree, const std::string& text) {
  std::vector<std::vector<Point>> cycles;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] != '(') throw ParseError("bad cycle notation '" + text + "'");
    auto close = text.find(')', i);
    if (close == std::string::npos) throw ParseError("unclosed cycle in '" + text + "'");
    std::stringstream ss(text.substr(i + 1, close - i - 1));
    std::vector<Point> cyc;
    long v;
    while (ss >> v) {
      if (v < 1 || static_cast<std::size_t>(v) > degree)
        throw ParseError("point " + std::to_string(v) + " outside 1.." + std::to_string(degree));
      cyc.push_back(static_cast<Point>(v - 1));
    }
    if (!ss.eof()) throw ParseError("bad cycle notation '" + text + "'");
    if (!cyc.empty()) cycles.push_back(std::move(cyc));
    i = close + 1;
  }
  return Permutation::from_cycles(degree, cycles);
}

/// "sym7", "alt6", "c5", "d8" or a JSON file {"degree": n, "generators": ["(1 2)", ...]}.
PermGroup load_target(const std::string& spec) {
  if (!std::filesystem::exists(spec)) return named_perm_group(spec);
  Json doc;
  try {
    doc = Json::parse(read_file(spec));
  } catch (const Json::exception& e) {
    throw ParseError(spec + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("degree") || !doc.contains("generators"))
    throw ParseError(spec + ": target needs 'degree' and 'generators'");
  std::size_t degree = doc["degree"].get<std::size_t>();
  std::vector<Permutation> gens;
  for (const auto& g : doc["generators"]) gens.push_back(parse_cycles(degree, g.get<std::string>()));
  return PermGroup(degree, std::move(gens));
}

// ---------------------------------------------------------------- handlers

Json side_json(const BmwPresentation& p, const SideReport& r) {
  Json j;
  j["side"] = side_name(r.side);
  j["degree"] = r.degree;
  j["label"] = r.label;
  j["aliases"] = r.aliases;
  j["order"] = big(r.signature.order);
  j["two_transitive"] = r.two_transitive;
  j["primitive"] = r.primitive;
  j["nilpotent"] = r.nilpotent;
  j["contains_alt"] = r.contains_alt;
  j["projective"] = r.projective ? Json(std::to_string(r.projective->k) + "," + std::to_string(r.projective->q))
                                 : Json(nullptr);
  Json gens = Json::array();
  Side other = opposite(r.side);
  for (std::size_t id = 0; id < p.gens(other).size(); ++id) {
    Letter g = p.letter(other, static_cast<int>(id));
    auto s = sigma(p, r.side, g);
    gens.push_back({{"generator", p.letter_name(g)}, {"sigma", label_cycles(p, r.side, s.perm)}});
  }
  j["sigma"] = gens;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json validate_json(const BmwPresentation& p) {
  Json j;
  auto d = p.degree();
  j["degree"] = degree_json(p);
  j["side_data"] = Json::array({d.m, d.m_inv, d.n, d.n_inv});
  j["squares"] = p.squares().size();
  auto t = torsion_profile(p);
  j["torsion_free"] = t.torsion_free();
  auto [first, second] = amalgam_ranks(d.M(), d.N());
  j["amalgam_a"] = first.text();
  j["amalgam_x"] = second.text();
  return j;
}

Json violations_json(const BmwPresentation& p, const ValidationResult& v) {
  Json arr = Json::array();
  static const char* kinds[] = {"uncovered", "doubly_covered", "inconsistent", "degenerate"};
  for (const auto& e : v.violations) {
    Json sq = Json::array();
    for (const auto& s : e.squares) sq.push_back(p.square_text(s));
    arr.push_back({{"kind", kinds[static_cast<int>(e.kind)]},
                   {"corner", p.letter_name(e.a) + "," + p.letter_name(e.x)},
                   {"squares", sq},
                   {"message", e.message}});
  }
  return arr;
}

std::vector<Profile> profiles_of_degree(int M, int N, bool torsion_free) {
  std::vector<Profile> out;
  for (int m = M / 2; m >= 0; --m)
    for (int n = N / 2; n >= 0; --n) {
      Profile pr{m, M - 2 * m, n, N - 2 * n};
      if (torsion_free && (pr.m_inv || pr.n_inv)) continue;
      out.push_back(pr);
    }
  return out;
}

std::string profile_text(const Profile& p) {
  return std::to_string(p.m) + "," + std::to_string(p.m_inv) + "," + std::to_string(p.n) + "," +
         std::to_string(p.n_inv);
}

Json assignment_json(const GenericPresentation& g, const std::vector<Permutation>& images) {
  Json j;
  for (int i = 0; i < g.gen_count(); ++i) j[g.gens[i]] = images[i].cycle_string();
  return j;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Square complexes, their fundamental groups and local actions", "bmw"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"human", "json", "tsv"}))
      ->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--max-cosets", cfg.max_cosets, "Coset table limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-ball-points", cfg.max_ball_points, "Largest ball permutation degree")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-nodes", cfg.max_nodes, "Enumeration node budget (0: unlimited)")->capture_default_str();
  app.add_option("--catalog", cfg.catalog, "Catalog directory (overrides BMW_CATALOG)");

  // Each subcommand sets `run`, which returns the document to emit.
  std::function<Json()> run;
  std::string input;

  auto* validate_cmd = app.add_subcommand("validate", "Check the link condition");
  validate_cmd->add_option("input", input, "File or catalog name")->required();
  validate_cmd->callback([&] {
    run = [&] {
      auto p = load_bmw(input);
      auto v = validate(p);
      Json j{{"command", "validate"}, {"input", input}, {"valid", v.ok()}};
      if (!v.ok()) {
        for (const auto& e : v.violations) err << "violation: " << e.message << '\n';
        j["violations"] = violations_json(p, v);
        emit(cfg, j, out);
        throw ValidationError(std::to_string(v.violations.size()) + " corner violation(s) in " + input);
      }
      j.update(validate_json(p));
      return j;
    };
  });

  auto* local_cmd = app.add_subcommand("local-action", "Local permutation groups on both stars");
  local_cmd->add_option("input", input, "File or catalog name")->required();
  local_cmd->callback([&] {
    run = [&] {
      auto p = load_bmw(input);
      auto c = classify(p);
      return Json{{"command", "local-action"},
                  {"input", input},
                  {"a", side_json(p, c.a)},
                  {"x", side_json(p, c.x)}};
    };
  });

  std::string side = "both";
  int r_max = 5;
  bool deep = false;
  std::string expect;
  auto* disc_cmd = app.add_subcommand("discreteness", "Ball-order sequence and discreteness verdict");
  disc_cmd->add_option("input", input, "File or catalog name")->required();
  disc_cmd->add_option("--side", side)->check(CLI::IsMember({"a", "x", "both"}))->capture_default_str();
  disc_cmd->add_option("--r-max", r_max)->check(CLI::Range(1, 12))->capture_default_str();
  disc_cmd->add_flag("--deep", deep, "Also examine radius-7 growth");
  disc_cmd->add_option("--expect", expect, "Expected verdict for every requested side");
  disc_cmd->callback([&] {
    run = [&] {
      auto p = load_bmw(input);
      std::vector<Side> sides;
      if (side != "x") sides.push_back(Side::A);
      if (side != "a") sides.push_back(Side::X);
      Json rows = Json::array();
      std::string failed;
      for (Side s : sides) {
        err << "discreteness: side " << side_name(s) << '\n';
        BallOptions bo;
        bo.max_points = cfg.max_ball_points;
        auto r = discreteness_verdict(p, s, r_max, deep, bo);
        Json orders = Json::array();
        for (const auto& o : r.orders) orders.push_back(big(o));
        rows.push_back({{"side", side_name(s)},
                        {"verdict", verdict_name(r.verdict)},
                        {"radius", r.verdict == Verdict::Discrete ? Json(r.radius) : Json(nullptr)},
                        {"rule", r.rule.empty() ? Json(nullptr) : Json(r.rule)},
                        {"two_transitive", r.two_transitive},
                        {"orders", orders},
                        {"note", r.note}});
        if (!expect.empty() && verdict_name(r.verdict) != expect && failed.empty())
          failed = std::string("side ") + side_name(s) + ": expected " + expect + ", got " + verdict_name(r.verdict);
      }
      Json j{{"command", "discreteness"}, {"input", input}, {"r_max", r_max}, {"sides", rows}};
      if (!failed.empty()) {
        emit(cfg, j, out);
        throw CheckFailed(failed);
      }
      return j;
    };
  });

  std::string out_file;
  auto construction_doc = [&](const std::string& cmd, const BmwPresentation& q) {
    auto v = validate(q);
    Json j{{"command", cmd}, {"input", input}, {"degree", degree_json(q)}, {"valid", v.ok()},
           {"generators", Json::array({q.gens(Side::A).size(), q.gens(Side::X).size()})},
           {"squares", q.squares().size()}};
    if (!out_file.empty()) {
      std::ofstream f(out_file);
      if (!f) throw PreconditionError("cannot write " + out_file);
      f << serialize_bmw(q);
    } else if (cfg.format == "json") {
      j["presentation"] = presentation_json(q);
    }
    if (!v.ok()) {
      emit(cfg, j, out);
      throw CheckFailed(cmd + " produced a presentation that fails validation");
    }
    return j;
  };

  auto* double_cmd = app.add_subcommand("double", "Double along the A-side");
  double_cmd->add_option("input", input, "File or catalog name")->required();
  double_cmd->add_option("--out", out_file, "Write the result presentation here");
  double_cmd->callback([&] {
    run = [&] {
      auto p = load_bmw(input);
      corner_map(p);
      auto q = double_presentation(p);
      auto j = construction_doc("double", q);
      j["note"] = double_note(p);
      return j;
    };
  });

  std::string tensor_mode = "full";
  auto* tensor_cmd = app.add_subcommand("tensor", "Tensor square of a presentation");
  tensor_cmd->add_option("input", input, "File or catalog name")->required();
  tensor_cmd->add_option("--mode", tensor_mode)->check(CLI::IsMember({"full", "coherent"}))->capture_default_str();
  tensor_cmd->add_option("--out", out_file, "Write the result presentation here");
  tensor_cmd->callback([&] {
    run = [&] {
      auto p = load_bmw(input);
      auto q = tensor_product(p, tensor_mode == "full" ? TensorMode::Full : TensorMode::Coherent);
      auto j = construction_doc("tensor", q);
      j["mode"] = tensor_mode;
      return j;
    };
  });

  std::string degree_opt, profile_opt, count_mode = "complexes", emit_dir, checkpoint;
  bool torsion_free = false;
  auto* enum_cmd = app.add_subcommand("enumerate", "Count presentations up to relabeling");
  auto* deg_o = enum_cmd->add_option("--degree", degree_opt, "M,N: every side profile of these degrees");
  auto* prof_o = enum_cmd->add_option("--profile", profile_opt, "m,m',n,n'");
  deg_o->excludes(prof_o);
  enum_cmd->add_flag("--torsion-free", torsion_free, "Only torsion-free presentations");
  enum_cmd->add_option("--count-mode", count_mode)
      ->check(CLI::IsMember({"complexes", "presentations"}))
      ->capture_default_str();
  enum_cmd->add_option("--emit", emit_dir, "Directory for one JSON-lines file per profile");
  enum_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file (suffixed per profile)");
  enum_cmd->add_option("--expect", expect, "Expected total count");
  enum_cmd->callback([&] {
    run = [&] {
      std::vector<Profile> profiles;
      if (!profile_opt.empty()) {
        auto v = parse_int_list(profile_opt, 4, "--profile");
        profiles.push_back({v[0], v[1], v[2], v[3]});
      } else if (!degree_opt.empty()) {
        auto v = parse_int_list(degree_opt, 2, "--degree");
        if (v[0] < 1 || v[1] < 1) throw PreconditionError("--degree needs positive M and N");
        profiles = profiles_of_degree(v[0], v[1], torsion_free);
      } else {
        throw PreconditionError("enumerate needs --degree or --profile");
      }
      EnumerateOptions opt;
      opt.mode = count_mode == "complexes" ? CountMode::Complexes : CountMode::Presentations;
      opt.torsion_free = torsion_free;
      opt.jobs = cfg.jobs;
      opt.max_nodes = cfg.max_nodes;
      if (!emit_dir.empty()) std::filesystem::create_directories(emit_dir);
      Json rows = Json::array();
      std::uint64_t total = 0;
      for (const auto& pr : profiles) {
        err << "enumerate: profile " << profile_text(pr) << '\n';
        if (!checkpoint.empty())
          opt.checkpoint = profiles.size() == 1 ? checkpoint : checkpoint + "." + profile_text(pr);
        auto r = enumerate(pr, opt);
        total += r.count();
        rows.push_back({{"profile", profile_text(pr)},
                        {"degree", std::to_string(pr.M()) + "," + std::to_string(pr.N())},
                        {"count", r.count()},
                        {"labelled", r.labelled}});
        if (!emit_dir.empty()) {
          std::ofstream f(std::filesystem::path(emit_dir) / ("profile_" + profile_text(pr) + ".jsonl"));
          for (const auto& c : r.classes) f << presentation_json(to_presentation(c)).dump() << '\n';
        }
      }
      Json j{{"command", "enumerate"},
             {"count_mode", count_mode},
             {"torsion_free", torsion_free},
             {"profiles", rows},
             {"total", total}};
      if (!expect.empty() && std::to_string(total) != expect) {
        emit(cfg, j, out);
        throw CheckFailed("enumerate: expected " + expect + ", got " + std::to_string(total));
      }
      return j;
    };
  });

  std::vector<std::string> extra_relators;
  auto* quot_cmd = app.add_subcommand("quotient", "Order of a finitely presented quotient");
  quot_cmd->add_option("input", input, "File or catalog name")->required();
  quot_cmd->add_option("--add-relator", extra_relators, "Extra relator word (repeatable)")
      ->allow_extra_args(false);  // keep "[u,v]" as one commutator word
  quot_cmd->add_option("--expect", expect, "Expected order");
  quot_cmd->callback([&] {
    run = [&] {
      auto g = load_generic(input);
      std::vector<Word> extra;
      Json rel = Json::array();
      for (const auto& r : extra_relators) {
        extra.push_back(g.parse_word(r));
        rel.push_back(r);
      }
      CosetOptions co;
      co.max_cosets = cfg.max_cosets;
      auto order = quotient_order(g, extra, co);
      if (!order)
        throw ResourceLimit("coset enumeration exceeded " + std::to_string(cfg.max_cosets) + " cosets");
      Json j{{"command", "quotient"}, {"input", input}, {"added", rel}, {"order", *order}};
      if (!expect.empty() && std::to_string(*order) != expect) {
        emit(cfg, j, out);
        throw CheckFailed("quotient: expected order " + expect + ", got " + std::to_string(*order));
      }
      return j;
    };
  });

  auto* ab_cmd = app.add_subcommand("abelianize", "Abelian invariants");
  ab_cmd->add_option("input", input, "File or catalog name")->required();
  ab_cmd->add_option("--expect", expect, "Expected invariants, e.g. 1 or \"Z + Z/2\"");
  ab_cmd->callback([&] {
    run = [&] {
      auto a = abelianization(load_generic(input));
      Json tor = Json::array();
      for (const auto& t : a.torsion) tor.push_back(big(t));
      Json j{{"command", "abelianize"},
             {"input", input},
             {"abelianization", a.text()},
             {"free_rank", a.free_rank},
             {"torsion", tor}};
      if (!expect.empty() && a.text() != expect) {
        emit(cfg, j, out);
        throw CheckFailed("abelianize: expected " + expect + ", got " + a.text());
      }
      return j;
    };
  });

  bool parity = false, show_rs = false;
  std::string tree = "bfs";
  auto* sub_cmd = app.add_subcommand("subgroup", "Finite-index subgroups by Reidemeister-Schreier");
  sub_cmd->add_option("input", input, "File or catalog name")->required();
  sub_cmd->add_flag("--parity", parity, "Even A-length and even X-length subgroup")->required();
  sub_cmd->add_flag("--rs", show_rs, "Print the subgroup presentation");
  sub_cmd->add_option("--tree", tree)->check(CLI::IsMember({"bfs", "dfs"}))->capture_default_str();
  sub_cmd->add_option("--expect", expect, "Expected abelianization of the subgroup");
  sub_cmd->callback([&] {
    run = [&] {
      auto p = load_bmw(input);
      auto g = to_generic(p);
      auto table = parity_table(p);
      auto h = reidemeister_schreier(g, table, tree == "bfs" ? SpanningTree::Bfs : SpanningTree::Dfs);
      auto a = abelianization(h);
      Json j{{"command", "subgroup"},
             {"input", input},
             {"subgroup", "parity"},
             {"index", table.index()},
             {"generators", h.gen_count()},
             {"relators", h.relators.size()},
             {"abelianization", a.text()},
             {"perfect", a.trivial()}};
      if (show_rs) j["presentation"] = generic_json(h);
      if (!expect.empty() && a.text() != expect) {
        emit(cfg, j, out);
        throw CheckFailed("subgroup: expected abelianization " + expect + ", got " + a.text());
      }
      return j;
    };
  });

  std::string target;
  bool surjective = false, conjclass = false, expect_cyclic = false;
  std::size_t max_results = 0;
  auto* hom_cmd = app.add_subcommand("homsearch", "Homomorphisms into a permutation group");
  hom_cmd->add_option("input", input, "File or catalog name")->required();
  hom_cmd->add_option("--target", target, "symN, altN, cN, dN or a generator file")->required();
  hom_cmd->add_flag("--surjective", surjective, "Only onto the target");
  hom_cmd->add_flag("--conjclass", conjclass, "Up to conjugacy of the first image");
  hom_cmd->add_option("--max-results", max_results, "Stop after this many (0: all)");
  hom_cmd->add_option("--expect", expect, "Expected number of homomorphisms");
  hom_cmd->add_flag("--expect-cyclic", expect_cyclic, "Require every image to be cyclic");
  hom_cmd->callback([&] {
    run = [&] {
      auto g = load_generic(input);
      auto tgt = load_target(target);
      HomSearchOptions ho;
      ho.surjective_only = surjective;
      ho.up_to_conjugacy = conjclass;
      ho.max_results = max_results;
      ho.jobs = cfg.jobs;
      err << "homsearch: target order " << big(tgt.order()) << '\n';
      auto homs = find_homomorphisms(g, tgt, ho);
      Json rows = Json::array();
      bool all_cyclic = true, all_trivial = true;
      for (const auto& h : homs) {
        auto chk = verify_homomorphism(g, h);
        PermGroup img(tgt.degree(), h);
        bool cyc = is_cyclic(img);
        all_cyclic = all_cyclic && cyc;
        all_trivial = all_trivial && chk.image_order == 1;
        Json row{{"image_order", big(chk.image_order)}, {"cyclic", cyc}};
        row["images"] = assignment_json(g, h);
        rows.push_back(row);
      }
      Json j{{"command", "homsearch"},
             {"input", input},
             {"target", target},
             {"target_order", big(tgt.order())},
             {"up_to_conjugacy", conjclass},
             {"count", homs.size()},
             {"all_trivial", all_trivial},
             {"all_cyclic", all_cyclic},
             {"homomorphisms", rows}};
      std::string failed;
      if (!expect.empty() && std::to_string(homs.size()) != expect)
        failed = "homsearch: expected " + expect + " homomorphisms, got " + std::to_string(homs.size());
      else if (expect_cyclic && !all_cyclic)
        failed = "homsearch: found a non-cyclic image";
      if (!failed.empty()) {
        emit(cfg, j, out);
        throw CheckFailed(failed);
      }
      return j;
    };
  });

  std::uint64_t scan_max = 1'000'000;
  auto* hig_cmd = app.add_subcommand("higman-scan", "All n <= max dividing 2^n - 1");
  hig_cmd->add_option("--max", scan_max)->check(CLI::PositiveNumber)->capture_default_str();
  hig_cmd->add_option("--expect", expect, "Expected comma-separated list");
  hig_cmd->callback([&] {
    run = [&] {
      auto found = higman_scan(scan_max);
      std::string list;
      for (auto n : found) list += (list.empty() ? "" : ",") + std::to_string(n);
      Json j{{"command", "higman-scan"}, {"max", scan_max}, {"found", found}};
      if (!expect.empty() && list != expect) {
        emit(cfg, j, out);
        throw CheckFailed("higman-scan: expected " + expect + ", got " + list);
      }
      return j;
    };
  });

  auto* quat_cmd = app.add_subcommand("quaternion", "Quaternion checks");
  quat_cmd->require_subcommand(1);
  auto* ratt_cmd = quat_cmd->add_subcommand("verify-rattaggi", "Evaluate the ratt relators in the quaternions");
  ratt_cmd->callback([&] {
    run = [&] {
      auto ev = verify_rattaggi();
      Json rows = Json::array();
      bool ok = true;
      for (const auto& e : ev) {
        bool good = e.central && !e.value.is_zero();
        ok = ok && good;
        rows.push_back({{"relator", e.relator},
                        {"value", e.value.text()},
                        {"norm", e.norm.str()},
                        {"nonzero_scalar", good}});
      }
      Json j{{"command", "quaternion verify-rattaggi"}, {"relators", rows}, {"ok", ok}};
      if (!ok) {
        emit(cfg, j, out);
        throw CheckFailed("quaternion: a relator is not a nonzero scalar");
      }
      return j;
    };
  });

  std::string alt_opt;
  int lamp = 0, radius = 3, scan_radius = 0;
  auto* marked_cmd = app.add_subcommand("marked", "Marked groups");
  marked_cmd->require_subcommand(1);
  auto* cmp_cmd = marked_cmd->add_subcommand("compare", "Compare balls of two marked groups");
  cmp_cmd->add_option("--alt", alt_opt, "p,q: the pair a = p-cycle, b = q-cycle")->required();
  cmp_cmd->add_option("--lamplighter", lamp, "Lamp group order p of C_p wr Z")->required()->check(CLI::Range(2, 1000));
  cmp_cmd->add_option("--radius", radius)->check(CLI::Range(0, 8))->capture_default_str();
  cmp_cmd->add_option("--scan", scan_radius, "Also search the least differing radius up to this bound");
  cmp_cmd->add_option("--expect", expect, "Expected ball isomorphism: true or false")
      ->check(CLI::IsMember({"true", "false"}));
  cmp_cmd->callback([&] {
    run = [&] {
      auto v = parse_int_list(alt_opt, 2, "--alt");
      auto pair = alt_pair(v[0], v[1]);
      auto o1 = pair.oracle();
      auto o2 = lamplighter_oracle(lamp);
      auto c = balls_isomorphic(o1, o2, radius);
      Json j{{"command", "marked compare"},
             {"alt", alt_opt},
             {"alt_order", big(pair.order)},
             {"lamplighter", lamp},
             {"radius", radius},
             {"isomorphic", c.isomorphic},
             {"witness", c.witness ? Json(marked_word_text(*c.witness)) : Json(nullptr)}};
      if (scan_radius > 0) {
        auto m = first_mismatch(o1, o2, scan_radius);
        j["scan_max_radius"] = scan_radius;
        j["first_mismatch"] = m ? Json(m->radius) : Json(nullptr);
        j["mismatch_witness"] = m && m->witness ? Json(marked_word_text(*m->witness)) : Json(nullptr);
      }
      std::string got = c.isomorphic ? "true" : "false";
      if (!expect.empty() && got != expect) {
        emit(cfg, j, out);
        throw CheckFailed("marked compare: expected isomorphic=" + expect + ", got " + got);
      }
      return j;
    };
  });

  std::string show_name;
  auto* cat_cmd = app.add_subcommand("catalog", "Shipped presentations");
  cat_cmd->require_subcommand(1);
  auto* list_cmd = cat_cmd->add_subcommand("list", "List catalog entries");
  list_cmd->callback([&] {
    run = [&] {
      Json rows = Json::array();
      for (const auto& c : catalog_index())
        rows.push_back({{"name", c.name},
                        {"kind", c.kind},
                        {"degree", c.degree ? Json(std::to_string(c.degree->first) + "," +
                                                   std::to_string(c.degree->second))
                                            : Json(nullptr)},
                        {"title", c.title}});
      return Json{{"command", "catalog list"}, {"entries", rows}};
    };
  });
  auto* show_cmd = cat_cmd->add_subcommand("show", "Print one catalog entry");
  show_cmd->add_option("name", show_name)->required();
  show_cmd->callback([&] {
    run = [&] {
      auto info = catalog_info(show_name);
      auto e = catalog(show_name);
      Json j{{"command", "catalog show"}, {"name", info.name}, {"kind", info.kind}, {"title", info.title}};
      if (!info.note.empty()) j["note"] = info.note;
      if (auto* p = std::get_if<BmwPresentation>(&e)) {
        j["degree"] = degree_json(*p);
        Json sq = Json::array();
        for (const auto& s : p->squares()) sq.push_back(p->square_text(s));
        j["squares"] = sq;
      } else {
        const auto& g = std::get<GenericPresentation>(e);
        j["generators"] = g.gens;
        Json rel = Json::array();
        for (const auto& r : g.relators) rel.push_back(g.word_text(r));
        j["relators"] = rel;
      }
      return j;
    };
  });

  std::vector<std::string> names;
  auto* rep_cmd = app.add_subcommand("report", "Reports over the catalog");
  rep_cmd->require_subcommand(1);
  auto* t1_cmd = rep_cmd->add_subcommand("table1", "Local actions of the example groups");
  t1_cmd->add_option("--names", names, "Catalog names (default: the nine examples)");
  t1_cmd->callback([&] {
    run = [&] {
      Json rows = Json::array();
      for (const auto& r : table1_report(names))
        rows.push_back({{"name", r.name},
                        {"degree_a", r.degree_a},
                        {"local_a", r.label_a},
                        {"degree_x", r.degree_x},
                        {"local_x", r.label_x}});
      return Json{{"command", "report table1"}, {"rows", rows}};
    };
  });
  auto* esc_cmd = rep_cmd->add_subcommand("escher", "Finite quotient of the escher group");
  esc_cmd->add_option("--expect", expect, "Expected image order");
  esc_cmd->callback([&] {
    run = [&] {
      auto e = catalog_generic("escher");
      auto images = escher_assignment(e);
      auto chk = verify_homomorphism(e, images);
      Json j{{"command", "report escher"},
             {"degree", images.empty() ? 0 : images.front().degree()},
             {"relators_hold", chk.ok},
             {"image_order", big(chk.image_order)}};
      if (!chk.ok) {
        emit(cfg, j, out);
        throw CheckFailed("escher: relator " + std::to_string(chk.failing_relator) + " fails");
      }
      if (!expect.empty() && big(chk.image_order) != expect) {
        emit(cfg, j, out);
        throw CheckFailed("escher: expected image order " + expect + ", got " + big(chk.image_order));
      }
      return j;
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  if (!cfg.catalog.empty()) setenv("BMW_CATALOG", cfg.catalog.c_str(), 1);

  try {
    if (!run) throw PreconditionError("missing subcommand");
    emit(cfg, run(), out);
    return kOk;
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const NotSignCoherent& e) {
    err << "error: " << e.what() << "\nwitness: " << e.first() << " -> " << e.second() << '\n';
    return kInvalidInput;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << '\n';
    return kResourceLimit;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace bmw::cli
