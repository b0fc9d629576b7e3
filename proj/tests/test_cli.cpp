#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bmw/catalog.hpp"
#include "bmw/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = bmw::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
  return bmw::read_file(std::filesystem::path(BMW_GOLDEN_DIR) / (name + ".json"));
}

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("json output matches golden files") {
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
      {"report_table1", {"report", "table1"}},
      {"local_action_sv", {"local-action", "sv"}},
      {"validate_wise", {"validate", "wise"}},
      {"quotient_gamma66", {"quotient", "gamma66", "--add-relator", "[x^3,y^4]"}},
      {"higman_scan", {"higman-scan", "--max", "100000"}},
      {"catalog_list", {"catalog", "list"}},
      {"quaternion_rattaggi", {"quaternion", "verify-rattaggi"}},
      {"enumerate_1_1", {"enumerate", "--degree", "1,1"}},
      {"subgroup_gamma45", {"subgroup", "gamma45", "--parity"}},
      {"double_z2", {"double", "z2"}},
      {"discreteness_klein", {"discreteness", "klein"}},
  };
  for (const auto& [name, args] : cases) {
    CAPTURE(name);
    std::vector<std::string> full{"--format", "json"};
    full.insert(full.end(), args.begin(), args.end());
    auto r = run(full);
    CHECK(r.code == 0);
    CHECK(r.out == golden(name));
  }
}

TEST_CASE("identical invocations are bit-identical in json mode") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"--format", "json", "local-action", "jw"},
        std::vector<std::string>{"--format", "json", "tensor", "sv"},
        std::vector<std::string>{"--format", "json", "homsearch", "baumslag", "--target", "sym4"}}) {
    auto a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("enumeration output does not depend on the job count") {
  auto one = run({"--format", "json", "--jobs", "1", "enumerate", "--degree", "4,4", "--torsion-free"});
  auto three = run({"--format", "json", "--jobs", "3", "enumerate", "--degree", "4,4", "--torsion-free"});
  CHECK(one.code == 0);
  CHECK(one.out == three.out);
  CHECK(json_of(one)["total"] == 52);
  CHECK(one.err.find("enumerate: profile") != std::string::npos);
}

TEST_CASE("expect flags set the exit code") {
  CHECK(run({"enumerate", "--degree", "2,2", "--torsion-free", "--expect", "2"}).code == bmw::cli::kOk);
  auto bad = run({"enumerate", "--degree", "2,2", "--torsion-free", "--expect", "3"});
  CHECK(bad.code == bmw::cli::kCheckFailed);
  CHECK(bad.err.find("expected 3, got 2") != std::string::npos);
  CHECK(run({"higman-scan", "--max", "1000", "--expect", "1"}).code == bmw::cli::kOk);
  CHECK(run({"abelianize", "z2", "--expect", "1"}).code == bmw::cli::kCheckFailed);
  CHECK(run({"abelianize", "z2", "--expect", "Z^2"}).code == bmw::cli::kOk);
  CHECK(run({"discreteness", "gamma33", "--side", "x", "--expect", "Inconclusive"}).code == bmw::cli::kOk);
  CHECK(run({"discreteness", "gamma33", "--side", "x", "--expect", "Discrete"}).code == bmw::cli::kCheckFailed);
}

TEST_CASE("invalid input exits 2 with diagnostics") {
  auto dir = std::filesystem::temp_directory_path() / "bmw_cli_test";
  std::filesystem::create_directories(dir);
  auto sv = nlohmann::json::parse(bmw::read_file(bmw::catalog_dir() / "sv.json"));
  sv["squares"].erase(0);
  auto broken = (dir / "broken.json").string();
  std::ofstream(broken) << sv.dump();
  auto r = run({"validate", broken});
  CHECK(r.code == bmw::cli::kInvalidInput);
  CHECK(r.err.find("uncovered corner") != std::string::npos);

  CHECK(run({"validate", "no-such-entry"}).code == bmw::cli::kInvalidInput);
  CHECK(run({"frobnicate"}).code == bmw::cli::kInvalidInput);
  CHECK(run({}).code == bmw::cli::kInvalidInput);
  CHECK(run({"enumerate", "--profile", "1,2"}).code == bmw::cli::kInvalidInput);
  CHECK(run({"--format", "xml", "catalog", "list"}).code == bmw::cli::kInvalidInput);

  auto t = run({"tensor", "sv", "--mode", "coherent"});
  CHECK(t.code == bmw::cli::kInvalidInput);
  CHECK(t.err.find("witness:") != std::string::npos);
}

TEST_CASE("resource limits exit 3") {
  CHECK(run({"--max-cosets", "1000", "quotient", "sv"}).code == bmw::cli::kResourceLimit);
  CHECK(run({"--max-nodes", "10", "enumerate", "--degree", "4,4", "--torsion-free"}).code ==
        bmw::cli::kResourceLimit);
}

TEST_CASE("help exits 0") {
  auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("enumerate") != std::string::npos);
}

TEST_CASE("tsv and human renderings") {
  auto tsv = run({"--format", "tsv", "report", "table1"});
  REQUIRE(tsv.code == 0);
  std::istringstream lines(tsv.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "name\tdegree_a\tlocal_a\tdegree_x\tlocal_x");
  int rows = 0;
  for (std::string l; std::getline(lines, l);) ++rows;
  CHECK(rows == 9);

  auto human = run({"local-action", "sv"});
  CHECK(human.out.find("(x y^-1 y x^-1)") != std::string::npos);
}

TEST_CASE("generator-file targets and emitted presentations") {
  auto dir = std::filesystem::temp_directory_path() / "bmw_cli_test";
  std::filesystem::create_directories(dir);
  auto target = (dir / "c3.json").string();
  std::ofstream(target) << R"j({"degree": 3, "generators": ["(1 2 3)"]})j";
  auto r = run({"--format", "json", "homsearch", "z2", "--target", target});
  REQUIRE(r.code == 0);
  CHECK(json_of(r)["count"] == 9);  // Z^2 -> C3: 3 * 3 assignments

  auto emit = (dir / "emit").string();
  std::filesystem::remove_all(emit);
  REQUIRE(run({"enumerate", "--degree", "2,2", "--torsion-free", "--emit", emit}).code == 0);
  std::ifstream f(std::filesystem::path(emit) / "profile_1,0,1,0.jsonl");
  int lines = 0;
  for (std::string l; std::getline(f, l); ++lines) {
    auto path = (dir / "emitted.json").string();
    std::ofstream(path) << l;
    CHECK(run({"validate", path}).code == 0);
  }
  CHECK(lines == 2);
}
