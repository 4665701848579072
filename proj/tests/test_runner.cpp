#include "vwl/runner.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vwl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / "vwl_runner_tests" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream is(p);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int run_quiet(const std::string& sub, const RunConfig& cfg) {
  std::ostringstream out, err;
  return run(sub, cfg, out, err);
}

RunConfig small_config(const std::string& dir) {
  RunConfig c;
  c.points = {1024};
  c.extents = {20};
  c.T = 0.2;
  c.dt = 2e-3;
  c.output = dir;
  return c;
}

}  // namespace

TEST_CASE("spectrum subcommand writes the heisenberg levels") {
  RunConfig c;
  c.output = scratch("spectrum").string();
  c.spectrum.preset = "heisenberg:1";
  c.spectrum.count = 5;
  REQUIRE(run_quiet("spectrum", c) == 0);
  const auto rows = read_csv(fs::path(c.output) / "spectrum.csv");
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"index", "eigenvalue", "multiplicity"});
  for (int i = 0; i < 5; ++i) CHECK(std::stod(rows[i + 1][1]) == 2 * i + 1);
  CHECK(fs::exists(fs::path(c.output) / "manifest.json"));
}

TEST_CASE("solve with zero potential keeps the l2 column constant") {
  RunConfig c = small_config(scratch("solve").string());
  c.potential.kind = "zero";
  REQUIRE(run_quiet("solve", c) == 0);
  const auto rows = read_csv(fs::path(c.output) / "diagnostics.csv");
  REQUIRE(rows.size() > 2);
  CHECK(rows[0][1] == "l2");
  const double first = std::stod(rows[1][1]);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][1]) - first) <= 1e-12 * first);
}

TEST_CASE("uniqueness subcommand matches the phase closed form") {
  RunConfig c = small_config(scratch("uniqueness").string());
  REQUIRE(run_quiet("uniqueness", c) == 0);
  const auto j = nlohmann::json::parse(slurp(fs::path(c.output) / "uniqueness.json"));
  CHECK(j["details"]["max_bound_error"].get<double>() <= 1e-10);
}

TEST_CASE("exit codes") {
  RunConfig c = small_config(scratch("codes").string());
  CHECK(run_quiet("no-such-command", c) == 2);
  // The delta potential has no classical field to compare against.
  CHECK(run_quiet("consistency", c) == 2);
  c.estimate = "prop2";
  CHECK(run_quiet("apriori", c) == 2);
  c.estimate = "prop1";
  c.potential.kind = "gaussian_well";
  c.c_max = 1e-3;
  CHECK(run_quiet("apriori", c) == 1);
}

TEST_CASE("manifest checksums match the artifacts") {
  RunConfig c = small_config(scratch("manifest").string());
  REQUIRE(run_quiet("moderateness", c) == 0);
  const fs::path dir(c.output);
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["config"] == serialize_config(c));
  REQUIRE(m["artifacts"].size() == 2);
  for (const auto& a : m["artifacts"]) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(file_checksum(dir / a["file"].get<std::string>())));
    CHECK(a["fnv1a64"].get<std::string>() == buf);
  }
  CHECK(fs::exists(dir / "run_info.json"));
}

TEST_CASE("output root override") {
  const auto root = scratch("root");
  ::setenv(kOutputRootVar, root.c_str(), 1);
  RunConfig c;
  c.output = "nested";
  CHECK(output_directory(c) == root / "nested");
  c.output = "/abs/path";
  CHECK(output_directory(c) == fs::path("/abs/path"));
  ::unsetenv(kOutputRootVar);
}

TEST_CASE("repeated runs produce identical CSV bodies") {
  for (const std::string sub : {"solve", "uniqueness", "mollifier-scaling"}) {
    RunConfig a = small_config(scratch("rep_a").string());
    a.initial.kind = "random";
    a.seed = 17;
    RunConfig b = a;
    b.output = scratch("rep_b").string();
    REQUIRE(run_quiet(sub, a) == run_quiet(sub, b));
    for (const auto& e : fs::directory_iterator(a.output)) {
      if (e.path().extension() != ".csv") continue;
      CHECK(slurp(e.path()) == slurp(fs::path(b.output) / e.path().filename()));
    }
  }
}

#ifdef VWL_CLI_PATH
TEST_CASE("command line exit codes") {
  const std::string cli = VWL_CLI_PATH;
  const auto dir = scratch("cli");
  auto code = [&](const std::string& args) {
    const int raw = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(code("spectrum --preset heisenberg:1 --count 5 -o " + dir.string()) == 0);
  CHECK(code("spectrum --count") == 2);
  CHECK(code("") == 2);
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << R"({"epsilon":{"eps0":1.5}})";
  CHECK(code("solve -c " + bad.string()) == 2);
}
#endif
