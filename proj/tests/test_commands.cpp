#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "../tools/commands.hpp"

using namespace irs;
using namespace irs::tools;
namespace fs = std::filesystem;

namespace {

json small_config() {
  return json{
      {"alpha", {{"family", "cyclic_top"}, {"seed", 1}}},
      {"max_n", 2},
      {"horizon", 200},
      {"blocks", 36},
      {"stage", 2},
      {"target_n", 1},
      {"epsilons", {"1/2"}},
      {"clopen_sets",
       {{{"id", "c0"}, {"in", {"g1"}}, {"out", json::array()}},
        {{"id", "c1"}, {"in", json::array()}, {"out", {"g0 g1"}}}}},
      {"conjugators", {"g0", "g1 g0^-1"}},
      {"theta_stages", {1, 2}},
  };
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("irs_test_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config round trip and validation") {
  RunConfig c = config_from_json(small_config());
  CHECK(c.max_n == 2);
  CHECK(c.epsilons.size() == 1);
  CHECK(c.clopen_sets.size() == 2);
  CHECK(config_from_json(config_to_json(c)).clopen_sets.size() == 2);
  CHECK(config_hash(c) == config_hash(config_from_json(config_to_json(c))));

  json bad = small_config();
  bad["blocks"] = 0;
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
  bad = small_config();
  bad["horizon"] = 10;
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
  bad = small_config();
  bad["stage"] = 9;  // 9! > 36
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
  bad = small_config();
  bad["epsilons"] = {"7/2"};
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
  bad = small_config();
  bad["alpha"]["family"] = "unknown";
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
}

TEST_CASE("schedule command writes its artifacts and passes") {
  RunConfig c = config_from_json(small_config());
  TempDir dir;
  CHECK(cmd_schedule(c, dir.path.string()) == 0);
  CHECK(fs::exists(dir.path / "schedule.json"));
  CHECK(fs::exists(dir.path / "density.csv"));
  json sched = json::parse(slurp(dir.path / "schedule.json"));
  CHECK(sched.at("horizon") == 200);
  CHECK(sched.at("K").at("2") == 36);
  std::string csv = slurp(dir.path / "density.csv");
  CHECK(csv.find("epsilon,t,worst_m") != std::string::npos);
  CHECK(csv.find("true") != std::string::npos);
}

TEST_CASE("build command emits a truncation and a figure") {
  RunConfig c = config_from_json(small_config());
  TempDir dir;
  CHECK(cmd_build(c, dir.path.string()) == 0);
  json tr = json::parse(slurp(dir.path / "truncation.json"));
  CHECK(tr.at("blocks") == 36);
  CHECK(tr.at("edges").size() > 0);
  std::string dot = slurp(dir.path / "truncation.dot");
  // one link edge per block
  for (std::uint64_t j = 0; j < 36; ++j)
    CHECK(dot.find("W" + std::to_string(j) + " -> u" + std::to_string(j)) !=
          std::string::npos);
}

TEST_CASE("theta command tabulates stages") {
  RunConfig c = config_from_json(small_config());
  TempDir dir;
  CHECK(cmd_theta(c, dir.path.string()) == 0);
  std::string csv = slurp(dir.path / "theta.csv");
  CHECK(csv.find("stage,clopen,numerator,denominator") != std::string::npos);
  CHECK(csv.find("1,c0,") != std::string::npos);
  CHECK(csv.find("2,c0,") != std::string::npos);
  json summary = json::parse(slurp(dir.path / "theta_summary.json"));
  CHECK(summary.contains("c0"));
  CHECK(summary.at("c0").contains("oscillation"));
}

TEST_CASE("verify command aggregates and exits zero on success") {
  RunConfig c = config_from_json(small_config());
  TempDir dir;
  CHECK(cmd_verify(c, dir.path.string(), 2) == 0);
  json report = json::parse(slurp(dir.path / "report.json"));
  CHECK(report.at("all_passed") == true);
  CHECK(report.at("invariance").at("all_equal") == true);
  CHECK(report.at("invariance").at("rows").size() == 2 * 2);
  CHECK(report.at("navigation").size() == 1);
  CHECK(report.at("navigation")[0].at("verified") == report.at("navigation")[0].at("eligible"));
  CHECK(report.at("config_hash") == config_hash(c));
}

TEST_CASE("verify report handles an empty clopen grid") {
  json cfg = small_config();
  cfg["clopen_sets"] = json::array();
  RunConfig c = config_from_json(cfg);
  TempDir dir;
  CHECK(cmd_verify(c, dir.path.string(), 1) == 0);
  json report = json::parse(slurp(dir.path / "report.json"));
  CHECK(report.at("invariance").at("rows").size() == 0);
  CHECK(report.at("all_passed") == true);
}

TEST_CASE("block actions can come from JSON files") {
  TempDir dir;
  // emit a builtin family, then feed it back through the file path
  RunConfig builtin = config_from_json(small_config());
  CHECK(cmd_build(builtin, dir.path.string()) == 0);
  json alphas = json::parse(slurp(dir.path / "alphas.json"));
  REQUIRE(alphas.contains("1"));
  REQUIRE(alphas.contains("2"));

  json files = json::object();
  for (const auto& [key, action] : alphas.items()) {
    fs::path p = dir.path / ("alpha" + key + ".json");
    std::ofstream out(p);
    out << action.dump();
    files[key] = p.string();
  }
  json cfg = small_config();
  cfg["alpha"] = {{"family", "files"}, {"files", files}};
  RunConfig from_files = config_from_json(cfg);
  CHECK(from_files.alpha_files.size() == 2);
  CHECK(config_from_json(config_to_json(from_files)).alpha_files == from_files.alpha_files);

  TempDir dir2;
  CHECK(cmd_build(from_files, dir2.path.string()) == 0);
  CHECK(slurp(dir2.path / "truncation.json") == slurp(dir.path / "truncation.json"));

  json missing = cfg;
  missing["alpha"]["files"].erase("2");
  CHECK_THROWS_AS(cmd_schedule(config_from_json(missing), dir.path.string()),
                  std::invalid_argument);
}

TEST_CASE("navigate and appears commands") {
  RunConfig c = config_from_json(small_config());
  TempDir dir;
  CHECK(cmd_navigate(c, dir.path.string(), "w:13:1", std::nullopt, std::nullopt) == 0);
  json nav = json::parse(slurp(dir.path / "navigate.json"));
  CHECK(nav.at("replayed") == true);
  CHECK(nav.at("witness").at("target_block") == 12);

  CHECK(cmd_appears(c, dir.path.string(), "w:13:1", std::nullopt, std::nullopt) == 0);
  json app = json::parse(slurp(dir.path / "appears.json"));
  CHECK(app.at("appears") == true);
  CHECK(app.at("embedding").at("image").size() == 2);
}
