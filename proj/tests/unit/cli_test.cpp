#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "doctest.h"

using namespace edgelap::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const fs::path p = fs::temp_directory_path() / "edgelap_cli_test";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_with(std::vector<std::string> args, const std::string& tag) {
  args.push_back("--out");
  args.push_back((scratch() / (tag + ".csv")).string());
  args.push_back("--summary");
  args.push_back((scratch() / (tag + ".json")).string());
  return run(parse_config(args));
}

}  // namespace

TEST_CASE("parse examples") {
  const auto b = parse_config({"bands", "--n", "1", "--k-min", "-4", "--k-max", "4.5"});
  CHECK(b.subcommand == "bands");
  CHECK(b.k_min == -4.0);
  CHECK(b.k_max == 4.5);
  CHECK(b.x_max == 18.0);
  CHECK(b.points == 3601);

  const auto l = parse_config({"lap-sweep", "--window", "0.9:1.5", "--alpha", "0.4", "--mode", "bump:n=1,k0=1.5,w=0.3"});
  CHECK(l.window == "0.9:1.5");
  CHECK(l.alpha == 0.4);
  CHECK(l.modes.size() == 1);
  CHECK(l.samples == 9);

  CHECK_THROWS_AS(parse_config({"resolvent", "--mode", "gauss:n=1", "--z", "2+0.5i", "--alpha", "1.2"}), UsageError);
  CHECK_THROWS_AS(parse_config({"bands", "--bogus"}), UsageError);
  CHECK_THROWS_AS(parse_config({"frobnicate"}), UsageError);
  CHECK_THROWS_AS(parse_config({"resolvent", "--mode", "gauss:n=1"}), UsageError);
  CHECK_THROWS_AS(parse_config({"bands", "--out", "/nonexistent/dir/x.csv"}), UsageError);
  CHECK_THROWS_AS(parse_config({"--help"}), HelpRequested);
}

TEST_CASE("config file merges under flags") {
  const fs::path cfg = scratch() / "cfg.json";
  std::ofstream(cfg) << R"({"n": 2, "k_min": -1, "k_max": 1})";
  const auto c = parse_config({"bands", "--config", cfg.string(), "--n", "1"});
  CHECK(c.n == 1);
  CHECK(c.k_min == -1.0);
  CHECK(c.k_max == 1.0);
}

TEST_CASE("bands run writes the table") {
  CHECK(run_with({"bands", "--n", "1", "--k-min", "-1", "--k-max", "1", "--k-step", "0.25"}, "bands") == 0);
  const std::string csv = slurp(scratch() / "bands.csv");
  CHECK(csv.rfind("k,lambda,lambda_prime,mu\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
  const auto j = ojson::parse(slurp(scratch() / "bands.json"));
  CHECK(j["subcommand"] == "bands");
  CHECK(j.contains("config_echo"));
  CHECK(j["checks"].size() >= 3);
}

TEST_CASE("resolvent and decay summaries") {
  CHECK(run_with({"resolvent", "--mode", "gauss:n=1,k0=0.5,w=0.5", "--z", "2+0.5i"}, "res") == 0);
  const auto r = ojson::parse(slurp(scratch() / "res.json"));
  CHECK(r["results"].contains("value"));
  CHECK(r["results"]["per_mode"].size() == 1);
  CHECK(r["results"].contains("tail_bound"));

  CHECK(run_with({"decay", "--mode", "bump:n=1,k0=0.5,w=0.5"}, "decay") == 0);
  const auto d = ojson::parse(slurp(scratch() / "decay.json"));
  CHECK(d["results"]["fitted_beta"].get<double>() >= 0.7);
  CHECK(d["results"]["pass"] == true);
}

TEST_CASE("scientific failure surfaces in exit code and summary") {
  CHECK(run_with({"resolvent", "--mode", "flat:n=1", "--lambda", "1.2"}, "refused") == 1);
  const auto j = ojson::parse(slurp(scratch() / "refused.json"));
  CHECK(j["error"]["kind"] == "membership-violation");
  CHECK(j["exit_code"] == 1);
}

TEST_CASE("runs are byte-identical") {
  const std::vector<std::string> args{"density", "--mode", "bump:n=1,k0=1.1,w=0.8", "--lambda", "1.5"};
  REQUIRE(run_with(args, "det_a") == 0);
  REQUIRE(run_with(args, "det_b") == 0);
  CHECK(slurp(scratch() / "det_a.csv") == slurp(scratch() / "det_b.csv"));
  std::string a = slurp(scratch() / "det_a.json"), b = slurp(scratch() / "det_b.json");
  // only the output paths differ
  for (auto* s : {&a, &b})
    for (const char* tag : {"det_a", "det_b"})
      for (auto pos = s->find(tag); pos != std::string::npos; pos = s->find(tag)) s->replace(pos, 5, "det_x");
  CHECK(a == b);
}
