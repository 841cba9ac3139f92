#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mixdet_cli/cli.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json report() const { return Json::parse(out); }
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mixdet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = mixdet::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const Json& doc) {
  const fs::path dir = fs::temp_directory_path() / "mixdet_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << doc.dump();
  return p.string();
}

Json real_matrix(const std::vector<std::vector<double>>& rows) {
  Json entries = Json::array();
  for (const auto& row : rows) {
    Json r = Json::array();
    for (double x : row) r.push_back(Json::array({x, 0.0}));
    entries.push_back(r);
  }
  return Json{{"n", rows.size()}, {"entries", entries}};
}

Json tuple_json(const std::vector<Json>& ms) {
  return Json{{"k", ms.size()}, {"n", ms.front()["n"]}, {"matrices", ms}};
}

const Json kSwap = real_matrix({{0, 1}, {1, 0}});

Json signed_contraction(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a[i][j] = a[j][i] = coin(rng) ? 1.0 : -1.0;
  // Scale by 1/(n-1): the norm of a signed adjacency is at most n - 1.
  for (auto& row : a)
    for (double& x : row) x /= static_cast<double>(n - 1);
  return real_matrix(a);
}

}  // namespace

TEST_CASE("multipave") {
  const std::string swap = write_temp("swap_tuple.json", tuple_json({kSwap}));
  auto run = invoke({"multipave", swap, "--r", "2"});
  REQUIRE(run.code == 0);
  const Json rep = run.report();
  CHECK(rep["result"]["blocks"] == Json::parse("[[1],[2]]"));
  CHECK(rep["status"] == "ok");
  CHECK(rep["hashes"]["input"].is_string());
  CHECK(rep["hashes"]["config"].is_string());
  CHECK(rep["config"]["r"] == 2);

  const std::string diag = write_temp("diag_tuple.json", tuple_json({real_matrix({{1, 0}, {0, -1}})}));
  CHECK(invoke({"multipave", diag, "--r", "2"}).code == 2);
  CHECK(invoke({"multipave", swap, "--r", "2", "--budget", "3"}).code == 3);
  CHECK(invoke({"multipave", swap, "--epsilon", "0.5", "--budget", "100"}).code == 3);
  CHECK(invoke({"multipave", swap}).code == 2);
  CHECK(invoke({"multipave", "/nonexistent.json", "--r", "2"}).code == 2);
}

TEST_CASE("reports are reproducible") {
  const std::string swap = write_temp("swap_tuple.json", tuple_json({kSwap}));
  const auto a = invoke({"multipave", swap, "--r", "2", "--seed", "7"});
  const auto b = invoke({"multipave", swap, "--r", "2", "--seed", "7"});
  CHECK(a.out == b.out);
  const auto c = invoke({"multipave", swap, "--r", "2", "--seed", "8"});
  CHECK(a.report()["hashes"]["config"] != c.report()["hashes"]["config"]);
  CHECK(a.report()["hashes"]["input"] == c.report()["hashes"]["input"]);

  const fs::path out = fs::temp_directory_path() / "mixdet_cli_test" / "report.json";
  CHECK(invoke({"multipave", swap, "--r", "2", "--seed", "7", "--out", out.string()}).code == 0);
  std::ifstream in(out);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(written == a.out);
}

TEST_CASE("two-sided paving") {
  const Json a{{"n", 2}, {"entries", Json::parse("[[[0,0],[0,1]],[[0,-1],[0,0]]]")}};
  const auto run = invoke({"pave2sided", write_temp("imag.json", a), "--r", "2"});
  REQUIRE(run.code == 0);
  CHECK(run.report()["result"]["blocks"] == Json::parse("[[1],[2]]"));
  CHECK(run.report()["result"]["balanced_blocks"].size() == 2);
}

TEST_CASE("restrict") {
  const std::string zero = write_temp("zero.json", tuple_json({real_matrix(std::vector<std::vector<double>>(40, std::vector<double>(40, 0.0)))}));
  auto run = invoke({"restrict", zero, "--epsilon", "0.9"});
  CHECK(run.code == 0);

  run = invoke({"restrict", write_temp("swap_tuple.json", tuple_json({kSwap})), "--epsilon", "0.99"});
  REQUIRE(run.code == 0);
  const Json res = run.report()["result"];
  CHECK(res["degenerate"] == true);
  CHECK(res["sigma"].empty());
  CHECK(res["certified_root_bound"].is_null());

  run = invoke({"restrict", write_temp("signed60.json", tuple_json({signed_contraction(60, 5)})), "--epsilon", "0.9"});
  REQUIRE(run.code == 0);
  const Json big = run.report()["result"];
  CHECK(big["keep"] == 8);
  CHECK(big["sigma"].size() == 8);
  for (const auto& lam : big["per_matrix_lambda_max"]) CHECK(lam.get<double>() < 0.9);
}

TEST_CASE("commutator") {
  auto run = invoke({"commutator", write_temp("d.json", real_matrix({{1, 0}, {0, -1}}))});
  REQUIRE(run.code == 0);
  CHECK(run.report()["result"]["residual"].get<double>() <= 1e-10);

  CHECK(invoke({"commutator", write_temp("id.json", real_matrix({{1, 0}, {0, 1}}))}).code == 2);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> a(12, std::vector<double>(12));
  double tr = 0.0;
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) a[i][j] = g(rng) / 12.0;
  for (std::size_t i = 0; i < 12; ++i) tr += a[i][i];
  for (std::size_t i = 0; i < 12; ++i) a[i][i] -= tr / 12.0;
  run = invoke({"commutator", write_temp("r12.json", real_matrix(a)), "--base-threshold", "4"});
  REQUIRE(run.code == 0);
  CHECK(run.report()["result"]["residual"].get<double>() <= 1e-8);
}

TEST_CASE("construct") {
  auto run = invoke({"construct", "fourier", "--m", "2"});
  REQUIRE(run.code == 0);
  CHECK(run.report()["result"]["n"] == 2);
  CHECK(invoke({"construct", "conference", "--m", "6"}).code == 0);
  CHECK(invoke({"construct", "conference", "--m", "10"}).code == 2);

  run = invoke({"construct", "tightness", "--k", "2", "--epsilon", "0.4"});
  REQUIRE(run.code == 0);
  CHECK(run.report()["result"]["singleton_necessity"]["holds"] == true);
  CHECK(run.report()["result"]["minimum_blocks"] == 12);

  const Json c4{{"n", 4}, {"edges", Json::parse("[[1,2],[2,3],[3,4],[4,1]]")}};
  run = invoke({"construct", "graph-identity", write_temp("c4.json", c4)});
  REQUIRE(run.code == 0);
  CHECK(run.report()["result"]["deviation"].get<double>() <= 1e-10);
  const Json loop{{"n", 2}, {"edges", Json::parse("[[1,1]]")}};
  CHECK(invoke({"construct", "graph-identity", write_temp("loop.json", loop)}).code == 2);
}

TEST_CASE("verify") {
  auto run = invoke({"verify", "expected-mdp"});
  REQUIRE(run.code == 0);
  CHECK(run.report()["result"]["suites"][0]["max_deviation"].get<double>() <= 1e-10);
  run = invoke({"verify", "all", "--seed", "1"});
  CHECK(run.code == 0);
  CHECK(run.report()["result"]["all_pass"] == true);
  CHECK(invoke({"verify", "no-such-suite"}).code == 1);
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"frobnicate"}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"verify", "all", "--tol-root", "-1"}).code == 1);
}
