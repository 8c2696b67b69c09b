#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult r;
  r.code = treeshift::cli_main(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

nlohmann::json parse(const RunResult& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("usage errors exit with 2, help with 0") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"norm"}).code == 2);  // --tree is required
  CHECK(run({"norm", "--tree", "t20", "--threads", "500"}).code == 2);
  const RunResult help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("norm") != std::string::npos);
}

TEST_CASE("format errors exit with 2") {
  CHECK(run({"bpe", "--tree", "t20", "--at", "bogus"}).code == 2);
  CHECK(run({"norm", "--tree", "no_such_file.json"}).code == 2);
  CHECK(run({"mult", "--tree", "t20", "--symbol", "geom:1"}).code == 2);
}

TEST_CASE("resource errors exit with 1") {
  // Full 4-ary depth 20 blows any 20k vertex budget.
  const RunResult r =
      run({"norm", "--tree", "kary:4", "--depth", "20", "--budget", "20000"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("norm output on the two-branch profile") {
  const RunResult r = run({"norm", "--tree", "t20"});
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(j["command"] == "norm");
  CHECK(j["depth"] == 60);
  CHECK(j["vertices"] == 121);
  CHECK(j["thinned_from"].is_null());
  CHECK(j["k"] == 1);
  CHECK(j["norm"] == 1.0);
  CHECK(j["argmax"] == 1);
  const auto g = parse(run({"norm", "--tree", "kary:2", "--gelfand", "4"}));
  REQUIRE(g["gelfand"].size() == 4);
  CHECK(std::abs(double(g["gelfand"][0]) - 0.5) <= 1e-12);
  CHECK(std::abs(double(g["gelfand_estimate"]) - 0.5) <= 1e-12);
}

TEST_CASE("bpe verdicts and csv layout") {
  const RunResult r =
      run({"bpe", "--tree", "t20", "--at", "0.2,0.1", "--at", "0.7"});
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(std::abs(double(j["radius"]) - 0.5) <= 1e-9);
  REQUIRE(j["at"].size() == 2);
  CHECK(j["at"][0]["verdict"] == "inside");
  CHECK(j["at"][1]["verdict"] == "outside");
  CHECK(j["c_head"][1] == 5.0);

  const RunResult csv =
      run({"bpe", "--tree", "t20", "--depth", "6", "--format", "csv"});
  REQUIRE(csv.code == 0);
  std::istringstream lines(csv.out);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "k,c_k");
  REQUIRE(std::getline(lines, line));
  CHECK(line == "0,1");
  REQUIRE(std::getline(lines, line));
  CHECK(line == "1,5");
  int rest = 0;
  while (std::getline(lines, line)) ++rest;
  CHECK(rest == 5);  // k = 2..6
}

TEST_CASE("paths accepts budget-thinned deep builds") {
  const RunResult r = run({"paths", "--tree", "kary:4", "--depth", "20",
                           "--budget", "20000", "--path-budget", "4"});
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(j["thinned_from"].is_number());
  CHECK_FALSE(j["enumeration_complete"].get<bool>());
  CHECK(j["paths"].size() == 4);
  CHECK(std::abs(double(j["r2_plus"]) - 0.125) <= 1e-12);
}

TEST_CASE("kernel output carries the eigenvector residual") {
  const RunResult r = run({"kernel", "--tree", "t20", "--at", "0.3"});
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(j["verdict"] == "inside");
  CHECK_FALSE(j["radius_warning"].get<bool>());
  REQUIRE(j["adjoint_eigen_residual"].is_number());
  CHECK(double(j["adjoint_eigen_residual"]) <= 1e-10);
  REQUIRE(j["head"].size() == 12);
  CHECK(j["head"][0]["value"][0] == 1.0);

  // Doubled edge weights break the unit child sums, so the residual is
  // withheld rather than reported against the wrong eigenvalue.
  const std::string wpath = "cli_weights_tmp.json";
  {
    std::ofstream wf(wpath);
    wf << "{\"lambda\": 2.0}\n";
  }
  const auto u = parse(
      run({"kernel", "--tree", "ray", "--depth", "10", "--weights", wpath,
           "--at", "0.1"}));
  CHECK(u["adjoint_eigen_residual"].is_null());
  std::remove(wpath.c_str());
}

TEST_CASE("mult reports upper and lower bounds that bracket the oracle") {
  const RunResult r =
      run({"mult", "--tree", "t20", "--symbol", "geom:1,0.5", "--kmax", "6"});
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(j["shift_norm"] == 1.0);
  CHECK(j["upper"]["value"] == 2.0);
  CHECK(j["margins_reference"] == "oracle");
  REQUIRE(j["oracle_norm"].is_number());
  const double oracle = j["oracle_norm"];
  CHECK(oracle <= 2.0 + 1e-9);
  CHECK(oracle >= double(j["lower_from_coefficients"]) - 1e-9);
  REQUIRE(j["margins"].size() == 7);
  for (const auto& m : j["margins"]) CHECK(double(m) >= -1e-9);

  const auto p = parse(run({"mult", "--tree", "ray", "--depth", "10", "--symbol",
                            "1,0,-0.5", "--symbol2", "1,1"}));
  // (1 - z^2/2)(1 + z) = 1 + z - z^2/2 - z^3/2
  REQUIRE(p["product_coeffs"].size() == 4);
  CHECK(p["product_coeffs"][0][0] == 1.0);
  CHECK(p["product_coeffs"][1][0] == 1.0);
  CHECK(p["product_coeffs"][2][0] == -0.5);
  CHECK(p["product_coeffs"][3][0] == -0.5);
}

TEST_CASE("report emits the full summary") {
  const RunResult r = run({"report", "--tree", "t20"});
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(j["norm"] == 1.0);
  CHECK(j["normalized"].get<bool>());
  CHECK(j["branching_depth_max"] == 0);
  CHECK(j["inclusions"].size() == 4);
  CHECK(std::abs(double(j["bpe"]["radius"]) - 0.5) <= 1e-9);

  const RunResult csv = run({"report", "--tree", "t20", "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("k,c_k,gelfand_k\n", 0) == 0);
}

TEST_CASE("verify passes on the built-in profiles") {
  const RunResult r = run({"verify", "--tree", "ray", "--depth", "20"});
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(j["all_passed"].get<bool>());
  for (const auto& c : j["checks"]) CHECK(c["passed"].get<bool>());
}

TEST_CASE("results are reproducible across runs and thread counts") {
  const std::vector<std::string> base{"report", "--tree", "kary:3", "--depth", "7"};
  const RunResult a = run(base);
  const RunResult b = run(base);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  std::vector<std::string> threaded = base;
  threaded.insert(threaded.end(), {"--threads", "4"});
  const RunResult c = run(threaded);
  REQUIRE(c.code == 0);
  CHECK(a.out == c.out);
}

TEST_CASE("the out flag writes the same bytes to a file") {
  const std::string path = "cli_out_tmp.json";
  const RunResult direct = run({"norm", "--tree", "t20", "--depth", "10"});
  const RunResult filed =
      run({"norm", "--tree", "t20", "--depth", "10", "--out", path});
  REQUIRE(filed.code == 0);
  CHECK(filed.out.empty());
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(buf.str() == direct.out);
  f.close();
  std::remove(path.c_str());
}
