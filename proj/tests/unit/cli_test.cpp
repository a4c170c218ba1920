#include "cli/commands.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli/angles.hpp"
#include "crot/rng.hpp"

using namespace crot;
using namespace crot::cli;

namespace {

constexpr double pi = std::numbers::pi;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result crot_run(const std::vector<std::string>& args, const VerifyHooks& hooks = {}) {
  std::ostringstream out, err;
  const int code = run(args, out, err, hooks);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, sep);) cells.push_back(cell);
  return cells;
}

std::string field(const std::string& table, const std::string& key) {
  std::stringstream ss(table);
  for (std::string line; std::getline(ss, line);) {
    std::stringstream ls(line);
    std::string k, v;
    ls >> k >> v;
    if (k == key) return v;
  }
  return {};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("crot_cli_test_" + name);
}

}  // namespace

TEST(Angles, Parsing) {
  EXPECT_DOUBLE_EQ(parse_angle("0.25pi"), pi / 4);
  EXPECT_DOUBLE_EQ(parse_angle("pi"), pi);
  EXPECT_DOUBLE_EQ(parse_angle("-0.5pi"), -pi / 2);
  EXPECT_DOUBLE_EQ(parse_angle("0.7853"), 0.7853);
  EXPECT_DOUBLE_EQ(parse_angle("1e-3"), 1e-3);
  for (const char* bad : {"", "pi/4", "abc", "0.25 pi", "0.25pix", "1.0.0", "nan", "inf"})
    EXPECT_THROW(parse_angle(bad), UsageError) << bad;
}

TEST(Angles, RoundTripTwelveDigits) {
  CounterRng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const double v = (rng.uniform() - 0.5) * 10.0;
    const std::string text = format_number(v);
    EXPECT_EQ(format_number(parse_angle(text)), text);
    EXPECT_NEAR(parse_angle(text), v, 1e-11 * std::max(1.0, std::abs(v)));
  }
}

TEST(Grid, Parsing) {
  const GridSpec g = parse_grid("0.1pi:0.5pi:5");
  EXPECT_EQ(g.count, 5U);
  const std::vector<double> v = g.values();
  EXPECT_DOUBLE_EQ(v.front(), 0.1 * pi);
  EXPECT_EQ(v.back(), 0.5 * pi);
  EXPECT_NEAR(v[2], 0.3 * pi, 1e-15);
  for (const char* bad : {"0:1", "0:1:1", "0:1:x", "0:1:2:3", "a:1:3", "0:1:-2"})
    EXPECT_THROW(parse_grid(bad), UsageError) << bad;
}

TEST(Pmax, Landmarks) {
  Result r = crot_run({"pmax", "--theta", "0.5pi", "--alpha", "0.5pi"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(field(r.out, "p_max"), "1");

  r = crot_run({"pmax", "--theta", "0.25pi", "--alpha", "0.16667pi"});
  EXPECT_EQ(field(r.out, "case"), "II");
  EXPECT_NEAR(std::stod(field(r.out, "p_max")), 0.32247, 1e-4);

  r = crot_run({"pmax", "--theta", "0.5pi", "--alpha", "0.33333pi"});
  EXPECT_NEAR(std::stod(field(r.out, "p_max")), 0.5, 1e-4);
  for (const char* key : {"x", "y", "delta", "tr_e3", "det_e3"}) EXPECT_FALSE(field(r.out, key).empty()) << key;
}

TEST(Pmax, UsageErrors) {
  Result r = crot_run({"pmax", "--theta", "0.7pi", "--alpha", "0.3"});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("(0, pi/2]"), std::string::npos);
  EXPECT_EQ(crot_run({"pmax", "--theta", "0.3"}).code, kUsage);
  EXPECT_EQ(crot_run({"pmax", "--theta", "x", "--alpha", "0.3"}).code, kUsage);
  EXPECT_EQ(crot_run({"pmax", "--theta", "0.3", "--alpha", "0"}).code, kUsage);
  EXPECT_EQ(crot_run({}).code, kUsage);
  EXPECT_EQ(crot_run({"bogus"}).code, kUsage);
  EXPECT_EQ(crot_run({"--help"}).code, kOk);
}

TEST(Json, StableTopLevelKeys) {
  auto keys_of = [](const std::string& json) {
    std::vector<std::string> keys;
    std::stringstream ss(json);
    for (std::string line; std::getline(ss, line);)
      if (line.rfind("  \"", 0) == 0) keys.push_back(line.substr(3, line.find('"', 3) - 3));
    return keys;
  };
  using Keys = std::vector<std::string>;
  EXPECT_EQ(keys_of(crot_run({"pmax", "--theta", "0.3", "--alpha", "0.4", "--json"}).out),
            (Keys{"params", "case", "x", "y", "p_max", "delta", "tr_e3", "det_e3"}));
  const Keys sim{"params",      "trials",     "seed",    "success_count", "branch_counts",
                 "empirical_p", "analytic_p", "z_score", "mean_fidelity", "mean_ebits"};
  EXPECT_EQ(keys_of(crot_run({"simulate", "--theta", "0.3", "--alpha", "0.4", "--trials", "50", "--json"}).out), sim);
  EXPECT_EQ(keys_of(crot_run({"simulate", "--theta", "0.3", "--alpha", "0.4", "--trials", "50", "--json",
                              "--deterministic"})
                        .out),
            sim);
  EXPECT_EQ(keys_of(crot_run({"threshold", "--tol", "1e-3", "--json"}).out),
            (Keys{"tol", "theta_star_rad", "theta_star_pi"}));
  EXPECT_EQ(keys_of(crot_run({"sweep", "--theta-grid", "0.1:0.2:2", "--alpha-grid", "0.1:0.2:2", "--json"}).out),
            (Keys{"theta_grid", "alpha_grid", "rows"}));
  EXPECT_EQ(keys_of(crot_run({"verify", "--json"}).out), (Keys{"level", "checks", "passed"}));
}

TEST(Sweep, CsvSchemaAndRowIdentities) {
  const auto path = temp_file("sweep.csv");
  const Result r = crot_run({"sweep", "--theta-grid", "0.05pi:0.5pi:7", "--alpha-grid", "0.05pi:0.5pi:6", "--out",
                             path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, "theta_rad,alpha_rad,case,x,y,p_max,e_alpha,avg_cost");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) rows.push_back(split(line, ','));
  ASSERT_EQ(rows.size(), 42U);
  double prev_theta = -1.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& c = rows[i];
    ASSERT_EQ(c.size(), 8U);
    const double theta = std::stod(c[0]), alpha = std::stod(c[1]);
    const double x = std::stod(c[3]), y = std::stod(c[4]), p = std::stod(c[5]);
    const double e = std::stod(c[6]), cost = std::stod(c[7]);
    if (i % 6 == 0) {
      EXPECT_GT(theta, prev_theta);  // theta is the outer loop
      prev_theta = theta;
    } else {
      EXPECT_EQ(theta, prev_theta);
    }
    EXPECT_TRUE(c[2] == "I" || c[2] == "II" || c[2] == "boundary");
    EXPECT_NEAR(p, x + y, 1e-11);
    EXPECT_NEAR(cost, 1 - p + e, 1e-9);
    EXPECT_GE(x, 0.0);
    EXPECT_GE(y, 0.0);
    EXPECT_GT(alpha, 0.0);
    if (std::abs(theta - pi / 2) < 1e-11 && std::abs(alpha - pi / 2) < 1e-11) {
      EXPECT_EQ(p, 1.0);
      EXPECT_EQ(cost, 1.0);
    }
  }
  std::filesystem::remove(path);
}

TEST(Sweep, TwoByTwoAndErrors) {
  const Result r = crot_run({"sweep", "--theta-grid", "0.25pi:0.5pi:2", "--alpha-grid", "0.25pi:0.5pi:2"});
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
  EXPECT_EQ(crot_run({"sweep", "--theta-grid", "0.1:0.2:1", "--alpha-grid", "0.1:0.2:2"}).code, kUsage);
  EXPECT_EQ(crot_run({"sweep", "--theta-grid", "0.1:2:3", "--alpha-grid", "0.1:0.2:2"}).code, kUsage);
  EXPECT_EQ(crot_run({"sweep", "--theta-grid", "0.1:0.2:2", "--alpha-grid", "0.1:0.2:2", "--out",
                      "/nonexistent-dir/out.csv"})
                .code,
            kIoError);
}

TEST(Determinism, ByteIdenticalOutputs) {
  const std::vector<std::vector<std::string>> invocations = {
      {"simulate", "--theta", "0.25pi", "--alpha", "0.16667pi", "--trials", "5000", "--seed", "9", "--json"},
      {"simulate", "--theta", "0.2pi", "--alpha", "0.3pi", "--trials", "3000", "--seed", "4", "--deterministic",
       "--input", "10"},
      {"sweep", "--theta-grid", "0.1pi:0.5pi:5", "--alpha-grid", "0.1pi:0.5pi:5"},
      {"sweep", "--theta-grid", "0.1pi:0.5pi:3", "--alpha-grid", "0.1pi:0.5pi:3", "--json"},
  };
  for (const auto& args : invocations) {
    const Result a = crot_run(args), b = crot_run(args);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
  const Result s1 = crot_run({"simulate", "--theta", "0.3", "--alpha", "0.4", "--trials", "500", "--seed", "1"});
  const Result s2 = crot_run({"simulate", "--theta", "0.3", "--alpha", "0.4", "--trials", "500", "--seed", "2"});
  EXPECT_NE(s1.out, s2.out);
}

TEST(Simulate, ReportsAndErrors) {
  Result r = crot_run({"simulate", "--theta", "0.5pi", "--alpha", "0.33333pi", "--trials", "20000", "--seed", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_LE(std::abs(std::stod(field(r.out, "z_score"))), 4.0);
  EXPECT_NEAR(std::stod(field(r.out, "empirical_p")), 0.5, 0.02);

  r = crot_run({"simulate", "--theta", "0.2pi", "--alpha", "0.2pi", "--trials", "2000", "--deterministic"});
  EXPECT_EQ(r.code, 0);
  EXPECT_GE(std::stod(field(r.out, "mean_fidelity")), 1 - 1e-10);
  EXPECT_FALSE(field(r.out, "mean_ebits").empty());

  EXPECT_EQ(crot_run({"simulate", "--theta", "0.3", "--alpha", "0.4", "--trials", "0"}).code, kUsage);
  EXPECT_EQ(crot_run({"simulate", "--theta", "0.3", "--alpha", "0.4", "--input", "2"}).code, kUsage);
  EXPECT_EQ(crot_run({"simulate", "--theta", "0.3", "--alpha", "0.4", "--trials", "-5"}).code, kUsage);
}

TEST(Threshold, Command) {
  const Result r = crot_run({"threshold"});
  EXPECT_EQ(r.code, 0);
  const double t_pi = std::stod(field(r.out, "theta_star_pi"));
  EXPECT_GE(t_pi, 0.232);
  EXPECT_LE(t_pi, 0.236);
  EXPECT_NEAR(std::stod(field(r.out, "theta_star_rad")), t_pi * pi, 1e-10);
  const double coarse = std::stod(field(crot_run({"threshold", "--tol", "1e-3"}).out, "theta_star_pi"));
  EXPECT_LT(std::abs(coarse - t_pi), 1e-3);
  EXPECT_EQ(crot_run({"threshold", "--tol", "abc"}).code, kUsage);
  EXPECT_EQ(crot_run({"threshold", "--tol", "0.5"}).code, kUsage);
}

TEST(Verify, QuickPasses) {
  const Result r = crot_run({"verify", "--level", "quick"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(crot_run({"verify", "--level", "medium"}).code, kUsage);
}

TEST(Verify, DetectsDeterminantSignError) {
  VerifyHooks hooks;
  hooks.det_e3 = [](const ProtocolParams& p, PovmWeights w) {
    const double cc = std::cos(p.theta()) * std::cos(p.alpha());
    const double s2 = std::pow(std::sin(p.alpha()), 2);
    const double cross = std::pow(std::cos(p.alpha()) * std::sin(p.theta()), 2) / 4;
    return 4 / s2 * ((w.x - (1 + cc) / 2) * (w.y - (1 - cc) / 2) + cross);
  };
  const Result r = crot_run({"verify"}, hooks);
  EXPECT_EQ(r.code, kVerifyFailed);
  EXPECT_NE(r.err.find("det_e3"), std::string::npos);
  EXPECT_NE(r.out.find("FAIL  det_e3 "), std::string::npos);
}

TEST(Verify, DetectsTraceError) {
  VerifyHooks hooks;
  hooks.tr_e3 = [](const ProtocolParams& p, PovmWeights w) { return crot::tr_e3(p, w) + 1e-9; };
  const Result r = crot_run({"verify"}, hooks);
  EXPECT_EQ(r.code, kVerifyFailed);
  EXPECT_NE(r.err.find("tr_e3"), std::string::npos);
}
