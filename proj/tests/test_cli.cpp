#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = hamforge::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + "hamforge_" + name; }

}  // namespace

TEST(Cli, CheckStructurePasses) {
  const Result r = run({"check", "--suite", "structure"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["summary"]["failed"], 0);
  EXPECT_GT(j["summary"]["total"].get<int>(), 20);
}

TEST(Cli, CheckAllReportsMeasuredFailures) {
  const Result r = run({"check"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.out)["summary"]["failed"], 4);
}

TEST(Cli, ReportIsByteIdentical) {
  EXPECT_EQ(run({"check", "--seed", "9"}).out, run({"check", "--seed", "9"}).out);
}

TEST(Cli, ZeroParameterIsAnArgumentError) {
  EXPECT_EQ(run({"check", "--suite", "structure", "--param", "d=0", "--param", "a=0"}).code, 2);
  EXPECT_EQ(run({"check", "--param", "a"}).code, 2);
  EXPECT_EQ(run({"check", "--param", "a=x"}).code, 2);
  EXPECT_EQ(run({"check", "--suite", "nope"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"simulate", "--method", "euler"}).code, 2);
  EXPECT_EQ(run({"simulate", "--x0", "1,2"}).code, 2);
}

TEST(Cli, NewtonDimensions) {
  const Result r = run({"check", "--suite", "newton", "--seed", "7"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("dimension 3"), std::string::npos);
  EXPECT_NE(r.out.find("dimension 2"), std::string::npos);
}

TEST(Cli, DecimalParametersAreExact) {
  const Result r = run({"check", "--suite", "structure", "--param", "a=0.1", "--param", "b=-2/3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["config"]["params"]["a"], "1/10");
}

TEST(Cli, SimulateDefaultsBlowUp) {
  const Result r = run({"simulate"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("Divergence"), std::string::npos);
}

TEST(Cli, SimulateZeroTimeIsOneRow) {
  const Result r = run({"simulate", "--t-end", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "t,x,y,z\n0,1,1,1\n");
}

TEST(Cli, SimulateEquilibriumIsConstant) {
  const std::string path = temp_path("eq.csv");
  const Result r = run({"simulate", "--x0", "0,0,0", "--t-end", "0.01", "--out", path});
  EXPECT_EQ(r.code, 0);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.find(',')), ",0,0,0");
  }
  EXPECT_EQ(rows, 11);
  EXPECT_NE(r.out.find("drift H1"), std::string::npos);
  std::remove(path.c_str());
}

TEST(Cli, Realize) {
  EXPECT_EQ(run({"realize", "s2"}).code, 0);
  EXPECT_EQ(run({"realize", "s3"}).code, 0);
  EXPECT_EQ(run({"realize", "s2", "--tol", "1e-12", "--dt", "1e-2"}).code, 1);
  EXPECT_EQ(run({"realize", "s4"}).code, 2);
  EXPECT_EQ(run({"realize", "s3", "--x0", "1,0,1,1", "--t-end", "2", "--param", "d=1"}).code, 3);
  const auto j = nlohmann::json::parse(run({"realize", "s2", "--format", "json"}).out);
  EXPECT_LE(j["max_deviation"].get<double>(), 1e-6);
}

TEST(Cli, FindSymmetries) {
  const Result r = run({"find-symmetries", "newton_s2", "--degree", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("3 generators"), std::string::npos);
  EXPECT_NE(r.out.find("t ∂t + 2 ∂q1 + q2 ∂q2"), std::string::npos);
  EXPECT_NE(run({"find-symmetries", "newton_s3"}).out.find("2 generators"), std::string::npos);
  EXPECT_NE(run({"find-symmetries", "newton_s2", "--degree", "0"}).out.find("2 generators"), std::string::npos);
  EXPECT_EQ(run({"find-symmetries", "newton_s2", "--degree", "-1"}).code, 2);
  EXPECT_EQ(run({"find-symmetries", "lv"}).code, 2);
  const auto j = nlohmann::json::parse(run({"find-symmetries", "newton_s2", "--format", "json"}).out);
  EXPECT_EQ(j["dimension"], 3);
  EXPECT_EQ(j["coefficients"].size(), 3u);
}

TEST(Cli, DriftThreshold) {
  EXPECT_EQ(run({"drift", "--t-end", "1"}).code, 0);
  EXPECT_EQ(run({"drift", "--t-end", "1", "--dt", "0.05", "--tol", "1e-12"}).code, 1);
  EXPECT_EQ(run({"drift", "--system", "hamilton_s2", "--param", "b=0", "--x0", "0,0,1,1", "--t-end", "1",
                 "--invariant", "p2", "--tol", "1e-300"}).code, 0);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  const std::string path = temp_path("cfg.json");
  {
    std::ofstream f(path);
    f << R"({"suite": "liegroups", "seed": 5, "params": {"a": "2", "c": 3}})";
  }
  const auto j = nlohmann::json::parse(run({"check", "--config", path, "--seed", "11"}).out);
  EXPECT_EQ(j["config"]["suite"], "liegroups");
  EXPECT_EQ(j["config"]["seed"], 11);
  EXPECT_EQ(j["config"]["params"]["a"], "2");
  EXPECT_EQ(j["config"]["params"]["c"], "3");
  EXPECT_EQ(run({"check", "--config", temp_path("missing.json")}).code, 2);
  std::remove(path.c_str());
}

TEST(Cli, SeedFromEnvironment) {
  setenv("HAMFORGE_SEED", "123", 1);
  const auto j = nlohmann::json::parse(run({"check", "--suite", "liegroups"}).out);
  unsetenv("HAMFORGE_SEED");
  EXPECT_EQ(j["config"]["seed"], 123);
}
