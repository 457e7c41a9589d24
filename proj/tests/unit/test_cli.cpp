#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"

namespace bcfdim::cli {
namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "bcfdim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, ExpandOneHalf) {
  const Outcome o = invoke({"expand", "--value", "1/2"});
  ASSERT_EQ(o.code, kExitCertified) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["result"]["digits"], nlohmann::json::array({3}));
  EXPECT_TRUE(j["result"]["terminated"].get<bool>());
  EXPECT_TRUE(j["certified"].get<bool>());
  EXPECT_EQ(j["config"]["command"], "expand");
  EXPECT_TRUE(j.contains("version"));
  EXPECT_TRUE(j["evidence"].is_array());
}

TEST(Cli, ExpandStandard) {
  const Outcome o = invoke({"expand", "--value", "13/30", "--kind", "standard"});
  ASSERT_EQ(o.code, kExitCertified) << o.err;
  EXPECT_EQ(nlohmann::json::parse(o.out)["result"]["digits"], nlohmann::json::array({2, 3, 4}));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({"dim"}).code, kExitUsage);
  EXPECT_EQ(invoke({"dim", "--alphabet", "1,2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"dim", "--alphabet", "4,,5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"expand", "--value", "2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"expand", "--value", "x"}).code, kExitUsage);
  EXPECT_EQ(invoke({"--threads", "0", "expand", "--value", "1/2"}).code, kExitUsage);
  const Outcome o = invoke({"expand", "--value", "2"});
  EXPECT_FALSE(o.err.empty());
  EXPECT_TRUE(o.out.empty());
}

TEST(Cli, HelpExitsCleanly) { EXPECT_EQ(invoke({"--help"}).code, 0); }

TEST(Cli, InconclusiveDimension) {
  const Outcome o = invoke({"dim", "--alphabet", "3..30", "--method", "partition", "--depth", "12", "--tol", "1e-6"});
  EXPECT_EQ(o.code, kExitInconclusive);
  EXPECT_FALSE(nlohmann::json::parse(o.out)["certified"].get<bool>());
}

TEST(Cli, DivergentPressurePointsAreFlagged) {
  const Outcome o = invoke({"pressure-curve", "--alphabet", "3..", "--t-min", "0.4", "--t-max", "0.8", "--t-steps",
                            "2", "--format", "json"});
  ASSERT_EQ(o.code, kExitCertified) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  ASSERT_EQ(j["evidence"].size(), 2u);
  EXPECT_TRUE(j["evidence"][0]["divergent"].get<bool>());
  EXPECT_FALSE(j["evidence"][1]["divergent"].get<bool>());
  EXPECT_GT(j["evidence"][1]["lambda_lo"].get<double>(), 0.0);
}

TEST(Cli, DimensionReport) {
  const Outcome o = invoke({"dim", "--alphabet", "4,5,6"});
  ASSERT_EQ(o.code, kExitCertified) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_LT(j["result"]["t_hi"].get<double>(), 0.5);
  EXPECT_FALSE(j["evidence"].empty());
  EXPECT_FALSE(j["config"].contains("threads"));
  EXPECT_FALSE(j["config"].contains("output"));
}

TEST(Cli, CsvHeaders) {
  const Outcome d = invoke({"dim", "--alphabet", "4,5,6", "--format", "csv"});
  ASSERT_EQ(d.code, kExitCertified);
  EXPECT_EQ(d.out.substr(0, d.out.find('\n')), "t,lambda_lo,lambda_hi,grid,depth");
  const Outcome c = invoke({"pressure-curve", "--alphabet", "3,4", "--t-steps", "3"});
  ASSERT_EQ(c.code, kExitCertified) << c.err;
  std::istringstream lines(c.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "bcfdim_cli_test.json";
  std::filesystem::remove(path);
  const Outcome o = invoke({"--output", path.string(), "expand", "--value", "0.25"});
  ASSERT_EQ(o.code, kExitCertified);
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["result"]["digits"], nlohmann::json::array({5}));
  std::filesystem::remove(path);
}

TEST(Cli, ThreadCountDoesNotChangeReports) {
  const std::vector<std::vector<std::string>> runs = {
      {"dim", "--alphabet", "3,5,8"},
      {"dim", "--alphabet", "2,5", "--run-cutoff", "32", "--tol", "1e-2"},
      {"verify", "--lemma", "sandwich", "--samples", "500", "--seed", "9"},
      {"verify", "--lemma", "thm46", "--b-min", "5", "--b-max", "8"},
  };
  for (const auto& args : runs) {
    auto one = args;
    one.insert(one.begin(), {"--threads", "1"});
    auto eight = args;
    eight.insert(eight.begin(), {"--threads", "8"});
    const Outcome a = invoke(one);
    const Outcome b = invoke(eight);
    EXPECT_EQ(a.code, b.code) << args[0];
    EXPECT_EQ(a.out, b.out) << args[0];
  }
}

TEST(Cli, SandwichVerifyStreamsStages) {
  const Outcome o = invoke({"verify", "--lemma", "sandwich", "--domain", "star", "--samples", "0"});
  EXPECT_EQ(o.code, kExitCertified) << o.out.substr(0, 400);
  std::istringstream lines(o.out);
  std::string line;
  std::vector<nlohmann::json> parsed;
  while (std::getline(lines, line)) parsed.push_back(nlohmann::json::parse(line));
  ASSERT_GE(parsed.size(), 2u);
  EXPECT_EQ(parsed.front()["stage"], "exhaustive");
  EXPECT_EQ(parsed.back()["result"]["violations"], 0);
  EXPECT_EQ(parsed.back()["result"]["domain"], "star");
}

TEST(Cli, Counterexample) {
  const Outcome o = invoke({"counterexample"});
  ASSERT_EQ(o.code, kExitCertified) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_TRUE(j["certified"].get<bool>());
}

}  // namespace
}  // namespace bcfdim::cli
