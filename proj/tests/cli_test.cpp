//
// Copyright 2026 The tprivacy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

namespace tprivacy::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

class ScratchDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tprivacy_cli_" + std::string(::testing::UnitTest::GetInstance()
                                              ->current_test_info()
                                              ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    old_ = fs::current_path();
    fs::current_path(dir_);
    fs::copy_file(fs::path(TPRIVACY_DATA_DIR) / "county_tracts.csv",
                  dir_ / "county_tracts.csv");
  }
  void TearDown() override {
    fs::current_path(old_);
    fs::remove_all(dir_);
  }
  fs::path dir_, old_;
};

const std::map<std::string, std::vector<std::string>> kFlags{
    {"privatize", {"--values", "--input", "--family", "--epsilon", "--sensitivity"}},
    {"simulate",
     {"--beta0", "--beta1", "--sigma", "--lambda", "--epsilon-x", "--epsilon-y", "--n",
      "--emit"}},
    {"fit-naive",
     {"--beta0", "--beta1", "--sigma", "--lambda", "--epsilon-x", "--epsilon-y", "--n",
      "--input"}},
    {"fit-mcem",
     {"--epsilon-x", "--epsilon-y", "--n", "--input", "--k-samples", "--max-iter", "--tol",
      "--ess-floor", "--alpha", "--weighting"}},
    {"abc-posterior",
     {"--epsilon-x", "--epsilon-y", "--n", "--input", "--draws", "--prior", "--prior-beta0",
      "--prior-beta1", "--max-proposals", "--batch", "--toy"}},
    {"clt-limits",
     {"--beta0", "--beta1", "--sigma", "--sigma-u", "--sigma-v", "--alpha", "--design-n",
      "--design-seed", "--design-variance", "--replicates"}},
    {"coverage-grid",
     {"--beta1", "--sigma", "--sigma-u", "--sigma-v", "--alpha", "--design-n",
      "--design-seed", "--design-variance", "--convention"}},
    {"ellipse-study",
     {"--epsilon-x", "--epsilon-y", "--n", "--replicates", "--k-samples", "--alpha",
      "--weighting"}},
    {"dissimilarity", {"--input", "--epsilon", "--replicates"}},
    {"verify-dp", {"--family", "--epsilon", "--support-bound", "--claimed-epsilon"}},
};

TEST(Cli, TopLevelHelpListsGlobalsAndSubcommands) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--seed", "--output", "--format", "--config", "--threads"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
  for (const auto& [name, flags] : kFlags) {
    EXPECT_NE(r.out.find(name), std::string::npos) << name;
  }
}

TEST(Cli, SubcommandHelpListsEveryFlag) {
  for (const auto& [name, flags] : kFlags) {
    const auto r = run({name, "--help"});
    EXPECT_EQ(r.code, 0) << name;
    for (const auto& flag : flags) {
      EXPECT_NE(r.out.find(flag), std::string::npos) << name << " " << flag;
    }
  }
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"verify-dp", "--family", "randomized-response", "--epsilon", "1",
                 "--bogus"})
                .code,
            2);
  EXPECT_EQ(run({"verify-dp", "--epsilon", "1"}).code, 2);  // missing --family
  EXPECT_EQ(run({"simulate", "--n", "5"}).code, 2);          // missing --seed
  EXPECT_EQ(run({"simulate", "--n", "five", "--seed", "1"}).code, 2);
  EXPECT_EQ(run({"simulate", "--seed", "1", "--format", "xml"}).code, 2);
}

TEST(Cli, DomainErrorsExitOneWithErrorName) {
  auto r = run({"simulate", "--seed", "1", "--epsilon-x", "-1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("invalid-argument"), std::string::npos);
  EXPECT_TRUE(r.out.empty());

  r = run({"verify-dp", "--family", "laplace", "--epsilon", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("unsupported"), std::string::npos);
}

TEST(Cli, SuccessWritesNothingToStderr) {
  const auto r = run({"verify-dp", "--family", "double-geometric", "--epsilon", "0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, VerifyDpRandomizedResponse) {
  const auto r = run({"verify-dp", "--family", "randomized-response", "--epsilon", "1.0986",
                      "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["satisfied"].get<bool>());
  EXPECT_NEAR(doc["max_log_ratio"].get<double>(), std::log(3.0), 1e-4);
  EXPECT_DOUBLE_EQ(doc["max_log_ratio"].get<double>(), 1.0986);
}

TEST(Cli, CsvStartsWithMetaComment) {
  const auto r = run({"simulate", "--seed", "11", "--n", "3", "--epsilon-x", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0].rfind("# tprivacy ", 0), 0u);
  EXPECT_NE(ls[0].find("command=simulate"), std::string::npos);
  EXPECT_NE(ls[0].find("seed=11"), std::string::npos);
  EXPECT_NE(ls[0].find("epsilon-x=0.5"), std::string::npos);
  EXPECT_NE(ls[0].find("lambda=10"), std::string::npos);
  EXPECT_EQ(ls[1], "index,x_tilde,y_tilde");
}

TEST(Cli, JsonCarriesMeta) {
  const auto r = run({"simulate", "--seed", "11", "--n", "3", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["meta"]["command"], "simulate");
  EXPECT_EQ(doc["meta"]["seed"], 11);
  EXPECT_EQ(doc["meta"]["params"]["n"], "3");
  EXPECT_EQ(doc["records"].size(), 3u);
}

TEST(Cli, OutputIndependentOfThreadCount) {
  const std::vector<std::string> base{"abc-posterior", "--seed", "5", "--n", "3",
                                      "--draws", "50", "--epsilon-x", "2",
                                      "--epsilon-y", "2", "--sigma", "2", "--lambda", "3"};
  auto one = base;
  one.insert(one.end(), {"--threads", "1"});
  auto four = base;
  four.insert(four.end(), {"--threads", "4"});
  const auto a = run(one);
  const auto b = run(four);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST_F(ScratchDir, ConfigFileWithFlagOverride) {
  {
    std::ofstream cfg("cfg.json");
    cfg << R"({"seed": 3, "n": 4, "epsilon_x": 0.5, "format": "json",
               "simulate": {"emit": "both"}})";
  }
  const auto from_cfg = run({"simulate", "--config", "cfg.json"});
  ASSERT_EQ(from_cfg.code, 0) << from_cfg.err;
  auto doc = nlohmann::json::parse(from_cfg.out);
  EXPECT_EQ(doc["meta"]["seed"], 3);
  EXPECT_EQ(doc["records"].size(), 4u);
  EXPECT_TRUE(doc["records"][0].contains("x"));
  EXPECT_EQ(doc["meta"]["params"]["epsilon-x"], "0.5");

  const auto flags = run({"simulate", "--seed", "3", "--n", "4", "--epsilon-x", "0.5",
                          "--format", "json", "--emit", "both"});
  EXPECT_EQ(flags.out, from_cfg.out);

  const auto overridden = run({"simulate", "--config", "cfg.json", "--n", "6"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  doc = nlohmann::json::parse(overridden.out);
  EXPECT_EQ(doc["records"].size(), 6u);
}

TEST_F(ScratchDir, ConfigErrorsAreUsageErrors) {
  {
    std::ofstream cfg("bad.json");
    cfg << R"({"seed": 3, "no-such-flag": 1})";
  }
  EXPECT_EQ(run({"simulate", "--config", "bad.json"}).code, 2);
  {
    std::ofstream cfg("broken.json");
    cfg << "{ not json";
  }
  EXPECT_EQ(run({"simulate", "--config", "broken.json"}).code, 2);
  EXPECT_EQ(run({"simulate", "--config", "missing.json"}).code, 2);
}

TEST_F(ScratchDir, SimulatedReleaseFeedsFits) {
  ASSERT_EQ(run({"simulate", "--seed", "8", "--n", "40", "--output", "rel.csv"}).code, 0);
  const auto from_file = run({"fit-naive", "--input", "rel.csv"});
  const auto regenerated = run({"fit-naive", "--seed", "8", "--n", "40"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  ASSERT_EQ(regenerated.code, 0) << regenerated.err;
  // Same numbers, different parameter echo.
  EXPECT_EQ(lines(from_file.out).back(), lines(regenerated.out).back());

  ASSERT_EQ(run({"simulate", "--seed", "8", "--n", "40", "--format", "json", "--output",
                 "rel.json"})
                .code,
            0);
  const auto from_json = run({"fit-naive", "--input", "rel.json"});
  EXPECT_EQ(lines(from_json.out).back(), lines(from_file.out).back());
}

TEST(Cli, EllipseStudyEmitsRowsAndSummary) {
  const auto r = run({"ellipse-study", "--epsilon-x", "1", "--epsilon-y", "1", "--n", "10",
                      "--replicates", "3", "--k-samples", "500", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 1u + 1u + 6u + 1u);
  EXPECT_EQ(ls[1].rfind("replicate,method,", 0), 0u);
  EXPECT_EQ(ls[2].rfind("0,naive,", 0), 0u);
  EXPECT_EQ(ls[3].rfind("0,mcem,", 0), 0u);
  EXPECT_EQ(ls.back().rfind("# coverage naive=", 0), 0u);
}

TEST(Cli, DeterministicAcrossReruns) {
  const std::vector<std::vector<std::string>> commands{
      {"privatize", "--values", "1,2,3", "--epsilon", "0.5", "--seed", "1"},
      {"fit-mcem", "--seed", "2", "--n", "6", "--k-samples", "300", "--max-iter", "5"},
      {"coverage-grid", "--sigma-u", "0,1", "--sigma-v", "0,1"},
  };
  for (const auto& c : commands) {
    const auto a = run(c);
    const auto b = run(c);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

// Splits a documented command line on whitespace, honouring single quotes.
std::vector<std::string> shell_words(const std::string& line) {
  std::vector<std::string> words;
  std::string cur;
  bool quoted = false, have = false;
  for (char c : line) {
    if (c == '\'') {
      quoted = !quoted;
      have = true;
    } else if (!quoted && (c == ' ' || c == '\t')) {
      if (have) words.push_back(cur);
      cur.clear();
      have = false;
    } else {
      cur += c;
      have = true;
    }
  }
  if (have) words.push_back(cur);
  return words;
}

TEST_F(ScratchDir, ReadmeExamplesRun) {
  const auto readme = lines(slurp(TPRIVACY_README));
  bool in_block = false;
  std::set<std::string> seen;
  int ran = 0;
  for (const auto& line : readme) {
    if (line.rfind("```", 0) == 0) {
      in_block = line == "```sh";
      continue;
    }
    if (!in_block || line.rfind("tprivacy ", 0) != 0) continue;
    auto words = shell_words(line);
    words.erase(words.begin());
    const auto r = run(words);
    EXPECT_EQ(r.code, 0) << line << "\n" << r.err;
    if (!words.empty()) seen.insert(words.front());
    ++ran;
  }
  EXPECT_GE(ran, 10);
  for (const auto& [name, flags] : kFlags) {
    EXPECT_TRUE(seen.count(name)) << "README has no example for " << name;
  }
}

}  // namespace
}  // namespace tprivacy::cli
