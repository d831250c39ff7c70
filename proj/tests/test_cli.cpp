// Copyright 2026 The fedgame Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "../tools/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = fedgame::cli::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

const std::string kTable1 = std::string(FEDGAME_DATA_DIR) + "/table1.json";

std::string write_temp(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST(Cli, ReproduceTable1) {
  auto r = run({"reproduce-table1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "PoA: 1.0045"));
  EXPECT_TRUE(contains(r.out, "individually_stable: {a,c} | {b}"));
  EXPECT_TRUE(contains(r.out, "optimal: {a,b} | {c}"));
  EXPECT_TRUE(contains(r.out, "21.778"));
  EXPECT_TRUE(contains(r.out, "30.435"));
}

TEST(Cli, Optimal) {
  auto r = run({"optimal", "--instance", kTable1, "--oracle"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "{a,b} | {c} cost=21.778");
  EXPECT_TRUE(contains(r.out, "oracle: agree"));

  auto single = write_temp("fedgame_single.json", R"({"mu_e": "7/2", "sigma2": "1", "players": [3]})");
  auto s = run({"--exact", "optimal", "--instance", single});
  EXPECT_EQ(s.out.substr(0, s.out.find('\n')), "{a} cost=7/2");
}

TEST(Cli, Stability) {
  auto ok = run({"stability", "--instance", kTable1, "--partition", "0,2;1"});
  ASSERT_EQ(ok.code, 0);
  EXPECT_TRUE(contains(ok.out, "IS: stable"));

  auto bad = run({"stability", "--instance", kTable1, "--partition", "0,1;2"});
  ASSERT_EQ(bad.code, 0);
  EXPECT_TRUE(contains(bad.out, "unstable, witness player 0 → coalition {2}"));

  auto small = write_temp("fedgame_small.json", R"({"mu_e": "10", "sigma2": "1", "players": [1, 2, 3]})");
  auto core = run({"--format", "json", "stability", "--instance", small, "--partition", "0;1;2", "--core"});
  ASSERT_EQ(core.code, 0);
  auto j = nlohmann::json::parse(core.out);
  EXPECT_EQ(j["summary"]["stable"], "false");
  EXPECT_EQ(j["summary"]["witness_kind"], "blocking");
}

TEST(Cli, UsageAndParseErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"optimal"}).code, 2);
  EXPECT_EQ(run({"optimal", "--instance", "/nonexistent.json"}).code, 2);
  EXPECT_EQ(run({"stability", "--instance", kTable1, "--partition", "0,,1;2"}).code, 2);
  EXPECT_EQ(run({"stability", "--instance", kTable1, "--partition", "0;1"}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "reproduce-table1"}).code, 2);
  EXPECT_EQ(run({"lemmas", "--suite", "nonexistent"}).code, 2);
  auto broken = write_temp("fedgame_broken.json", R"({"mu_e": "1/0", "sigma2": "1", "players": [1]})");
  EXPECT_EQ(run({"optimal", "--instance", broken}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, BudgetFlagEnvironmentAndExitThree) {
  ::setenv("FEDGAME_BUDGET", "2", 1);
  EXPECT_EQ(run({"poa", "--instance", kTable1}).code, 3);
  EXPECT_EQ(run({"--budget", "3", "poa", "--instance", kTable1}).code, 0);
  ::setenv("FEDGAME_BUDGET", "junk", 1);
  EXPECT_EQ(run({"poa", "--instance", kTable1}).code, 2);
  ::unsetenv("FEDGAME_BUDGET");
  auto many = write_temp("fedgame_many.json", R"({"mu_e": "10", "sigma2": "1", "players": [1,2,3,4,5,6,7,8,9,10,11,12,13,14]})");
  auto r = run({"poa", "--instance", many});
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(contains(r.err, "Bell(14)"));
}

TEST(Cli, Poa) {
  auto r = run({"poa", "--instance", kTable1});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "PoA 1.0045"));
  EXPECT_TRUE(contains(r.out, "bound PoA <= 9: holds"));

  auto sweep = run({"--format", "json", "poa", "--sweep", "20", "--seed", "3", "--max-players", "5"});
  ASSERT_EQ(sweep.code, 0);
  auto j = nlohmann::json::parse(sweep.out);
  EXPECT_EQ(j["summary"]["violations"], "0");
}

TEST(Cli, Lemmas) {
  auto one = run({"lemmas", "--suite", "swap", "--trials", "1"});
  ASSERT_EQ(one.code, 0) << one.err;
  int lines = 0;
  for (char c : one.out) lines += c == '\n';
  EXPECT_EQ(lines, 1 + 1 + 2);  // header, one row, two summary lines

  auto injected = run({"lemmas", "--suite", "swap", "--trials", "5", "--inject-failure"});
  EXPECT_EQ(injected.code, 1);
  EXPECT_TRUE(contains(injected.out, "FAIL"));

  auto replayed = run({"lemmas", "--suite", "injected_failure", "--replay", "0"});
  EXPECT_EQ(replayed.code, 1);

  auto csv = run({"--format", "csv", "lemmas", "--suite", "welcome,merge", "--trials", "20"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')),
            "check,trials,passed,status,counterexample_trial,counterexample_instance,context");
}

TEST(Cli, Constructions) {
  auto r = run({"--format", "json", "constructions"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 6u);
  EXPECT_EQ(run({"constructions", "--rho", "1"}).code, 2);
}

TEST(Cli, MonteCarloIsReproducible) {
  std::vector<std::string> args{"montecarlo", "--instance", kTable1, "--trials", "2000", "--seed", "5"};
  auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(contains(a.out, "1.8368"));  // closed-form err_a in the grand coalition
  auto single = run({"--format", "csv", "montecarlo", "--instance", kTable1, "--partition", "0;1;2", "--trials", "500"});
  EXPECT_TRUE(contains(single.out, "10.0000"));
}

TEST(Cli, FormatsAreConsistent) {
  auto csv = run({"--format", "csv", "reproduce-table1"});
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')),
            "partition,err_a,err_b,err_c,cost,average_error,individually_stable,optimal");
  auto json = run({"--format", "json", "--exact", "reproduce-table1"});
  auto j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j["rows"][3]["err_a"], "218/81");
  EXPECT_EQ(j["summary"]["PoA"], "225/224");
}
