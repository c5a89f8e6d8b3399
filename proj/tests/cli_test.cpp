// Copyright 2026 The autosec Authors.
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


#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "autosec/mealy.hpp"
#include "autosec/vv.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace autosec {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::fixture;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("autosec_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  fs::path tmp(const std::string& name) const { return dir / name; }

  CliRun run(const std::string& args, const std::string& stdin_text = "") const {
    const fs::path out = tmp("stdout.txt");
    const fs::path err = tmp("stderr.txt");
    const fs::path in = tmp("stdin.txt");
    std::ofstream(in) << stdin_text;
    const std::string cmd = "env -u AUTOSEC_SEED " + std::string(AUTOSEC_CLI_PATH) + " " + args + " <" + in.string() +
                            " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path dir;
};

std::string fx(const std::string& name) { return fixture(name); }

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_NE(run("--help").out.find("analyze"), std::string::npos);
  EXPECT_EQ(run("learn --help").code, 0);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("analyze --model " + fx("infotainment.model")).code, 1);
  EXPECT_EQ(run("fuzz " + fx("uds_buggy.machine") + " --budget 0").code, 1);
}

TEST_F(Cli, AnalyzeJsonReportsFindings) {
  const CliRun r = run("analyze --model " + fx("infotainment.model") + " --rules " + fx("base.rules") + " --format json");
  ASSERT_EQ(r.code, 2) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["header"]["tool"], "autosec");
  EXPECT_EQ(j["header"]["version"], "0.1.0");
  EXPECT_EQ(j["header"]["command"], "analyze");
  EXPECT_EQ(j["header"]["inputs"].size(), 2u);
  EXPECT_EQ(j["header"]["inputs"][0]["fnv1a64"].get<std::string>().size(), 16u);
  EXPECT_NE(r.out.find("wireless-control"), std::string::npos);
  // Byte-stable.
  EXPECT_EQ(run("analyze --model " + fx("infotainment.model") + " --rules " + fx("base.rules") + " --format json").out,
            r.out);
}

TEST_F(Cli, AnalyzeCleanModelExitsZero) {
  std::ofstream(tmp("empty.rules")) << "# nothing\n";
  const CliRun r = run("analyze --model " + fx("infotainment.model") + " --rules " + tmp("empty.rules").string());
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(Cli, AnalyzeReportsParseErrorsWithLocation) {
  std::ofstream(tmp("bad.rules")) << "RULE x \"t\" SEVERITY low\nELEMENT : \"E\" { \"a\" == \"b\" }\n";
  const CliRun r = run("analyze --model " + fx("infotainment.model") + " --rules " + tmp("bad.rules").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("2:"), std::string::npos) << r.err;
  EXPECT_EQ(run("analyze --model /nonexistent --rules " + fx("base.rules")).code, 1);
}

TEST_F(Cli, AnalyzeChainedAndOutFile) {
  const CliRun r = run("analyze --model " + fx("infotainment.model") + " --rules " + fx("base.rules") + " --rules " +
                    fx("pivot.rules") + " --mode chained --format text --out " + tmp("report.txt").string());
  EXPECT_EQ(r.code, 2) << r.err;
  const std::string text = slurp(tmp("report.txt"));
  EXPECT_NE(text.find("chained"), std::string::npos);
  EXPECT_NE(text.find("read-controlled-asset"), std::string::npos);
}

TEST_F(Cli, TreeDotAndJson) {
  const std::string base = "tree --model " + fx("infotainment.model") + " --rules " + fx("pivot.rules") + " --rules " +
                            fx("base.rules") + " --asset conf_asset";
  const CliRun dot = run(base + " --format dot");
  EXPECT_EQ(dot.code, 2) << dot.err;
  EXPECT_EQ(dot.out.rfind("digraph", 0), 0u);
  const CliRun js = run(base + " --format json");
  ASSERT_EQ(js.code, 2) << js.err;
  const json j = json::parse(js.out);
  EXPECT_TRUE(j.contains("vv_plan"));
  EXPECT_EQ(run(base.substr(0, base.find(" --asset")) + " --asset avail_asset").code, 0);
  EXPECT_EQ(run(base.substr(0, base.find(" --asset")) + " --asset nothing").code, 1);
}

TEST_F(Cli, RepairWritesARepairedModel) {
  const CliRun r = run("repair --model " + fx("infotainment.model") + " --rules " + fx("base.rules") +
                    " --format json --repaired-model " + tmp("fixed.model").string());
  ASSERT_EQ(r.code, 2) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["repair"]["cost"].get<double>(), 3.0) << r.out;
  const CliRun again = run("analyze --model " + tmp("fixed.model").string() + " --rules " + fx("base.rules"));
  EXPECT_EQ(again.code, 0) << again.out << again.err;
  const CliRun none = run("repair --model " + tmp("fixed.model").string() + " --rules " + fx("base.rules"));
  EXPECT_EQ(none.code, 0) << none.err;
}

TEST_F(Cli, LearnThenCheckFindsTheUdsViolations) {
  const fs::path machine = tmp("uds.machine");
  const CliRun learn = run("learn --sul uds-buggy --oracle wmethod:1 --out " + machine.string() + " --dot " +
                        tmp("uds.dot").string() + " --stats " + tmp("stats.json").string());
  ASSERT_EQ(learn.code, 0) << learn.err;
  EXPECT_TRUE(diff(load_mealy(machine.string()), load_mealy(fx("uds_buggy.machine"))).equivalent);
  EXPECT_EQ(slurp(tmp("uds.dot")).rfind("digraph", 0), 0u);
  const json stats = json::parse(slurp(tmp("stats.json")));
  EXPECT_GT(stats["queries"]["membership_queries"].get<int>(), 0);

  const CliRun check = run("check " + machine.string() + " --property wrong-key-auth --property prev-key-auth");
  EXPECT_EQ(check.code, 2) << check.err;
  const json j = json::parse(check.out);
  ASSERT_EQ(j["results"].size(), 2u);
  EXPECT_FALSE(j["results"][0]["passed"].get<bool>());

  const CliRun fixed = run("check " + fx("uds_fixed.machine") + " --property " + fx("uds.properties"));
  EXPECT_EQ(fixed.code, 0) << fixed.err << fixed.out;
  EXPECT_EQ(run("check " + fx("uds_fixed.machine") + " --property no-such-property").code, 1);
}

TEST_F(Cli, LearnRandomOracleIsSeeded) {
  const std::string base = "learn --sul ble-buggy --oracle random:200,1,12 --stats " + tmp("s.json").string();
  ASSERT_EQ(run(base + " --seed 5 --out " + tmp("a.machine").string()).code, 0);
  ASSERT_EQ(run(base + " --seed 5 --out " + tmp("b.machine").string()).code, 0);
  EXPECT_EQ(slurp(tmp("a.machine")), slurp(tmp("b.machine")));
  EXPECT_EQ(json::parse(slurp(tmp("s.json")))["header"]["seed"], 5);
  EXPECT_EQ(run("learn --sul ble-buggy --oracle random:1,2").code, 1);
  EXPECT_EQ(run("learn --sul nowhere").code, 1);
  EXPECT_EQ(run("learn --sul uds-buggy --max-steps 5").code, 1);
}

TEST_F(Cli, DiffExitCodes) {
  EXPECT_EQ(run("diff " + fx("uds_buggy.machine") + " " + fx("uds_buggy.machine")).code, 0);
  const CliRun r = run("diff " + fx("uds_buggy.machine") + " " + fx("uds_fixed.machine"));
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.out)["witness"]["inputs"].size(), 5u);
  EXPECT_EQ(run("diff " + fx("uds_buggy.machine") + " " + fx("ble_buggy.machine")).code, 1);
}

TEST_F(Cli, SinksExitCodes) {
  const CliRun r = run("sinks " + fx("ble_buggy.machine") + " --escape controller_reset");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.out)["sinks"].size(), 1u);
  EXPECT_EQ(run("sinks " + fx("ble_fixed.machine") + " --escape controller_reset").code, 0);
}

TEST_F(Cli, FuzzAndVerifyRoundTrip) {
  const fs::path suite = tmp("fixed.suite");
  const CliRun fuzz = run("fuzz " + fx("ble_fixed.machine") + " --budget 500 --max-len 12 --seed 7 --out " + suite.string());
  ASSERT_EQ(fuzz.code, 0) << fuzz.err;
  EXPECT_EQ(load_suite(suite.string()).cases.size(), 500u);
  const CliRun same = run("fuzz " + fx("ble_fixed.machine") + " --budget 500 --max-len 12 --seed 7");
  EXPECT_EQ(same.out, slurp(suite));

  EXPECT_EQ(run("verify " + suite.string() + " --sul ble-fixed").code, 0);
  const CliRun bad = run("verify " + suite.string() + " --sul ble-buggy --counterexamples " + tmp("cex.txt").string());
  EXPECT_EQ(bad.code, 2) << bad.err;
  EXPECT_FALSE(slurp(tmp("cex.txt")).empty());
}

TEST_F(Cli, SeedComesFromTheEnvironment) {
  const std::string cmd = "fuzz " + fx("uds_buggy.machine") + " --budget 20";
  const CliRun a = run(cmd);
  const CliRun b = run(cmd + " --seed 1");
  EXPECT_EQ(a.out, b.out);
  const fs::path out = tmp("env.txt");
  const std::string env_cmd = "AUTOSEC_SEED=9 " + std::string(AUTOSEC_CLI_PATH) + " " + cmd + " >" + out.string();
  ASSERT_EQ(std::system(env_cmd.c_str()), 0);
  EXPECT_EQ(slurp(out), run(cmd + " --seed 9").out);
}

TEST_F(Cli, SimulateSpeaksHexFrames) {
  const CliRun r = run("simulate --sul uds-buggy", "10 03\n10 02\n27 01\nreset\n27 01\n");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::vector<std::string> got;
  for (std::string l; std::getline(lines, l);) got.push_back(l);
  ASSERT_EQ(got.size(), 5u) << r.out;
  EXPECT_EQ(got[0], "50 03");
  EXPECT_EQ(got[1], "50 02");
  EXPECT_EQ(got[2].substr(0, 5), "67 01");
  EXPECT_EQ(got[3], "ok");
  EXPECT_EQ(got[4], "7F 27 24");
  EXPECT_EQ(run("simulate --sul file:" + fx("ble_fixed.machine"), "").code, 0);
}

}  // namespace
}  // namespace autosec
