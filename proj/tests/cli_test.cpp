// Copyright 2026 The orq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "orq/orq.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("orq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Runs the CLI with stdout and stderr captured to files; returns the exit code.
  int run(const std::string& args) const {
    const std::string cmd = std::string("'") + ORQ_CLI + "' " + args + " >'" + path("stdout.txt") + "' 2>'" +
                            path("stderr.txt") + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

const char* kRedundant = "OPENQASM 2.0;\nqreg q[3];\nh q[0];\nh q[0];\ncx q[0],q[2];\nx q[1];\nx q[1];\nt q[2];\n";

}  // namespace

TEST_F(Cli, optimize_writes_output_and_report) {
  write("in.qasm", kRedundant);
  ASSERT_EQ(run("optimize " + path("in.qasm") + " --profile line5 --pipeline fixed_sequence --out " +
                path("out.qasm") + " --report " + path("report.json")),
            0)
      << read("stderr.txt");
  const orq::Circuit out = orq::parse_qasm(read("out.qasm"));
  EXPECT_TRUE(orq::check_feasibility(out, orq::bundled_profile("line5")).feasible);
  const auto report = nlohmann::json::parse(read("report.json"));
  EXPECT_EQ(report["pipeline"], "fixed_sequence");
  EXPECT_EQ(report["input"]["total_gates"], 6);
  EXPECT_EQ(report["output"]["total_gates"], orq::metrics(out).total_gates);
  EXPECT_FALSE(report.contains("wall_ms"));
}

TEST_F(Cli, optimize_to_stdout_with_profile_file) {
  write("in.qasm", kRedundant);
  ASSERT_EQ(run("optimize " + path("in.qasm") + " --profile " + std::string(ORQ_SOURCE_DIR) + "/profiles/tee7.json"),
            0);
  EXPECT_EQ(read("stdout.txt").rfind("OPENQASM 2.0;", 0), 0u);
}

TEST_F(Cli, user_errors_exit_one) {
  write("bad.qasm", "OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n");
  EXPECT_EQ(run("optimize " + path("bad.qasm") + " --profile line5"), 1);
  EXPECT_NE(read("stderr.txt").find("UnknownGate"), std::string::npos);
  EXPECT_NE(read("stderr.txt").find(":3:1"), std::string::npos);

  write("in.qasm", kRedundant);
  write("p.json", R"({"name": "x", "num_qubits": 2, "coupling": [[0,1]], "native_gates": ["rz","sx","cx"],
    "default_err_1q": 1.5, "default_err_2q": 0.01})");
  EXPECT_EQ(run("optimize " + path("in.qasm") + " --profile " + path("p.json")), 1);
  EXPECT_NE(read("stderr.txt").find("profile error: default_err_1q"), std::string::npos);

  EXPECT_EQ(run("optimize " + path("missing.qasm") + " --profile line5"), 1);
  EXPECT_EQ(run("optimize " + path("in.qasm") + " --profile nowhere"), 1);
  EXPECT_EQ(run("optimize " + path("in.qasm") + " --profile line5 --pipeline qiskit"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run(""), 1);
}

TEST_F(Cli, verify_exit_codes) {
  write("a.qasm", "OPENQASM 2.0;\nqreg q[1];\nh q[0];\nh q[0];\n");
  write("b.qasm", "OPENQASM 2.0;\nqreg q[1];\nrz(2*pi) q[0];\n");
  write("c.qasm", "OPENQASM 2.0;\nqreg q[1];\nx q[0];\n");
  EXPECT_EQ(run("verify " + path("a.qasm") + " " + path("b.qasm")), 0);
  EXPECT_EQ(read("stdout.txt").rfind("equivalent", 0), 0u);
  EXPECT_EQ(run("verify " + path("a.qasm") + " " + path("c.qasm")), 2);
  EXPECT_EQ(read("stdout.txt").rfind("not equivalent", 0), 0u);
}

TEST_F(Cli, profile_show) {
  EXPECT_EQ(run("profile show tee7"), 0);
  const std::string out = read("stdout.txt");
  EXPECT_NE(out.find("qubits: 7"), std::string::npos);
  EXPECT_NE(out.find("native family: rz-sx"), std::string::npos);
  EXPECT_NE(out.find("error 1-3: 0.014999999999999999"), std::string::npos);
}

TEST_F(Cli, train_and_use_policies) {
  ASSERT_EQ(run("generate --suite redundancy --seed 3 --out " + path("corpus")), 0);
  ASSERT_EQ(run("train rewrite --corpus " + path("corpus") + " --episodes 20 --seed 1 --out " + path("rw.json")), 0)
      << read("stderr.txt");
  EXPECT_EQ(nlohmann::json::parse(read("rw.json"))["kind"], "rewrite-policy");
  ASSERT_EQ(run("train orchestrator --corpus " + path("corpus") + " --profile line5 --episodes 20 --seed 1 --out " +
                path("orch.json") + " --log " + path("log.csv") + " --rewrite-policy " + path("rw.json")),
            0)
      << read("stderr.txt");
  const auto pol = nlohmann::json::parse(read("orch.json"));
  EXPECT_EQ(pol["kind"], "orchestrator-policy");
  EXPECT_FALSE(pol["config"]["rewrite_policy"].is_null());
  const std::string log = read("log.csv");
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 21);

  write("in.qasm", kRedundant);
  EXPECT_EQ(run("optimize " + path("in.qasm") + " --profile line5 --policy " + path("orch.json")), 0);
  EXPECT_EQ(run("optimize " + path("in.qasm") + " --profile line5 --pipeline rewrite_only --policy " +
                path("rw.json")),
            0);
  EXPECT_EQ(run("train orchestrator --corpus " + path("corpus") + " --out " + path("x.json")), 1);
  EXPECT_EQ(run("train rewrite --corpus " + path("nothing") + " --out " + path("x.json")), 1);
}

TEST_F(Cli, bench_writes_tables) {
  ASSERT_EQ(run("bench --suite vqe --profile line5 --pipelines rewrite_only,resynth_only --seed 2 --out " +
                path("bench")),
            0)
      << read("stderr.txt");
  const std::string csv = read("bench/bench.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 4 * 2);
  const auto j = nlohmann::json::parse(read("bench/bench.json"));
  EXPECT_EQ(j["rows"].size(), 8u);
  EXPECT_TRUE(j["means"].contains("rewrite_only"));
}
