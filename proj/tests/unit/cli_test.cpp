// Copyright 2026 The Cargoswarm Authors
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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const char* exe = std::getenv("CARGOSWARM_CLI");
  if (!exe) return {};
  const std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return o;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) o.out.append(buf.data(), n);
  const int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!std::getenv("CARGOSWARM_CLI")) GTEST_SKIP() << "CARGOSWARM_CLI not set";
    dir_ = std::filesystem::temp_directory_path() / ("cargoswarm_cli_" + std::string(
                                                         ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path dir_;
};

TEST_F(Cli, PlanStraightLine) {
  const Outcome o = run("plan --from 0,0 --to 2,0");
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("path (0,0) (1,0) (2,0)"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("cost 2"), std::string::npos) << o.out;
}

TEST_F(Cli, AlgorithmsAgreeOnCost) {
  const std::string want = run("plan --algo dijkstra --from 0,0 --to 8,8").out;
  for (const char* algo : {"astar", "bellman-ford", "floyd-warshall"}) {
    const Outcome o = run(std::string("plan --algo ") + algo + " --from 0,0 --to 8,8");
    EXPECT_EQ(o.code, 0) << algo;
    EXPECT_NE(o.out.find("cost 16"), std::string::npos) << algo << ": " << o.out;
  }
  EXPECT_NE(want.find("cost 16"), std::string::npos);
}

TEST_F(Cli, UnreachableExitsTwo) {
  std::ofstream(dir_ / "walled.json") << R"({"terrain": {"blocked": [[1,0],[0,1]]}, "vehicles": [], "jobs": []})";
  EXPECT_EQ(run("plan --scenario " + (dir_ / "walled.json").string() + " --from 0,0 --to 3,3").code, 2);
}

TEST_F(Cli, BadArgumentsFail) {
  EXPECT_NE(run("plan --from 0,0 --to 99,0").code, 0);
  EXPECT_NE(run("plan --algo bogus --from 0,0 --to 1,0").code, 0);
  EXPECT_NE(run("frobnicate").code, 0);
}

TEST_F(Cli, DefaultsRoundTripThroughRun) {
  const Outcome d = run("defaults --out -");
  EXPECT_EQ(d.code, 0);
  EXPECT_NE(d.out.find("\"terrain\""), std::string::npos);
  EXPECT_EQ(run("defaults --out " + (dir_ / "s.json").string()).code, 0);
  EXPECT_EQ(slurp(dir_ / "s.json"), d.out);
}

TEST_F(Cli, ScanIsDeterministic) {
  ASSERT_EQ(run("scan --out " + (dir_ / "a").string()).code, 0);
  ASSERT_EQ(run("scan --out " + (dir_ / "b").string()).code, 0);
  const std::string frames = slurp(dir_ / "a" / "radar_frames.txt");
  EXPECT_EQ(frames, slurp(dir_ / "b" / "radar_frames.txt"));
  EXPECT_EQ(slurp(dir_ / "a" / "scan.svg"), slurp(dir_ / "b" / "scan.svg"));
  EXPECT_GT(std::count(frames.begin(), frames.end(), '\n'), 100);
}

TEST_F(Cli, RunWritesArtifacts) {
  const Outcome o = run("run --out " + (dir_ / "run").string());
  EXPECT_EQ(o.code, 0) << o.out;
  for (const char* f : {"telemetry.csv", "radar_frames.txt", "summary.json", "summary.txt"})
    EXPECT_TRUE(std::filesystem::exists(dir_ / "run" / f)) << f;
}

TEST_F(Cli, TickBudgetTooSmallExitsTwo) {
  EXPECT_EQ(run("run --max-ticks 100 --out " + (dir_ / "short").string()).code, 2);
}

}  // namespace
