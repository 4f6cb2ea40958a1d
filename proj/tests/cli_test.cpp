// Copyright 2026 The conga Authors
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

#include "conga/cli.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "gtest/gtest.h"
#include "testing/oracles.hpp"

namespace conga {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return testing::fixture_path(name); }
std::string data(const std::string& name) {
  return std::string(CONGA_TEST_DATA_DIR) + "/" + name;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "conga_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::filesystem::path write_scratch(const std::string& name, const std::string& text) {
  const auto path = scratch(name);
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

TEST(CliTest, Validate) {
  const auto r = run_cli({"validate", fixture("braess.game")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "OK: 4 nodes, 5 edges, 3 source-sink paths\n");

  const auto m = run_cli({"--format", "machine", "validate", fixture("braess.game")});
  const auto file = parse_report_file(m.out);
  EXPECT_EQ(file.command, "validate");
  EXPECT_EQ(file.report.at("paths"), 3);
}

TEST(CliTest, GlobalFlagsMayFollowSubcommand) {
  const auto before = run_cli({"--format", "machine", "braess", fixture("braess.game")});
  const auto after = run_cli({"braess", fixture("braess.game"), "--format", "machine"});
  EXPECT_EQ(after.code, 0) << after.err;
  EXPECT_EQ(before.out, after.out);
  const auto poa = run_cli({"poa", fixture("pigou.game"), "--regime", "atomic"});
  EXPECT_EQ(poa.code, 0);
  EXPECT_NE(poa.out.find("Price of anarchy (atomic)"), std::string::npos);
}

TEST(CliTest, Paths) {
  const auto r = run_cli({"paths", fixture("braess.game")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "3 source-sink paths\n"
            "  A->B->C->D [AB BC CD]\n"
            "  A->B->D [AB BD]\n"
            "  A->C->D [AC CD]\n");
  const auto capped = run_cli({"--path-cap", "2", "paths", fixture("braess.game")});
  EXPECT_EQ(capped.code, 1);
  EXPECT_NE(capped.err.find("PathExplosion"), std::string::npos);
}

TEST(CliTest, WardropText) {
  const auto r = run_cli({"wardrop", fixture("fig1.game")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("min path latency:      0.5000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("AB  0.5000"), std::string::npos) << r.out;
}

TEST(CliTest, MachineReportsDecode) {
  const auto doc = load_game_file(fixture("braess.game"));
  const auto w = run_cli({"--format", "machine", "wardrop", fixture("braess.game")});
  ASSERT_EQ(w.code, 0) << w.err;
  const auto wr = wardrop_report_from_json(parse_report_file(w.out).report, doc.graph);
  EXPECT_NEAR(wr.min_path_latency, 2.0, 1e-9);

  const auto o = run_cli({"--format", "machine", "optimum", fixture("braess.game")});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto orep = wardrop_report_from_json(parse_report_file(o.out).report, doc.graph);
  EXPECT_EQ(orep.objective_kind, Objective::kSystemCost);
  EXPECT_NEAR(orep.system_cost, 1.5, 1e-6);

  const auto n = run_cli({"--format", "machine", "nash", fixture("fig1.game")});
  ASSERT_EQ(n.code, 0) << n.err;
  const Json loads = parse_report_file(n.out).report.at("loads");
  EXPECT_EQ(loads.at("AB"), 1);
  EXPECT_EQ(loads.at("AC"), 1);

  const auto p = run_cli({"--format", "machine", "poa", fixture("pigou.game")});
  ASSERT_EQ(p.code, 0) << p.err;
  const auto poa = poa_report_from_json(parse_report_file(p.out).report);
  EXPECT_NEAR(poa.ratio, 4.0 / 3.0, 1e-6);
  EXPECT_EQ(parse_report_file(p.out).config.at("regime"), "nonatomic");

  const auto pa =
      run_cli({"--format", "machine", "poa", "--regime", "atomic", fixture("pigou.game")});
  ASSERT_EQ(pa.code, 0) << pa.err;
  EXPECT_EQ(poa_report_from_json(parse_report_file(pa.out).report).regime, Regime::kAtomic);

  const auto b = run_cli({"--format", "machine", "braess", fixture("braess.game")});
  ASSERT_EQ(b.code, 0) << b.err;
  const auto br = braess_report_from_json(parse_report_file(b.out).report);
  EXPECT_EQ(br.entries.front().label, "BC");
  EXPECT_NEAR(br.entries.front().improvement, 0.5, 1e-6);
}

TEST(CliTest, FileSpeedsApply) {
  const auto doc = load_game_file(fixture("asymmetric.game"));
  const auto w = run_cli({"--format", "machine", "wardrop", fixture("asymmetric.game")});
  ASSERT_EQ(w.code, 0) << w.err;
  const auto r = wardrop_report_from_json(parse_report_file(w.out).report, doc.graph);
  EXPECT_NEAR(r.flow[*doc.graph.find_edge("AB")], 2.0 / 3.0, 1e-6);

  const auto tail = run_cli(
      {"--format", "machine", "--speed-at", "tail", "wardrop", fixture("asymmetric.game")});
  const auto t = wardrop_report_from_json(parse_report_file(tail.out).report, doc.graph);
  EXPECT_NEAR(t.flow[*doc.graph.find_edge("AB")], 0.5, 1e-6);
}

TEST(CliTest, Scenarios) {
  const auto r = run_cli({"scenarios", fixture("asymmetric.game")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Scenario comparison (3 variants)"), std::string::npos);
  EXPECT_NE(r.out.find("uniform: latency 0.5000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("file: latency 0.3333"), std::string::npos) << r.out;
  // slowB halves B's speed: AB becomes 2x, so AB carries 1/3 at latency 2/3.
  EXPECT_NE(r.out.find("slowB: latency 0.6667"), std::string::npos) << r.out;
}

TEST(CliTest, Export) {
  const auto plain = run_cli({"export", fixture("fig1.game")});
  EXPECT_EQ(plain.code, 0);
  EXPECT_EQ(plain.out.rfind("digraph conga {", 0), 0u);
  const auto flow = run_cli({"export", "--with-flow", "wardrop", fixture("fig1.game")});
  EXPECT_NE(flow.out.find("AB\\nflow=0.5000\\nlatency=0.5000"), std::string::npos)
      << flow.out;
  const auto nash = run_cli({"export", "--with-flow", "nash", fixture("fig1.game")});
  EXPECT_NE(nash.out.find("AB\\nflow=1.0000"), std::string::npos) << nash.out;
}

TEST(CliTest, OutputFile) {
  const auto path = scratch("out.json");
  std::filesystem::remove(path);
  const auto r = run_cli(
      {"--format", "machine", "--output", path.string(), "wardrop", fixture("pigou.game")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(parse_report_file(testing::read_file(path.string())).command, "wardrop");
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(run_cli({}).code, 3);
  EXPECT_EQ(run_cli({"frobnicate", fixture("fig1.game")}).code, 3);
  EXPECT_EQ(run_cli({"--format", "xml", "validate", fixture("fig1.game")}).code, 3);
  EXPECT_EQ(run_cli({"validate", "/nonexistent.game"}).code, 3);
  EXPECT_EQ(run_cli({"--help"}).code, 0);

  const auto negative = run_cli({"validate", data("negative.game")});
  EXPECT_EQ(negative.code, 3);
  EXPECT_NE(negative.err.find("edge e2"), std::string::npos);
  EXPECT_NE(negative.err.find("line 5"), std::string::npos) << negative.err;

  const auto cyclic = run_cli({"validate", data("cyclic.game")});
  EXPECT_EQ(cyclic.code, 1);
  EXPECT_NE(cyclic.err.find("CycleDetected"), std::string::npos);
  EXPECT_EQ(run_cli({"validate", data("isolated.game")}).code, 1);

  const auto no_players = write_scratch("noplayers.game", "conga/1\nsource A\nsink B\n"
                                                          "edge e A B 1\ndemand 1\n");
  EXPECT_EQ(run_cli({"nash", no_players.string()}).code, 3);
  EXPECT_EQ(run_cli({"wardrop", no_players.string()}).code, 0);

  const auto slow = run_cli({"--step-rule", "harmonic", "--max-iters", "20", "wardrop",
                             fixture("fig1.game")});
  EXPECT_EQ(slow.code, 2);
  EXPECT_NE(slow.out.find("converged: no"), std::string::npos);
  EXPECT_NE(slow.err.find("did not converge"), std::string::npos);

  // Three players on a chain never need to move; one move limit on Braess
  // with two players does.
  EXPECT_EQ(run_cli({"nash", data("chain.game")}).code, 0);
  EXPECT_EQ(run_cli({"--max-iters", "1", "nash", fixture("braess.game")}).code, 2);
}

TEST(CliTest, MachineOutputIsDeterministic) {
  for (const char* command : {"wardrop", "optimum", "nash", "poa", "braess", "scenarios"}) {
    const auto a = run_cli({"--format", "machine", command, fixture("asymmetric.game")});
    const auto b = run_cli({"--format", "machine", command, fixture("asymmetric.game")});
    EXPECT_EQ(a.code, 0) << command << a.err;
    EXPECT_EQ(a.out, b.out) << command;
  }
}

int run_binary(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd =
      std::string(CONGA_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliBinaryTest, ExitStatusAndByteIdenticalOutput) {
  const auto a = scratch("bin_a.json");
  const auto b = scratch("bin_b.json");
  const std::string args = "--format machine braess " + fixture("braess.game");
  EXPECT_EQ(run_binary(args, a), 0);
  EXPECT_EQ(run_binary(args, b), 0);
  EXPECT_EQ(testing::read_file(a.string()), testing::read_file(b.string()));
  EXPECT_EQ(run_binary("validate " + data("cyclic.game"), a), 1);
  EXPECT_EQ(run_binary("--max-iters 1 nash " + fixture("braess.game"), a), 2);
  EXPECT_EQ(run_binary("validate " + data("negative.game"), a), 3);
}

struct GoldenCase {
  const char* golden;
  const char* command;
  const char* fixture;
};

void PrintTo(const GoldenCase& c, std::ostream* os) { *os << c.golden; }

class GoldenTest : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(GoldenTest, MatchesWithinTolerance) {
  const auto& c = GetParam();
  const auto r = run_cli({"--format", "machine", c.command, fixture(c.fixture)});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json want =
      Json::parse(testing::read_file(std::string(CONGA_GOLDEN_DIR) + "/" + c.golden));
  const auto mismatch = testing::json_mismatch(want, Json::parse(r.out), 1e-6);
  EXPECT_FALSE(mismatch) << *mismatch;
}

INSTANTIATE_TEST_SUITE_P(
    Fixtures, GoldenTest,
    ::testing::Values(GoldenCase{"fig1_wardrop.json", "wardrop", "fig1.game"},
                      GoldenCase{"braess_wardrop.json", "wardrop", "braess.game"},
                      GoldenCase{"braess_braess.json", "braess", "braess.game"},
                      GoldenCase{"pigou_wardrop.json", "wardrop", "pigou.game"},
                      GoldenCase{"pigou_poa.json", "poa", "pigou.game"},
                      GoldenCase{"asymmetric_wardrop.json", "wardrop", "asymmetric.game"},
                      GoldenCase{"asymmetric_scenarios.json", "scenarios",
                                 "asymmetric.game"}),
    [](const auto& info) {
      std::string name = info.param.golden;
      return name.substr(0, name.find('.'));
    });

}  // namespace
}  // namespace conga
