// Copyright 2026 The ghzforge Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace ghzforge::cli {
namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args, std::optional<std::string> eps = std::nullopt) {
    std::ostringstream out;
    std::ostringstream err;
    Result r;
    r.code = run_cli(args, out, err, eps);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::filesystem::path temp_file(const std::string &name, const std::string &content) {
    const auto path = std::filesystem::temp_directory_path() / ("ghzforge_test_" + name);
    std::ofstream(path) << content;
    return path;
}

TEST(Cli, PlanJson) {
    const auto r = run({"plan", "--d", "3", "--n", "4"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["aux_count"], 1);
    EXPECT_EQ(j["predicted_prob_ff"], "1/6");
    EXPECT_EQ(j["plan"]["junctions"].size(), 1u);
}

TEST(Cli, PlanCsvUsesCrlf) {
    const auto r = run({"plan", "--d", "2", "--n", "8", "--format", "csv"});
    ASSERT_EQ(r.code, kOk);
    EXPECT_EQ(r.out, "d,n,epr_count,aux_count,eta1,predicted_prob_ff,predicted_prob_filtered\r\n"
                     "2,8,4,0,1/2,1/8,1/8\r\n");
}

TEST(Cli, RunMatches) {
    for (const std::string backend : {"rule", "element", "oracle"}) {
        const auto r = run({"run", "--d", "3", "--n", "4", "--feedforward", "--backend", backend});
        ASSERT_EQ(r.code, kOk) << backend << r.err;
        const auto j = nlohmann::json::parse(r.out);
        EXPECT_EQ(j["probability_exact"], "1/6");
        EXPECT_EQ(j["match"], true);
    }
}

TEST(Cli, RunPretty) {
    const auto r = run({"run", "--d", "3", "--n", "4", "--format", "pretty"});
    EXPECT_EQ(r.code, kOk);
    EXPECT_NE(r.out.find("1/12"), std::string::npos);
}

TEST(Cli, NonUniformRunStillSucceedsWithoutPrediction) {
    const auto r = run({"run", "--d", "2", "--n", "4", "--coeffs", "0.6,0.8"});
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["predicted_prob"].is_null());
    EXPECT_EQ(r.code, kMismatch);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({"plan", "--d", "1", "--n", "4"}).code, kUsage);
    EXPECT_EQ(run({"plan", "--d", "x"}).code, kUsage);
    EXPECT_EQ(run({}).code, kUsage);
    EXPECT_EQ(run({"frobnicate"}).code, kUsage);
    EXPECT_EQ(run({"run", "--d", "3", "--n", "4", "--coeffs", "1,1,1"}).code, kUsage);
    EXPECT_EQ(run({"run", "--d", "3", "--n", "4", "--backend", "quantum"}).code, kUsage);
    EXPECT_EQ(run({"plan", "--d", "3", "--n", "4"}, "not-a-number").code, kUsage);
    EXPECT_EQ(run({"plan", "--d", "3", "--n", "4"}, "-1").code, kUsage);
}

TEST(Cli, RuntimeErrors) {
    EXPECT_EQ(run({"run", "--d", "6", "--n", "4", "--backend", "oracle"}).code, kRuntime);
    EXPECT_EQ(run({"run", "--circuit", "/nonexistent/circuit.json"}).code, kRuntime);
}

TEST(Cli, Help) {
    EXPECT_EQ(run({"--help"}).code, kOk);
}

TEST(Cli, Sweep) {
    const auto r = run({"sweep", "--d", "2..3", "--n", "2..5"});
    ASSERT_EQ(r.code, kOk) << r.err;
    std::size_t lines = 0;
    for (std::size_t pos = 0; (pos = r.out.find("\r\n", pos)) != std::string::npos; pos += 2) {
        ++lines;
    }
    EXPECT_EQ(lines, 9u);
    const auto empty = run({"sweep", "--d", "3..2", "--n", "4"});
    EXPECT_EQ(empty.code, kOk);
    EXPECT_EQ(std::count(empty.out.begin(), empty.out.end(), '\n'), 1);
}

TEST(Cli, SweepSkipsOversizeCells) {
    const auto r = run({"sweep", "--d", "9", "--n", "4", "--format", "json"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["status"], "skipped");
}

TEST(Cli, Verify) {
    EXPECT_EQ(run({"verify"}).code, kOk);
    const auto broken = run({"verify", "--pbs-reflect", "H", "--json"});
    EXPECT_EQ(broken.code, kMismatch);
    const auto j = nlohmann::json::parse(broken.out);
    EXPECT_EQ(j["passed"], false);
    EXPECT_FALSE(j["failed"].empty());
}

TEST(Cli, ReduceOdd) {
    const auto r = run({"reduce-odd", "--d", "3", "--n", "4", "--odd-mode", "fourier"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["n"], 3);
    EXPECT_EQ(j["probability_exact"], "1");
    EXPECT_EQ(run({"reduce-odd", "--d", "3", "--n", "3"}).code, kUsage);
}

TEST(Cli, ReduceOddFromStateFile) {
    const auto ghz = run({"run", "--d", "2", "--n", "4", "--feedforward"});
    const auto state = nlohmann::json::parse(ghz.out)["final_state"];
    const auto path = temp_file("state.json", state.dump());
    const auto r = run({"reduce-odd", "--d", "2", "--state", path.string()});
    EXPECT_EQ(r.code, kOk) << r.err;
    std::filesystem::remove(path);
}

TEST(Cli, RunCircuitFile) {
    const auto plan = run({"plan", "--d", "3", "--n", "4", "--feedforward"});
    const auto circuit = nlohmann::json::parse(plan.out)["plan"]["circuit"];
    const auto path = temp_file("circuit.json", circuit.dump());
    const auto r = run({"run", "--d", "3", "--n", "4", "--circuit", path.string()});
    EXPECT_EQ(r.code, kOk) << r.err;
    const auto bad = temp_file("bad.json", "[{\"elem\": \"pbs\"");
    EXPECT_EQ(run({"run", "--circuit", bad.string()}).code, kUsage);
    std::filesystem::remove(path);
    std::filesystem::remove(bad);
}

TEST(Cli, OutFile) {
    const auto path = std::filesystem::temp_directory_path() / "ghzforge_test_out.csv";
    const auto r = run({"plan", "--d", "3", "--n", "4", "--format", "csv", "--out", path.string()});
    EXPECT_EQ(r.code, kOk);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("d,n,", 0), 0u);
    std::filesystem::remove(path);
}

TEST(Cli, RangeParsing) {
    EXPECT_EQ(parse_range("2..5").lo, 2);
    EXPECT_EQ(parse_range("2..5").hi, 5);
    EXPECT_EQ(parse_range("4").hi, 4);
    EXPECT_THROW(parse_range("a..b"), std::exception);
    EXPECT_EQ(parse_coeffs("0.6,0.8").size(), 2u);
}

}  // namespace
}  // namespace ghzforge::cli
