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

#include <numbers>
#include <random>

#include "ghzforge/serialize.hpp"
#include "test_util.hpp"

namespace ghzforge {
namespace {

using testing::h;
using testing::ket;
using testing::v;

TEST(StateJson, RoundTrip) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto s = testing::random_state(rng, 6, 3, 5);
        const auto back = state_from_json(Json::parse(state_to_json(s).dump()));
        EXPECT_TRUE(approx_equal(s, back));
    }
}

TEST(StateJson, Format) {
    const auto s = make_state({{ket({h(0), h(0), v(2)}), 1.0}});
    const auto j = state_to_json(s);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["modes"][0], Json::parse(R"([0, "H", 2])"));
    EXPECT_EQ(j[0]["re"], 1.0);
}

TEST(StateJson, Errors) {
    EXPECT_GHZ_ERROR(state_from_json(Json::parse("{}")), ErrorCode::ParseError);
    EXPECT_GHZ_ERROR(state_from_json(Json::parse(R"([{"modes": [[0, "X", 1]], "re": 1, "im": 0}])")),
                     ErrorCode::ParseError);
    EXPECT_GHZ_ERROR(state_from_json(Json::parse(R"([{"modes": [[0, "H"]], "re": 1, "im": 0}])")),
                     ErrorCode::ParseError);
    EXPECT_GHZ_ERROR(state_from_json(Json::parse(R"([{"modes": [[0, "H", 1]], "im": 0}])")), ErrorCode::ParseError);
    EXPECT_GHZ_ERROR(state_from_json(Json::parse(R"([{"modes": [[0, "H", 1]], "re": "x", "im": 0}])")),
                     ErrorCode::ParseError);
}

TEST(CircuitJson, CompiledPlanRoundTrips) {
    for (auto [d, n] : {std::pair{2, 4}, {3, 4}, {3, 5}, {4, 6}}) {
        ProtocolOptions o;
        o.d = d;
        o.n = n;
        o.feedforward = true;
        o.odd_mode = OddMode::FullFourier;
        const auto plan = compile(o);
        const auto j = circuit_to_json(plan.circuit);
        const auto back = circuit_from_json(Json::parse(j.dump()));
        EXPECT_EQ(back.steps.size(), plan.circuit.steps.size());
        EXPECT_EQ(circuit_to_json(back), j);
        const auto a = run_circuit(PhotonicState::vacuum(), plan.circuit);
        const auto b = run_circuit(PhotonicState::vacuum(), back);
        ASSERT_TRUE(a.state && b.state);
        EXPECT_TRUE(approx_equal(*a.state, *b.state));
        EXPECT_NEAR(a.total_probability(), b.total_probability(), 1e-12);
    }
}

TEST(CircuitJson, HandWritten) {
    const auto c = circuit_from_json(Json::parse(R"([
        {"elem": "source", "state": [{"modes": [[0, "H", 1]], "re": 1, "im": 0}]},
        {"elem": "hwp", "port": 0, "theta": 0.39269908169872414},
        {"elem": "pbs", "a": 0, "b": 1, "label": "split"}
    ])"));
    EXPECT_EQ(c.port_count, 2);
    const auto r = run_circuit(PhotonicState::vacuum(), c);
    ASSERT_TRUE(r.state);
    EXPECT_NEAR(std::norm(r.state->amplitude(ket({h(0)}))), 0.5, 1e-12);
    EXPECT_NEAR(std::norm(r.state->amplitude(ket({v(1)}))), 0.5, 1e-12);
    ASSERT_EQ(r.snapshots.size(), 1u);
    EXPECT_EQ(r.snapshots[0].label, "split");
}

TEST(CircuitJson, Errors) {
    EXPECT_GHZ_ERROR(circuit_from_json(Json::parse("{}")), ErrorCode::ParseError);
    EXPECT_GHZ_ERROR(circuit_from_json(Json::parse(R"([{"elem": "mirror", "port": 0}])")), ErrorCode::ParseError);
    EXPECT_GHZ_ERROR(circuit_from_json(Json::parse(R"([{"elem": "hwp", "port": 0}])")), ErrorCode::ParseError);
    EXPECT_GHZ_ERROR(circuit_from_json(Json::parse(R"([{"elem": "pbs", "a": 1, "b": 1}])")), ErrorCode::InvalidCircuit);
}

TEST(ProbabilityString, Fractions) {
    EXPECT_EQ(probability_string(1.0 / 12), "1/12");
    EXPECT_EQ(probability_string(0.3), "3/10");
    EXPECT_EQ(probability_string(1.0), "1");
    EXPECT_EQ(probability_string(0.0), "0");
    EXPECT_EQ(probability_string(1.0 / 65536), "1/65536");
}

TEST(ReportJson, Fields) {
    ProtocolOptions o;
    o.d = 3;
    o.n = 4;
    const auto r = execute(compile(o));
    const auto j = report_to_json(r);
    EXPECT_EQ(j["d"], 3);
    EXPECT_EQ(j["backend"], "rule");
    EXPECT_EQ(j["probability_exact"], "1/12");
    EXPECT_EQ(j["predicted_prob_exact"], "1/12");
    EXPECT_EQ(j["match"], true);
    EXPECT_EQ(j["trace"][0]["label"], "j1.filtered");
    EXPECT_EQ(j["trace"][0]["prob_exact"], "5/9");
    EXPECT_TRUE(approx_equal(state_from_json(j["final_state"]), *r.final_state));
}

TEST(SummaryCsv, Row) {
    EXPECT_EQ(summary_csv_header(), "d,n,epr_count,aux_count,eta1,predicted_prob_ff,predicted_prob_filtered");
    EXPECT_EQ(summary_csv_row(summarize(3, 4)), "3,4,2,1,5/9,1/6,1/12");
}

}  // namespace
}  // namespace ghzforge
