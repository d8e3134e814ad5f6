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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ghzforge/oracle.hpp"
#include "ghzforge/protocol.hpp"
#include "test_util.hpp"

namespace ghzforge {
namespace {

using testing::kEps;
using testing::paths;

ProtocolOptions options(int d, int n, bool ff = false, OddMode mode = OddMode::SingleOutcome) {
    ProtocolOptions o;
    o.d = d;
    o.n = n;
    o.feedforward = ff;
    o.odd_mode = mode;
    return o;
}

double trace_prob(const std::vector<TraceEntry> &trace, const std::string &label) {
    for (const auto &e : trace) {
        if (e.label == label) {
            return e.probability;
        }
    }
    ADD_FAILURE() << "no trace entry " << label;
    return -1;
}

const PhotonicState *snapshot(const BackendRun &run, const std::string &label) {
    for (const auto &s : run.snapshots) {
        if (s.label == label) {
            return &s.state;
        }
    }
    return nullptr;
}

TEST(Compile, Counts) {
    const auto p24 = compile(options(2, 4));
    EXPECT_EQ(p24.epr_pair_count, 2);
    EXPECT_EQ(p24.aux_pair_count, 0);
    ASSERT_EQ(p24.junctions.size(), 1u);
    EXPECT_TRUE(p24.junctions[0].stages.empty());

    const auto p34 = compile(options(3, 4));
    EXPECT_EQ(p34.aux_pair_count, 1);
    ASSERT_EQ(p34.junctions.size(), 1u);
    ASSERT_EQ(p34.junctions[0].stages.size(), 1u);
    EXPECT_EQ(p34.junctions[0].stages[0].pair, (AuxPair{0, 2}));
    EXPECT_EQ(p34.junctions[0].left_photon, 1);
    EXPECT_EQ(p34.junctions[0].right_photon, 2);

    const auto p56 = compile(options(5, 6));
    EXPECT_EQ(p56.aux_pair_count, 8);
    EXPECT_EQ(p56.junctions.size(), 2u);
    EXPECT_FALSE(p56.odd_reduction);

    const auto p35 = compile(options(3, 5));
    EXPECT_TRUE(p35.odd_reduction);
    EXPECT_EQ(p35.signal_photons, 6);
    EXPECT_NO_THROW(p56.circuit.validate());
}

TEST(Compile, InputStateIsProductOfSources) {
    const auto plan = compile(options(3, 4));
    const auto in = plan.input_state();
    EXPECT_EQ(in.size(), 9u);
    EXPECT_NEAR(in.norm2(), 1, kEps);
    EXPECT_NEAR(in.amplitude(paths({0, 0, 2, 2}, 3)).real(), 1.0 / 3, kEps);
    const auto run = run_backend(plan, Backend::Element, false);
    const auto *snap = snapshot(run, checkpoint::kInput);
    ASSERT_NE(snap, nullptr);
    EXPECT_TRUE(approx_equal(*snap, in));
}

TEST(Compile, InvalidOptions) {
    EXPECT_GHZ_ERROR(compile(options(1, 4)), ErrorCode::InvalidParameters);
    EXPECT_GHZ_ERROR(compile(options(3, 1)), ErrorCode::InvalidParameters);
    auto bad = options(3, 4);
    bad.coeffs = std::vector<double>{1, 1, 1};
    EXPECT_GHZ_ERROR(compile(bad), ErrorCode::InvalidCoefficients);
    bad.coeffs = std::vector<double>{1, 0};
    EXPECT_GHZ_ERROR(compile(bad), ErrorCode::InvalidCoefficients);
    auto order = options(4, 4);
    order.aux_order = std::vector<AuxPair>{{0, 2}};
    EXPECT_GHZ_ERROR(compile(order), ErrorCode::InvalidAuxPair);
    order.aux_order = std::vector<AuxPair>{{1, 3}, {0, 2}};
    EXPECT_NO_THROW(compile(order));
}

TEST(Sources, EprSource) {
    const std::vector<int> a{0, 1, 2};
    const std::vector<int> b{3, 4, 5};
    const auto s = build_epr_source(3, a, b);
    EXPECT_EQ(s.size(), 3u);
    EXPECT_NEAR(s.amplitude(testing::ket({testing::h(1), testing::h(4)})).real(), 1 / std::sqrt(3.0), kEps);
    const std::vector<double> c{0.6, 0.8};
    const std::vector<int> a2{0, 1};
    const std::vector<int> b2{2, 3};
    const auto w = build_epr_source(2, c, a2, b2);
    EXPECT_NEAR(w.amplitude(testing::ket({testing::h(1), testing::h(3)})).real(), 0.8, kEps);
    EXPECT_GHZ_ERROR(build_epr_source(3, a2, b2), ErrorCode::InvalidParameters);
    EXPECT_GHZ_ERROR(build_epr_source(3, a, a), ErrorCode::PortCollision);
}

TEST(Sources, AuxSource) {
    const auto s = build_aux_source({0, 2}, {10, 11, 12, 13});
    EXPECT_EQ(s.size(), 2u);
    EXPECT_NEAR(s.amplitude(testing::ket({testing::h(10), testing::h(12)})).real(), 1 / std::sqrt(2.0), kEps);
    EXPECT_NEAR(s.amplitude(testing::ket({testing::v(11), testing::v(13)})).real(), 1 / std::sqrt(2.0), kEps);
    EXPECT_GHZ_ERROR(build_aux_source({2, 0}, {10, 11, 12, 13}), ErrorCode::InvalidAuxPair);
    EXPECT_GHZ_ERROR(build_aux_source({0, 1}, {10, 11, 12, 13}), ErrorCode::InvalidAuxPair);
    EXPECT_GHZ_ERROR(build_aux_source({0, 2}, {10, 10, 12, 13}), ErrorCode::PortCollision);
}

TEST(Tagging, ParityRule) {
    EXPECT_EQ(parity_polarization(0), Polarization::H);
    EXPECT_EQ(parity_polarization(1), Polarization::V);
    EXPECT_EQ(parity_polarization(4), Polarization::H);
    const std::vector<int> group{0, 1, 2};
    const auto s = make_state({{testing::ket({testing::h(1), testing::h(5)}), 1.0}});
    const auto t = polarization_tag(s, group, parity_polarization);
    EXPECT_NEAR(std::abs(t.amplitude(testing::ket({testing::v(1), testing::h(5)}))), 1, kEps);
}

TEST(Tagging, Conflict) {
    const std::vector<int> group{0, 1};
    const auto s = make_state({{testing::ket({testing::h(0), testing::v(0)}), 1.0}});
    EXPECT_GHZ_ERROR(polarization_tag(s, group, parity_polarization), ErrorCode::PolarizationConflict);
}

TEST(Tagging, SameParityPairs) {
    EXPECT_TRUE(same_parity_pairs(2).empty());
    EXPECT_EQ(same_parity_pairs(3), (std::vector<AuxPair>{{0, 2}}));
    EXPECT_EQ(same_parity_pairs(4), (std::vector<AuxPair>{{0, 2}, {1, 3}}));
    EXPECT_EQ(same_parity_pairs(5), (std::vector<AuxPair>{{0, 2}, {0, 4}, {2, 4}, {1, 3}}));
    for (int d = 2; d <= 30; ++d) {
        EXPECT_EQ(static_cast<std::int64_t>(same_parity_pairs(d).size()), aux_per_junction_binomial(d));
    }
}

TEST(Execute, QutritFourPhotons) {
    const auto filtered = execute(compile(options(3, 4, false)));
    EXPECT_NEAR(filtered.probability, 1.0 / 12, kEps);
    EXPECT_NEAR(filtered.prob_feedforward, 1.0 / 6, kEps);
    EXPECT_NEAR(filtered.fidelity, 1, kEps);
    EXPECT_TRUE(filtered.matches());
    const auto ff = execute(compile(options(3, 4, true)));
    EXPECT_NEAR(ff.probability, 1.0 / 6, kEps);
    EXPECT_NEAR(ff.prob_filtered, 1.0 / 12, kEps);
    EXPECT_NEAR(ff.fidelity, 1, kEps);
}

TEST(Execute, QutritStageTrace) {
    const auto r = execute(compile(options(3, 4, false)));
    EXPECT_NEAR(trace_prob(r.trace, "j1.filtered"), 5.0 / 9, kEps);
    EXPECT_NEAR(trace_prob(r.trace, "j1.aux0-2.selected"), 3.0 / 10, kEps);
    EXPECT_NEAR(trace_prob(r.trace, "j1.aux0-2.heralded"), 1.0 / 2, kEps);
    double product = 1;
    for (const auto &e : r.trace) {
        product *= e.probability;
    }
    EXPECT_NEAR(product, r.probability, kEps);
}

TEST(Execute, KnownProbabilities) {
    EXPECT_NEAR(execute(compile(options(2, 6, false))).probability, 1.0 / 4, kEps);
    EXPECT_NEAR(execute(compile(options(2, 4, true))).probability, 1.0 / 2, kEps);
    const auto r46 = execute(compile(options(4, 6, true)));
    EXPECT_NEAR(r46.probability, 1.0 / 256, kEps);
    EXPECT_NEAR(r46.fidelity, 1, kEps);
    const auto r33 = execute(compile(options(3, 3, true, OddMode::FullFourier)));
    EXPECT_NEAR(r33.probability, 1.0 / 6, kEps);
    EXPECT_NEAR(r33.fidelity, 1, kEps);
    const auto r33s = execute(compile(options(3, 3, true, OddMode::SingleOutcome)));
    EXPECT_NEAR(r33s.probability, 1.0 / 18, kEps);
    EXPECT_TRUE(r33s.matches());
}

TEST(Execute, PerStageSurvivalForSmallD) {
    for (int d = 2; d <= 4; ++d) {
        const auto r = execute(compile(options(d, 4, true)));
        EXPECT_NEAR(trace_prob(r.trace, "j1.filtered"), to_double(eta1(d)), kEps);
        const auto pairs = same_parity_pairs(d);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto label = checkpoint::aux_prefix(1, pairs[k]) + ".selected";
            EXPECT_NEAR(trace_prob(r.trace, label), to_double(eta2(d, static_cast<std::int64_t>(k + 1))), kEps)
                << label;
        }
    }
}

TEST(Execute, StageOrderDoesNotChangeOutput) {
    auto a = options(5, 4, true);
    auto b = a;
    auto order = same_parity_pairs(5);
    std::reverse(order.begin(), order.end());
    b.aux_order = order;
    const auto ra = execute(compile(a));
    const auto rb = execute(compile(b));
    EXPECT_NEAR(ra.probability, rb.probability, kEps);
    ASSERT_TRUE(ra.final_state && rb.final_state);
    EXPECT_TRUE(approx_equal(*ra.final_state, *rb.final_state));
}

TEST(Execute, BackendsAgreeAtEveryCheckpoint) {
    for (int d = 2; d <= 4; ++d) {
        for (int n : {3, 4, 5}) {
            for (bool ff : {false, true}) {
                const auto plan = compile(options(d, n, ff, ff ? OddMode::FullFourier : OddMode::SingleOutcome));
                const auto rules = run_backend(plan, Backend::Rule, ff);
                const auto elems = run_backend(plan, Backend::Element, ff);
                ASSERT_EQ(rules.trace.size(), elems.trace.size());
                for (std::size_t i = 0; i < rules.trace.size(); ++i) {
                    EXPECT_EQ(rules.trace[i].label, elems.trace[i].label);
                    EXPECT_NEAR(rules.trace[i].probability, elems.trace[i].probability, 1e-9);
                }
                for (const auto &snap : rules.snapshots) {
                    const auto *other = snapshot(elems, snap.label);
                    ASSERT_NE(other, nullptr) << snap.label;
                    EXPECT_TRUE(approx_equal(normalize(snap.state), normalize(*other), 1e-8))
                        << "d=" << d << " n=" << n << " " << snap.label;
                }
            }
        }
    }
}

TEST(Execute, NonUniformCoefficientsHaveNoPrediction) {
    auto o = options(2, 4, true);
    o.coeffs = std::vector<double>{0.6, 0.8};
    const auto r = execute(compile(o));
    EXPECT_FALSE(r.uniform_coefficients);
    EXPECT_FALSE(r.predicted.has_value());
    EXPECT_TRUE(r.probability_ok());
    EXPECT_GT(r.probability, 0);
    EXPECT_LT(r.fidelity, 1 - 1e-3);
}

TEST(Execute, FaultInjectionIsDetected) {
    auto o = options(3, 4, false);
    o.pbs_reflected = Polarization::H;
    // A flipped PBS convention changes the filtered state; the feedforward
    // run then sees inconsistent heralds and refuses to combine them.
    const auto plan = compile(o);
    const auto nominal = run_backend(compile(options(3, 4, false)), Backend::Element, false);
    const auto faulty = run_backend(plan, Backend::Element, false);
    const auto *a = snapshot(nominal, checkpoint::junction_filtered(1));
    const auto *b = snapshot(faulty, checkpoint::junction_filtered(1));
    ASSERT_TRUE(a && b);
    EXPECT_FALSE(approx_equal(*a, *b));
    EXPECT_GHZ_ERROR(execute(plan, Backend::Element), ErrorCode::IncoherentBranches);
}

TEST(Execute, OracleRejectsLargeCases) {
    EXPECT_GHZ_ERROR(execute(compile(options(5, 4)), Backend::Oracle), ErrorCode::OracleTooLarge);
    EXPECT_GHZ_ERROR(execute(compile(options(3, 8)), Backend::Oracle), ErrorCode::OracleTooLarge);
}

TEST(ReduceToOdd, SingleAndFourier) {
    const auto ghz = ghz_reference(3, 4);
    const auto single = reduce_to_odd(ghz, 3, OddMode::SingleOutcome);
    EXPECT_EQ(single.n, 3);
    EXPECT_NEAR(single.probability, 1.0 / 3, kEps);
    EXPECT_NEAR(single.fidelity, 1, kEps);
    const auto full = reduce_to_odd(ghz, 3, OddMode::FullFourier);
    EXPECT_NEAR(full.probability, 1, kEps);
    EXPECT_NEAR(full.fidelity, 1, kEps);
    EXPECT_TRUE(full.matches());
    for (int d = 2; d <= 6; ++d) {
        const auto r = reduce_to_odd(ghz_reference(d, 4), d, OddMode::FullFourier);
        EXPECT_NEAR(r.fidelity, 1, kEps) << d;
    }
}

TEST(ReduceToOdd, Errors) {
    EXPECT_GHZ_ERROR(reduce_to_odd(ghz_reference(3, 2), 3, OddMode::SingleOutcome), ErrorCode::InvalidParameters);
    EXPECT_GHZ_ERROR(reduce_to_odd(ghz_reference(3, 4), 1, OddMode::SingleOutcome), ErrorCode::InvalidParameters);
}

}  // namespace
}  // namespace ghzforge
