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

#include "ghzforge/measurement.hpp"
#include "ghzforge/protocol.hpp"
#include "test_util.hpp"

namespace ghzforge {
namespace {

using testing::h;
using testing::kEps;
using testing::ket;
using testing::v;

std::vector<int> photon_ports(int photon, int d) {
    std::vector<int> out;
    for (int j = 0; j < d; ++j) {
        out.push_back(path_port(photon, j, d));
    }
    return out;
}

const Outcome &find(const OutcomeDistribution &dist, const std::string &label) {
    for (const auto &o : dist) {
        if (o.label == label) {
            return o;
        }
    }
    throw std::runtime_error("missing outcome " + label);
}

/// |0000>+|1111>+|2222> +/-... pattern with a sign on the path-2 branch.
PhotonicState signed_ghz(double sign) {
    std::vector<Ket> kets;
    const double a = 1 / std::sqrt(3.0);
    for (int i = 0; i < 3; ++i) {
        kets.push_back({testing::paths({i, i, i, i}, 3), i == 2 ? sign * a : a});
    }
    return make_state(kets);
}

TEST(Coincidence, KeepsOnePhotonPerGroup) {
    const double a = 0.5;
    const auto s = make_state({{ket({h(0), h(1)}), a}, {ket({h(0), v(0)}), a}, {ket({v(1), h(1)}), a}, {ket({h(0), v(1)}), a}});
    const auto sel = postselect_coincidence(s, {{{0}, {1}}});
    ASSERT_TRUE(sel.state);
    EXPECT_NEAR(sel.probability, 0.5, kEps);
    EXPECT_EQ(sel.state->size(), 2u);
    EXPECT_NEAR(sel.state->branch_prob(), 0.5, kEps);
    // Kept amplitudes are not renormalized.
    EXPECT_NEAR(sel.state->amplitude(ket({h(0), h(1)})).real(), a, kEps);
}

TEST(Coincidence, TriviallySatisfied) {
    const auto s = ghz_reference(2, 2);
    const auto sel = postselect_coincidence(s, {{{0, 1}, {2, 3}}});
    EXPECT_NEAR(sel.probability, 1, kEps);
    EXPECT_TRUE(approx_equal(*sel.state, s));
}

TEST(Coincidence, ZeroSurvivorsIsAnOutcome) {
    const auto sel = postselect_coincidence(make_state({{ket({h(0), h(0)}), 1.0}}), {{{0}, {1}}});
    EXPECT_FALSE(sel.state);
    EXPECT_EQ(sel.probability, 0);
}

TEST(Coincidence, PatternValidation) {
    const auto s = ghz_reference(2, 2);
    EXPECT_GHZ_ERROR(postselect_coincidence(s, {{}}), ErrorCode::InvalidParameters);
    EXPECT_GHZ_ERROR(postselect_coincidence(s, {{{0}, {0, 1}}}), ErrorCode::InvalidParameters);
}

TEST(PolarizationPair, ProductStateIsDeterministic) {
    const auto s = make_state({{ket({h(0), h(1), h(7)}), 1.0}});
    const auto dist = project_polarization_pair(s, 0, 1);
    EXPECT_NEAR(find(dist, "HH").probability, 1, kEps);
    EXPECT_NEAR(find(dist, "VV").probability, 0, kEps);
    EXPECT_TRUE(approx_equal(*find(dist, "HH").state, make_state({{ket({h(7)}), 1.0}})));
}

TEST(PolarizationPair, AntiCorrelatedPair) {
    const double a = 1 / std::numbers::sqrt2;
    const auto dist = project_polarization_pair(make_state({{ket({h(0), v(1)}), a}, {ket({v(0), h(1)}), a}}), 0, 1);
    EXPECT_NEAR(find(dist, "HV").probability, 0.5, kEps);
    EXPECT_NEAR(find(dist, "VH").probability, 0.5, kEps);
    EXPECT_NEAR(find(dist, "HH").probability, 0, kEps);
}

TEST(PolarizationPair, RequiresOnePhotonPerPort) {
    EXPECT_GHZ_ERROR(project_polarization_pair(make_state({{ket({h(0), h(0)}), 1.0}}), 0, 1),
                     ErrorCode::NotSingleOccupancy);
}

TEST(PolarizationPair, ErasedWhichPathState) {
    // Signal photons in path i with aux analysis amplitudes +1/2 each, path 2
    // with the HV/VH minus signs.
    std::vector<Ket> kets;
    for (int i = 0; i < 3; ++i) {
        for (Polarization px : {Polarization::H, Polarization::V}) {
            for (Polarization py : {Polarization::H, Polarization::V}) {
                const auto signal = testing::paths({i, i, i, i}, 3);
                std::vector<Occupation> occ(signal.occupations().begin(), signal.occupations().end());
                occ.push_back({{20, px}, 1});
                occ.push_back({{21, py}, 1});
                const double sign = (i == 2 && px != py) ? -1 : 1;
                kets.push_back({FockTerm::from_occupations(occ), sign * 0.5 / std::sqrt(3.0)});
            }
        }
    }
    const auto dist = project_polarization_pair(make_state(kets), 20, 21);
    for (const auto &o : dist) {
        EXPECT_NEAR(o.probability, 0.25, kEps) << o.label;
        const bool same = o.label == "HH" || o.label == "VV";
        EXPECT_NEAR(fidelity(o.state, ghz_reference(3, 4)), same ? 1.0 : 1.0 / 9, kEps) << o.label;
    }
}

TEST(Fourier, GhzOutcomesAreUniform) {
    const auto dist = fourier_measure_path(ghz_reference(3, 4), photon_ports(0, 3));
    ASSERT_EQ(dist.size(), 3u);
    for (const auto &o : dist) {
        EXPECT_NEAR(o.probability, 1.0 / 3, kEps);
    }
    const auto zero = relabel_ports(*find(dist, "0").state, [](int p) { return p - 3; });
    EXPECT_NEAR(fidelity(zero, ghz_reference(3, 3)), 1, kEps);
}

TEST(Fourier, BellPairHadamardBasis) {
    const auto dist = fourier_measure_path(ghz_reference(2, 2), photon_ports(0, 2));
    const double a = 1 / std::numbers::sqrt2;
    const auto plus = make_state({{ket({h(2)}), a}, {ket({h(3)}), a}});
    const auto minus = make_state({{ket({h(2)}), a}, {ket({h(3)}), -a}});
    EXPECT_NEAR(find(dist, "0").probability, 0.5, kEps);
    EXPECT_NEAR(find(dist, "1").probability, 0.5, kEps);
    EXPECT_TRUE(approx_equal(*find(dist, "0").state, plus));
    EXPECT_TRUE(approx_equal(*find(dist, "1").state, minus));
}

TEST(Fourier, OutcomeOneCorrectedRestoresGhz) {
    const auto dist = fourier_measure_path(ghz_reference(3, 4), photon_ports(0, 3));
    const auto &o = find(dist, "1");
    // Outcome k leaves exp(-2 pi i j k / d) on branch j.
    const auto branch_amp = o.state->amplitude(testing::paths({2, 2, 2, 2}, 3).without(h(path_port(0, 2, 3))));
    EXPECT_NEAR(std::arg(branch_amp), std::arg(std::polar(1.0, -4 * std::numbers::pi / 3)), kEps);
    const auto fixed = feedforward(*o.state, "1", fourier_phase_rule(photon_ports(1, 3)));
    EXPECT_NEAR(fidelity(relabel_ports(fixed, [](int p) { return p - 3; }), ghz_reference(3, 3)), 1, kEps);
}

TEST(Fourier, OutcomeTwoPhasesOnEachPath) {
    const auto rule = fourier_phase_rule(photon_ports(1, 3));
    const auto &fix = rule.at("2");
    ASSERT_EQ(fix.size(), 2u);
    EXPECT_NEAR(std::get<PhaseShift>(fix[0]).phi, 4 * std::numbers::pi / 3, kEps);
    EXPECT_NEAR(std::get<PhaseShift>(fix[1]).phi, 8 * std::numbers::pi / 3, kEps);
    const auto dist = fourier_measure_path(ghz_reference(3, 4), photon_ports(0, 3));
    const auto fixed = feedforward(*find(dist, "2").state, "2", rule);
    EXPECT_NEAR(fidelity(relabel_ports(fixed, [](int p) { return p - 3; }), ghz_reference(3, 3)), 1, kEps);
}

TEST(Fourier, MixedPolarizationRejected) {
    const double a = 1 / std::numbers::sqrt2;
    const auto s = make_state({{ket({h(0), h(2)}), a}, {ket({v(1), h(3)}), a}});
    EXPECT_GHZ_ERROR(fourier_measure_path(s, std::vector<int>{0, 1}), ErrorCode::PolarizationConflict);
}

TEST(Feedforward, PasRule) {
    const auto rule = pas_phase_rule(5);
    const auto flipped = signed_ghz(-1);
    EXPECT_TRUE(approx_equal(feedforward(ghz_reference(3, 4), "HH", rule), ghz_reference(3, 4)));
    EXPECT_NEAR(fidelity(feedforward(flipped, "HV", rule), ghz_reference(3, 4)), 1, kEps);
    EXPECT_GHZ_ERROR(feedforward(flipped, "XX", rule), ErrorCode::MissingCorrection);
}

TEST(Herald, CombinesCoherentBranches) {
    const auto good = scaled(signed_ghz(1), 0.5);
    const auto bad = scaled(signed_ghz(-1), 0.5);
    const std::vector<Branch> branches{{"HH", 0.25, good}, {"HV", 0.25, bad}, {"VH", 0.25, bad}, {"VV", 0.25, good}};
    const auto filtered = herald(branches, {"HH", "VV"}, {}, 1.0);
    EXPECT_NEAR(filtered.probability, 0.5, kEps);
    EXPECT_NEAR(filtered.state->norm2(), 0.5, kEps);
    const auto corrected = herald(branches, {"HH", "VV"}, pas_phase_rule(5), 1.0);
    EXPECT_NEAR(corrected.probability, 1, kEps);
    EXPECT_NEAR(fidelity(corrected.state, ghz_reference(3, 4)), 1, kEps);
    EXPECT_GHZ_ERROR(herald(branches, {"HH", "HV"}, {}, 1.0), ErrorCode::IncoherentBranches);
}

TEST(Herald, NothingAcceptedIsEmpty) {
    const std::vector<Branch> branches{{"HH", 1.0, ghz_reference(2, 2)}};
    const auto sel = herald(branches, {"VV"}, {}, 1.0);
    EXPECT_FALSE(sel.state);
    EXPECT_EQ(sel.probability, 0);
}

}  // namespace
}  // namespace ghzforge
