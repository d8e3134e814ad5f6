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

#include "ghzforge/verification.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "ghzforge/error.hpp"
#include "ghzforge/formulas.hpp"
#include "ghzforge/measurement.hpp"
#include "ghzforge/oracle.hpp"
#include "ghzforge/protocol.hpp"
#include "ghzforge/reference.hpp"

namespace ghzforge {

namespace {

constexpr double kTol = 1e-9;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

AnchorResult near(std::string name, double got, double want) {
    const bool ok = std::abs(got - want) <= kTol;
    return {std::move(name), ok, "got " + fmt(got) + ", want " + fmt(want)};
}

AnchorResult same_state(std::string name, const std::optional<PhotonicState> &got, const PhotonicState &want) {
    if (!got) {
        return {std::move(name), false, "no state"};
    }
    const bool ok = approx_equal(*got, want, kTol);
    return {std::move(name), ok, ok ? "terms match" : "got " + to_string(*got)};
}

const PhotonicState *snapshot(const BackendRun &run, const std::string &label) {
    for (const auto &s : run.snapshots) {
        if (s.label == label) {
            return &s.state;
        }
    }
    return nullptr;
}

double trace_prob(const BackendRun &run, const std::string &label) {
    for (const auto &t : run.trace) {
        if (t.label == label) {
            return t.probability;
        }
    }
    return -1;
}

/// Four-photon path ket for d = 3 with the arm photons (1 and 2) tagged by
/// `arm_pol`; photons 0 and 3 stay H.
std::vector<Occupation> tagged_ket(std::initializer_list<int> values, const std::function<Polarization(int)> &arm_pol) {
    std::vector<Occupation> occ;
    int p = 0;
    for (int v : values) {
        const Polarization pol = (p == 1 || p == 2) ? arm_pol(v) : Polarization::H;
        occ.push_back({{path_port(p, v, 3), pol}, 1});
        ++p;
    }
    return occ;
}

PhotonicState expected_filtered() {
    std::vector<Ket> kets;
    for (auto values : {std::vector<int>{0, 0, 0, 0}, {1, 1, 1, 1}, {2, 2, 2, 2}, {0, 0, 2, 2}, {2, 2, 0, 0}}) {
        std::vector<Occupation> occ;
        for (int p = 0; p < 4; ++p) {
            const int v = values[static_cast<std::size_t>(p)];
            const Polarization pol = (p == 1 || p == 2) ? parity_polarization(v) : Polarization::H;
            occ.push_back({{path_port(p, v, 3), pol}, 1});
        }
        kets.push_back({FockTerm::from_occupations(occ), 1.0 / 3});
    }
    return make_state(kets);
}

PhotonicState expected_selected(const AuxStage &st) {
    auto tag = [](int v) { return v == 2 ? Polarization::V : Polarization::H; };
    const double amp = std::sqrt(2.0) / 6;
    std::vector<Ket> kets;
    for (int v : {0, 1, 2}) {
        auto occ = tagged_ket({v, v, v, v}, tag);
        if (v == 2) {
            occ.push_back({{st.aux.first_j, Polarization::V}, 1});
            occ.push_back({{st.aux.second_j, Polarization::V}, 1});
        } else {
            occ.push_back({{st.aux.first_i, Polarization::H}, 1});
            occ.push_back({{st.aux.second_i, Polarization::H}, 1});
        }
        kets.push_back({FockTerm::from_occupations(occ), amp});
    }
    return make_state(kets);
}

PhotonicState expected_analyzed(const AuxStage &st) {
    auto all_h = [](int) { return Polarization::H; };
    const double amp = std::sqrt(2.0) / 12;
    std::vector<Ket> kets;
    for (int v : {0, 1, 2}) {
        for (Polarization px : {Polarization::H, Polarization::V}) {
            for (Polarization py : {Polarization::H, Polarization::V}) {
                auto occ = tagged_ket({v, v, v, v}, all_h);
                occ.push_back({{st.analysis_x, px}, 1});
                occ.push_back({{st.analysis_y, py}, 1});
                const double sign = (v == 2 && px != py) ? -1.0 : 1.0;
                kets.push_back({FockTerm::from_occupations(occ), amp * sign});
            }
        }
    }
    return make_state(kets);
}

template <typename F>
AnchorResult guarded(const std::string &name, F &&body) {
    try {
        return body();
    } catch (const std::exception &e) {
        return {name, false, std::string("threw: ") + e.what()};
    }
}

}  // namespace

bool VerificationReport::all_passed() const {
    for (const auto &a : anchors) {
        if (!a.passed) {
            return false;
        }
    }
    return !anchors.empty();
}

std::vector<std::string> VerificationReport::failed() const {
    std::vector<std::string> out;
    for (const auto &a : anchors) {
        if (!a.passed) {
            out.push_back(a.name);
        }
    }
    return out;
}

VerificationReport run_verification(const VerifyOptions &opts) {
    VerificationReport report;
    auto &out = report.anchors;

    ProtocolOptions o34;
    o34.d = 3;
    o34.n = 4;
    o34.pbs_reflected = opts.pbs_reflected;

    std::optional<ProtocolPlan> plan;
    try {
        plan = compile(o34);
    } catch (const std::exception &e) {
        out.push_back({"d=3 n=4 compile", false, std::string("threw: ") + e.what()});
        return report;
    }
    // A broken run must not hide the anchors that do not depend on it.
    BackendRun filtered;
    BackendRun corrected;
    try {
        filtered = run_backend(*plan, Backend::Element, false);
    } catch (const std::exception &e) {
        out.push_back({"d=3 n=4 run without feedforward", false, std::string("threw: ") + e.what()});
    }
    try {
        corrected = run_backend(*plan, Backend::Element, true);
    } catch (const std::exception &e) {
        out.push_back({"d=3 n=4 run with feedforward", false, std::string("threw: ") + e.what()});
    }
    const AuxStage &stage = plan->junctions.at(0).stages.at(0);
    const std::string filtered_label = checkpoint::junction_filtered(1);
    const std::string selected_label = stage.label + ".selected";
    const std::string analyzed_label = stage.label + ".analyzed";
    const auto ghz34 = ghz_reference(3, 4);

    out.push_back(near("parity filter probability 5/9", trace_prob(filtered, filtered_label), 5.0 / 9));
    out.push_back(guarded("parity filter state", [&] {
        const auto *s = snapshot(filtered, filtered_label);
        return same_state("parity filter state", s ? std::optional(*s) : std::nullopt, expected_filtered());
    }));
    out.push_back(near("auxiliary selection probability 3/10", trace_prob(filtered, selected_label), 3.0 / 10));
    out.push_back(guarded("auxiliary selection state", [&] {
        const auto *s = snapshot(filtered, selected_label);
        return same_state("auxiliary selection state", s ? std::optional(*s) : std::nullopt, expected_selected(stage));
    }));
    out.push_back(guarded("which-path erasure state", [&] {
        const auto *s = snapshot(filtered, analyzed_label);
        return same_state("which-path erasure state", s ? std::optional(*s) : std::nullopt, expected_analyzed(stage));
    }));
    out.push_back(guarded("polarization analysis distribution", [&]() -> AnchorResult {
        const auto *s = snapshot(filtered, analyzed_label);
        if (!s) {
            return {"polarization analysis distribution", false, "no state"};
        }
        const auto dist = project_polarization_pair(*s, stage.analysis_x, stage.analysis_y);
        bool ok = dist.size() == 4;
        std::string detail;
        for (const auto &o : dist) {
            const double f = fidelity(o.state, ghz34);
            const bool even = o.label == "HH" || o.label == "VV";
            ok = ok && std::abs(o.probability - 0.25) <= kTol && std::abs(f - (even ? 1.0 : 1.0 / 9)) <= kTol;
            detail += o.label + ": p=" + fmt(o.probability) + " F=" + fmt(f) + "; ";
        }
        return {"polarization analysis distribution", ok, detail};
    }));
    out.push_back(near("heralded HH/VV probability 1/2", trace_prob(filtered, stage.label + ".heralded"), 0.5));
    out.push_back(near("total probability without feedforward 1/12", filtered.total_probability(), 1.0 / 12));
    out.push_back(near("output norm squared 1/12", filtered.state ? filtered.state->norm2() : 0.0, 1.0 / 12));
    out.push_back(near("output fidelity without feedforward", fidelity(filtered.state, ghz34), 1.0));
    out.push_back(near("total probability with feedforward 1/6", corrected.total_probability(), 1.0 / 6));
    out.push_back(near("output fidelity with feedforward", fidelity(corrected.state, ghz34), 1.0));

    out.push_back(guarded("two-dimensional pipeline d=2 n=4", [&]() -> AnchorResult {
        ProtocolOptions o;
        o.d = 2;
        o.n = 4;
        o.pbs_reflected = opts.pbs_reflected;
        const auto run = run_backend(compile(o), Backend::Element, false);
        const double p = run.total_probability();
        const double f = fidelity(run.state, ghz_reference(2, 4));
        const bool ok = std::abs(p - 0.5) <= kTol && std::abs(f - 1) <= kTol;
        return {"two-dimensional pipeline d=2 n=4", ok, "p=" + fmt(p) + " F=" + fmt(f)};
    }));
    out.push_back(guarded("oracle d=3 n=4 with feedforward", [&]() -> AnchorResult {
        ProtocolOptions o = o34;
        o.pbs_reflected = Polarization::V;
        o.feedforward = true;
        const auto r = oracle_run(o);
        const bool ok = std::abs(r.probability - 1.0 / 6) <= kTol && std::abs(r.fidelity - 1) <= kTol;
        return {"oracle d=3 n=4 with feedforward", ok, "p=" + fmt(r.probability) + " F=" + fmt(r.fidelity)};
    }));

    out.push_back(guarded("closed forms for d=3", [&]() -> AnchorResult {
        const bool ok = eta1(3) == Rational(5, 9) && eta2(3, 1) == Rational(3, 10) &&
                        predicted_prob(3, 4, true) == Rational(1, 6) && predicted_prob(3, 4, false) == Rational(1, 12);
        return {"closed forms for d=3", ok, "eta1=" + to_string(eta1(3)) + " eta2(1)=" + to_string(eta2(3, 1))};
    }));
    out.push_back(guarded("resource identities", [&]() -> AnchorResult {
        for (int d = 2; d <= opts.identity_max_d; ++d) {
            const auto n4 = aux_per_junction_binomial(d);
            if (n4 != aux_per_junction_ceiling(d)) {
                return {"resource identities", false, "aux count forms differ at d=" + std::to_string(d)};
            }
            if (eta1(d) - Rational(2 * n4, d * d) != Rational(1, d)) {
                return {"resource identities", false, "eta1 identity fails at d=" + std::to_string(d)};
            }
            if (junction_success(d) != predicted_prob(d, 4, true)) {
                return {"resource identities", false, "telescoping product fails at d=" + std::to_string(d)};
            }
        }
        return {"resource identities", true, "2 <= d <= " + std::to_string(opts.identity_max_d)};
    }));
    return report;
}

}  // namespace ghzforge
