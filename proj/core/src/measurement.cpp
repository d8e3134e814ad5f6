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

#include "ghzforge/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "ghzforge/error.hpp"
#include "ghzforge/tolerance.hpp"

namespace ghzforge {

void CoincidencePattern::validate() const {
    if (groups.empty()) {
        throw Error(ErrorCode::InvalidParameters, "coincidence pattern has no groups");
    }
    std::set<int> seen;
    for (const auto &g : groups) {
        if (g.empty()) {
            throw Error(ErrorCode::InvalidParameters, "coincidence group is empty");
        }
        for (int p : g) {
            if (!seen.insert(p).second) {
                throw Error(ErrorCode::InvalidParameters,
                            "port " + std::to_string(p) + " appears in two coincidence groups");
            }
        }
    }
}

Selection postselect_coincidence(const PhotonicState &s, const CoincidencePattern &pattern) {
    pattern.validate();
    const double before = s.norm2();
    StateBuilder b;
    b.reserve(s.size());
    double kept = 0;
    for (const auto &[t, a] : s.terms()) {
        bool ok = std::all_of(pattern.groups.begin(), pattern.groups.end(),
                              [&](const std::vector<int> &g) { return t.count_in_ports(g) == 1; });
        if (ok) {
            kept += std::norm(a);
            b.add(t, a);
        }
    }
    Selection sel;
    sel.probability = before > 0 ? kept / before : 0.0;
    sel.state = std::move(b).build(s.branch_prob() * sel.probability);
    if (!sel.state) {
        sel.probability = 0;
    }
    return sel;
}

std::optional<PhotonicState> project_photon(const PhotonicState &s, std::span<const int> ports,
                                            const SinglePhotonKet &ket) {
    StateBuilder b;
    b.reserve(s.size());
    for (const auto &[t, a] : s.terms()) {
        if (t.count_in_ports(ports) != 1) {
            throw Error(ErrorCode::NotSingleOccupancy, "measured ports must hold exactly one photon in " + t.to_string());
        }
        const Occupation *hit = nullptr;
        for (const auto &o : t.occupations()) {
            if (std::find(ports.begin(), ports.end(), o.mode.port) != ports.end()) {
                hit = &o;
                break;
            }
        }
        for (const auto &[mode, coeff] : ket) {
            if (mode == hit->mode) {
                b.add(t.without(mode), a * std::conj(coeff));
            }
        }
    }
    return std::move(b).build(s.branch_prob());
}

namespace {

std::vector<Branch> finish_branches(const PhotonicState &s, std::vector<Branch> branches) {
    const double before = s.norm2();
    for (auto &br : branches) {
        if (!br.state) {
            br.probability = 0;
            continue;
        }
        br.probability = br.state->norm2() / before;
        br.state = br.state->with_branch_prob(s.branch_prob() * br.probability);
    }
    return branches;
}

}  // namespace

std::vector<Branch> polarization_pair_branches(const PhotonicState &s, int port_x, int port_y) {
    if (port_x == port_y) {
        throw Error(ErrorCode::PortCollision, "polarization analysis needs two distinct ports");
    }
    const int px[] = {port_x};
    const int py[] = {port_y};
    std::vector<Branch> branches;
    for (Polarization a : {Polarization::H, Polarization::V}) {
        auto first = project_photon(s, px, {{Mode{port_x, a}, 1.0}});
        for (Polarization b : {Polarization::H, Polarization::V}) {
            Branch br;
            br.label = std::string{polarization_char(a), polarization_char(b)};
            if (first) {
                br.state = project_photon(*first, py, {{Mode{port_y, b}, 1.0}});
            } else {
                // Still validate the y occupancy so the error surfaces uniformly.
                (void)project_photon(s, py, {{Mode{port_y, b}, 1.0}});
            }
            branches.push_back(std::move(br));
        }
    }
    return finish_branches(s, std::move(branches));
}

std::vector<Branch> fourier_branches(const PhotonicState &s, std::span<const int> ports) {
    const int d = static_cast<int>(ports.size());
    if (d < 2) {
        throw Error(ErrorCode::InvalidParameters, "Fourier measurement needs at least two paths");
    }
    std::optional<Polarization> pol;
    for (const auto &[t, a] : s.terms()) {
        for (const auto &o : t.occupations()) {
            if (std::find(ports.begin(), ports.end(), o.mode.port) == ports.end()) {
                continue;
            }
            if (pol && *pol != o.mode.pol) {
                throw Error(ErrorCode::PolarizationConflict, "Fourier-measured photon has mixed polarization");
            }
            pol = o.mode.pol;
        }
    }
    if (!pol) {
        throw Error(ErrorCode::NotSingleOccupancy, "no photon in the measured path group");
    }
    std::vector<Branch> branches;
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k) {
        SinglePhotonKet ket;
        for (int j = 0; j < d; ++j) {
            const double angle = 2 * std::numbers::pi * ((j * k) % d) / d;
            ket.emplace_back(Mode{ports[static_cast<std::size_t>(j)], *pol}, std::polar(norm, angle));
        }
        branches.push_back({std::to_string(k), 0, project_photon(s, ports, ket)});
    }
    return finish_branches(s, std::move(branches));
}

OutcomeDistribution normalized(const std::vector<Branch> &branches) {
    OutcomeDistribution out;
    for (const auto &br : branches) {
        Outcome o{br.label, br.probability, std::nullopt};
        if (br.state) {
            o.state = normalize(*br.state);
        }
        out.push_back(std::move(o));
    }
    return out;
}

OutcomeDistribution project_polarization_pair(const PhotonicState &s, int port_x, int port_y) {
    return normalized(polarization_pair_branches(s, port_x, port_y));
}

OutcomeDistribution fourier_measure_path(const PhotonicState &s, std::span<const int> ports) {
    return normalized(fourier_branches(s, ports));
}

PhotonicState feedforward(const PhotonicState &s, const std::string &outcome, const CorrectionRule &rule) {
    auto it = rule.find(outcome);
    if (it == rule.end()) {
        throw Error(ErrorCode::MissingCorrection, "no correction for outcome " + outcome);
    }
    PhotonicState out = s;
    for (const auto &e : it->second) {
        out = ghzforge::apply(out, e);
    }
    return out;
}

CorrectionRule pas_phase_rule(int port) {
    const std::vector<Element> flip{PhaseShift{port, std::numbers::pi}};
    return {{"HH", {}}, {"VV", {}}, {"HV", flip}, {"VH", flip}};
}

CorrectionRule fourier_phase_rule(std::span<const int> ports) {
    const int d = static_cast<int>(ports.size());
    CorrectionRule rule;
    for (int k = 0; k < d; ++k) {
        std::vector<Element> fix;
        for (int j = 1; j < d; ++j) {
            if ((j * k) % d != 0) {
                fix.push_back(PhaseShift{ports[static_cast<std::size_t>(j)], 2 * std::numbers::pi * j * k / d});
            }
        }
        rule[std::to_string(k)] = std::move(fix);
    }
    return rule;
}

Selection herald(const std::vector<Branch> &branches, const std::vector<std::string> &accept,
                 const CorrectionRule &corrections, double input_branch_prob) {
    Selection sel;
    std::optional<PhotonicState> reference;
    double reference_p = 0;
    for (const auto &br : branches) {
        const bool plain = std::find(accept.begin(), accept.end(), br.label) != accept.end();
        const bool corrected = corrections.count(br.label) > 0;
        if ((!plain && !corrected) || !br.state) {
            continue;
        }
        PhotonicState st = plain ? *br.state : feedforward(*br.state, br.label, corrections);
        if (!reference) {
            reference = st;
            reference_p = br.probability;
        } else {
            const double overlap = std::norm(inner_product(*reference, st)) / (reference->norm2() * st.norm2());
            if (overlap < 1 - 1e3 * tolerance()) {
                throw Error(ErrorCode::IncoherentBranches,
                            "outcome " + br.label + " does not herald the same state (overlap " +
                                std::to_string(overlap) + ")");
            }
        }
        sel.probability += br.probability;
    }
    if (!reference) {
        sel.probability = 0;
        return sel;
    }
    PhotonicState combined = scaled(*reference, std::sqrt(sel.probability / reference_p));
    sel.state = combined.with_branch_prob(input_branch_prob * sel.probability);
    return sel;
}

}  // namespace ghzforge
