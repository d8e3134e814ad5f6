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

#ifndef GHZFORGE_MEASUREMENT_HPP
#define GHZFORGE_MEASUREMENT_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghzforge/elements.hpp"
#include "ghzforge/state.hpp"

namespace ghzforge {

/// Detection pattern requiring exactly one photon in each group of ports
/// (both polarizations counted).
struct CoincidencePattern {
    std::vector<std::vector<int>> groups;

    /// Throws InvalidParameters on empty or overlapping groups.
    void validate() const;
};

/// Result of conditioning on a detection event. `state` is nullopt when no
/// term survives; that is a legitimate zero-probability outcome.
struct Selection {
    std::optional<PhotonicState> state;
    double probability = 0;
};

/// Keeps the terms satisfying the pattern without renormalizing them.
/// probability = kept norm^2 / input norm^2; branch_prob is multiplied by it.
Selection postselect_coincidence(const PhotonicState &s, const CoincidencePattern &pattern);

/// A single-photon bra, written as the coefficients of the ket it projects
/// onto. Coefficients are conjugated when applied.
using SinglePhotonKet = std::vector<std::pair<Mode, Amplitude>>;

/// Projects the single photon found in `ports` onto `ket` and removes it from
/// every term. Unnormalized. Throws NotSingleOccupancy unless each term holds
/// exactly one photon in `ports`.
std::optional<PhotonicState> project_photon(const PhotonicState &s, std::span<const int> ports,
                                            const SinglePhotonKet &ket);

/// Unnormalized post-measurement branch; branch_prob already includes the
/// outcome probability.
struct Branch {
    std::string label;
    double probability = 0;
    std::optional<PhotonicState> state;
};

struct Outcome {
    std::string label;
    double probability = 0;
    std::optional<PhotonicState> state;  // normalized, nullopt when probability is 0
};

using OutcomeDistribution = std::vector<Outcome>;

/// H/V analysis of one photon in port x and one in port y. Labels HH, HV, VH, VV.
std::vector<Branch> polarization_pair_branches(const PhotonicState &s, int port_x, int port_y);
OutcomeDistribution project_polarization_pair(const PhotonicState &s, int port_x, int port_y);

/// Fourier basis on the path of one photon: outcome k projects onto
/// (1/sqrt d) sum_j exp(2 pi i j k / d) |ports[j]>. Labels "0".."d-1".
std::vector<Branch> fourier_branches(const PhotonicState &s, std::span<const int> ports);
OutcomeDistribution fourier_measure_path(const PhotonicState &s, std::span<const int> ports);

/// Outcome label -> correction elements. An empty list means no correction.
using CorrectionRule = std::map<std::string, std::vector<Element>>;

/// Throws MissingCorrection if `outcome` has no entry.
PhotonicState feedforward(const PhotonicState &s, const std::string &outcome, const CorrectionRule &rule);

/// HH, VV untouched; HV, VH get a pi phase on `port`.
CorrectionRule pas_phase_rule(int port);
/// Outcome k gets phase 2 pi j k / d on ports[j] of the partner photon.
CorrectionRule fourier_phase_rule(std::span<const int> ports);

/// Combines measurement branches into one heralded state. Outcomes listed in
/// `accept` are kept as they are; outcomes with an entry in `corrections` are
/// corrected and kept too. Every kept branch must then describe the same pure
/// state (IncoherentBranches otherwise); the result carries the summed
/// probability. `input_branch_prob` is the branch probability before the
/// measurement.
Selection herald(const std::vector<Branch> &branches, const std::vector<std::string> &accept,
                 const CorrectionRule &corrections, double input_branch_prob);

OutcomeDistribution normalized(const std::vector<Branch> &branches);

}  // namespace ghzforge

#endif
