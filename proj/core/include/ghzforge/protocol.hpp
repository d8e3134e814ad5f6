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

#ifndef GHZFORGE_PROTOCOL_HPP
#define GHZFORGE_PROTOCOL_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghzforge/circuit.hpp"
#include "ghzforge/formulas.hpp"
#include "ghzforge/report.hpp"
#include "ghzforge/state.hpp"

namespace ghzforge {

/// Path pair (i < j, same parity) targeted by one auxiliary stage.
struct AuxPair {
    int i = 0;
    int j = 0;

    auto operator<=>(const AuxPair &) const = default;
};

struct ProtocolOptions {
    int d = 2;
    int n = 4;
    bool feedforward = false;
    OddMode odd_mode = OddMode::SingleOutcome;
    /// Real source coefficients c_0..c_{d-1}; uniform 1/sqrt(d) when absent.
    std::optional<std::vector<double>> coeffs;
    /// Auxiliary stage order used at every junction. Must be a permutation of
    /// same_parity_pairs(d); defaults to that list.
    std::optional<std::vector<AuxPair>> aux_order;
    /// Which polarization the PBSs reflect. Only flipped for fault injection.
    Polarization pbs_reflected = Polarization::V;

    /// Throws InvalidParameters, InvalidCoefficients or InvalidAuxPair.
    void validate() const;
    bool uniform() const noexcept {
        return !coeffs.has_value();
    }
};

/// Ports of the two auxiliary photons of one stage. The first photon is
/// interfered with the junction's left arm, the second with the right arm.
struct AuxPorts {
    int first_i = 0;
    int first_j = 0;
    int second_i = 0;
    int second_j = 0;
};

struct AuxStage {
    AuxPair pair;
    AuxPorts aux;
    /// Beam-displacer outputs used while the arms meet the auxiliary photons.
    int merged_left = 0;
    int merged_first = 0;
    int merged_right = 0;
    int merged_second = 0;
    /// Merged auxiliary beams fed to the polarization analysis.
    int analysis_x = 0;
    int analysis_y = 0;
    std::string label;
};

/// Two adjacent photons of consecutive sources and the stages filtering
/// their cross terms.
struct Junction {
    int index = 0;  // 1-based
    int left_photon = 0;
    int right_photon = 0;
    std::string label;
    std::vector<AuxStage> stages;
};

struct ProtocolPlan {
    ProtocolOptions options;
    int epr_pair_count = 0;
    std::int64_t aux_pair_count = 0;
    /// Photons emitted by the sources (2 * epr_pair_count).
    int signal_photons = 0;
    std::vector<Junction> junctions;
    bool odd_reduction = false;
    /// Element-level realization starting from the vacuum; the first
    /// epr_pair_count steps are the sources.
    Circuit circuit;

    std::vector<int> photon_ports(int photon) const;
    /// Product of the pair sources (the state before any junction).
    PhotonicState input_state() const;
};

/// Labels shared by every backend for the checkpoint states.
namespace checkpoint {
inline constexpr const char *kInput = "input";
inline constexpr const char *kOutput = "output";
inline constexpr const char *kOddReduced = "odd.reduced";
std::string junction_filtered(int junction);
std::string aux_prefix(int junction, AuxPair pair);
}  // namespace checkpoint

/// sum_i c_i |i>_A |i>_B, photon A in portsA[i], photon B in portsB[i], both H.
PhotonicState build_epr_source(int d, std::span<const double> coeffs, std::span<const int> ports_a,
                               std::span<const int> ports_b);
/// Uniform coefficients.
PhotonicState build_epr_source(int d, std::span<const int> ports_a, std::span<const int> ports_b);

/// (|i_H i_H> + |j_V j_V>)/sqrt 2 on the auxiliary ports.
PhotonicState build_aux_source(AuxPair pair, const AuxPorts &ports);

using PolarizationRule = std::function<Polarization(int path)>;

/// Odd paths V, even paths H.
Polarization parity_polarization(int path) noexcept;

/// Sets the polarization of every photon found in group[p] to rule(p).
/// Throws PolarizationConflict if a port carries both polarizations.
PhotonicState polarization_tag(const PhotonicState &s, std::span<const int> group, const PolarizationRule &rule);

/// All (i, j), i < j, same parity: even pairs first, then odd pairs, each in
/// lexicographic order.
std::vector<AuxPair> same_parity_pairs(int d);

/// Throws InvalidParameters (d < 2 or n < 2) and the option errors.
ProtocolPlan compile(const ProtocolOptions &opts);

/// Output of one backend pass.
struct BackendRun {
    std::optional<PhotonicState> state;
    std::vector<TraceEntry> trace;
    std::vector<Snapshot> snapshots;

    double total_probability() const;
};

/// Element backend: runs plan.circuit. Rule backend: applies each stage's
/// kept-term predicate and amplitude factors directly. Both record the same
/// checkpoint labels. `feedforward` overrides the plan's option.
BackendRun run_backend(const ProtocolPlan &plan, Backend backend, bool feedforward);

/// Runs the requested backend with and without feedforward and reports
/// fidelity against the GHZ reference. EmptyState anywhere yields a report
/// with probability 0.
RunReport execute(const ProtocolPlan &plan, Backend backend = Backend::Rule);

/// Turns an even-photon GHZ state (standard path encoding) into an odd one by
/// measuring photon 0. SingleOutcome keeps the uniform-superposition outcome
/// only; FullFourier keeps every outcome and undoes its phases on photon 1.
RunReport reduce_to_odd(const PhotonicState &s, int d, OddMode mode);

}  // namespace ghzforge

#endif
