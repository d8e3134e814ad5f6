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

#ifndef GHZFORGE_CIRCUIT_HPP
#define GHZFORGE_CIRCUIT_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ghzforge/elements.hpp"
#include "ghzforge/measurement.hpp"
#include "ghzforge/state.hpp"

namespace ghzforge {

/// Brings fresh photons into the circuit (tensored onto the running state).
struct SourceStep {
    PhotonicState state;
};

struct PostSelectStep {
    CoincidencePattern pattern;
};

/// H/V analysis of two ports followed by heralding.
struct PolarizationAnalysisStep {
    int port_x = 0;
    int port_y = 0;
    std::vector<std::string> accept;
    CorrectionRule corrections;
};

/// Fourier-basis path measurement of one photon followed by heralding.
struct FourierStep {
    std::vector<int> ports;
    std::vector<std::string> accept;
    CorrectionRule corrections;
};

using StepOp = std::variant<Element, SourceStep, PostSelectStep, PolarizationAnalysisStep, FourierStep>;

struct Step {
    StepOp op;
    /// Non-empty labels mark checkpoints: the state after the step is recorded
    /// and measurement steps name their trace entry with it.
    std::string label;
};

struct Circuit {
    int port_count = 0;
    std::vector<Step> steps;

    /// Checks every referenced port lies in [0, port_count), that element
    /// ports are distinct, and that no bd_merge writes to a port used
    /// earlier. Throws InvalidCircuit.
    void validate() const;
};

struct TraceEntry {
    std::string label;
    double probability = 0;
};

struct Snapshot {
    std::string label;
    PhotonicState state;
};

struct CircuitResult {
    /// nullopt once any post-selection leaves nothing.
    std::optional<PhotonicState> state;
    /// One entry per measurement step, in order.
    std::vector<TraceEntry> trace;
    std::vector<Snapshot> snapshots;

    double total_probability() const;
};

/// Folds the steps over `input`. Stops early (state = nullopt) when a
/// measurement has probability zero.
CircuitResult run_circuit(const PhotonicState &input, const Circuit &circuit);

}  // namespace ghzforge

#endif
