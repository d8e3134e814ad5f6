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

#ifndef GHZFORGE_REPORT_HPP
#define GHZFORGE_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "ghzforge/circuit.hpp"
#include "ghzforge/formulas.hpp"
#include "ghzforge/state.hpp"

namespace ghzforge {

enum class Backend { Rule, Element, Oracle };

std::string_view backend_name(Backend b);
Backend parse_backend(std::string_view name);
std::string_view odd_mode_name(OddMode m);
OddMode parse_odd_mode(std::string_view name);

/// Thresholds a run must meet to count as reproducing the closed form.
inline constexpr double kReportFidelityThreshold = 1e-6;
inline constexpr double kReportProbabilityThreshold = 1e-6;

struct RunReport {
    int d = 0;
    int n = 0;
    Backend backend = Backend::Rule;
    bool feedforward = false;
    OddMode odd_mode = OddMode::SingleOutcome;
    bool uniform_coefficients = true;

    std::optional<PhotonicState> final_state;
    /// Probability for the requested feedforward setting; equals the product
    /// of the trace entries.
    double probability = 0;
    double prob_filtered = 0;
    double prob_feedforward = 0;
    /// Closed form for the requested setting; absent for non-uniform inputs.
    std::optional<Rational> predicted;
    std::vector<TraceEntry> trace;
    double fidelity = 0;

    bool fidelity_ok() const {
        return fidelity >= 1 - kReportFidelityThreshold;
    }
    /// True when there is no closed form to compare against.
    bool probability_ok() const;
    bool matches() const {
        return fidelity_ok() && probability_ok();
    }
};

}  // namespace ghzforge

#endif
