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

#ifndef GHZFORGE_SERIALIZE_HPP
#define GHZFORGE_SERIALIZE_HPP

#include <nlohmann/json.hpp>
#include <string>

#include "ghzforge/circuit.hpp"
#include "ghzforge/formulas.hpp"
#include "ghzforge/measurement.hpp"
#include "ghzforge/protocol.hpp"
#include "ghzforge/report.hpp"
#include "ghzforge/state.hpp"

namespace ghzforge {

using Json = nlohmann::ordered_json;

/// [{"modes": [[port, "H"|"V", count], ...], "re": x, "im": y}, ...] in
/// canonical term order.
Json state_to_json(const PhotonicState &s);
/// Throws ParseError on malformed input, plus the make_state errors.
PhotonicState state_from_json(const Json &j);

Json element_to_json(const Element &e);
/// Bare array of steps, each {"elem": kind, ..., "label"?}.
Json circuit_to_json(const Circuit &c);
/// port_count is one past the highest referenced port. Throws ParseError and
/// InvalidCircuit.
Circuit circuit_from_json(const Json &j);

Json outcomes_to_json(const OutcomeDistribution &dist);

/// "p/q" for the closest small rational within 1e-9, or the decimal form.
std::string probability_string(double p);

Json report_to_json(const RunReport &r);
Json plan_to_json(const ProtocolPlan &plan);
Json summary_to_json(const ResourceSummary &s);

/// d,n,epr_count,aux_count,eta1,predicted_prob_ff,predicted_prob_filtered
std::string summary_csv_header();
std::string summary_csv_row(const ResourceSummary &s);

}  // namespace ghzforge

#endif
