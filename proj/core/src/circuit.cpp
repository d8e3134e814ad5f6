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

#include "ghzforge/circuit.hpp"

#include <set>

#include "ghzforge/error.hpp"

namespace ghzforge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<int> step_ports(const StepOp &op) {
    return std::visit(overloaded{
                          [](const Element &e) { return element_ports(e); },
                          [](const SourceStep &s) { return s.state.occupied_ports(); },
                          [](const PostSelectStep &s) {
                              std::vector<int> out;
                              for (const auto &g : s.pattern.groups) {
                                  out.insert(out.end(), g.begin(), g.end());
                              }
                              return out;
                          },
                          [](const PolarizationAnalysisStep &s) { return std::vector<int>{s.port_x, s.port_y}; },
                          [](const FourierStep &s) { return s.ports; },
                      },
                      op);
}

void append_correction_ports(const CorrectionRule &rule, std::vector<int> &out) {
    for (const auto &[label, elements] : rule) {
        for (const auto &e : elements) {
            auto p = element_ports(e);
            out.insert(out.end(), p.begin(), p.end());
        }
    }
}

}  // namespace

void Circuit::validate() const {
    if (port_count < 0) {
        throw Error(ErrorCode::InvalidCircuit, "negative port count");
    }
    std::set<int> used;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto &op = steps[i].op;
        auto ports = step_ports(op);
        if (const auto *pas = std::get_if<PolarizationAnalysisStep>(&op)) {
            append_correction_ports(pas->corrections, ports);
        } else if (const auto *f = std::get_if<FourierStep>(&op)) {
            append_correction_ports(f->corrections, ports);
        }
        for (int p : ports) {
            if (p < 0 || p >= port_count) {
                throw Error(ErrorCode::InvalidCircuit,
                            "step " + std::to_string(i) + " references port " + std::to_string(p) +
                                " outside [0, " + std::to_string(port_count) + ")");
            }
        }
        if (const auto *e = std::get_if<Element>(&op)) {
            auto own = element_ports(*e);
            std::set<int> distinct(own.begin(), own.end());
            if (distinct.size() != own.size()) {
                throw Error(ErrorCode::InvalidCircuit, "step " + std::to_string(i) + " repeats a port");
            }
            if (const auto *m = std::get_if<BdMerge>(e); m && used.count(m->port_out)) {
                throw Error(ErrorCode::InvalidCircuit,
                            "step " + std::to_string(i) + " merges into port " + std::to_string(m->port_out) +
                                " which is used upstream");
            }
        }
        used.insert(ports.begin(), ports.end());
    }
}

double CircuitResult::total_probability() const {
    double p = 1;
    for (const auto &t : trace) {
        p *= t.probability;
    }
    return p;
}

CircuitResult run_circuit(const PhotonicState &input, const Circuit &circuit) {
    CircuitResult result;
    PhotonicState current = input;
    for (std::size_t i = 0; i < circuit.steps.size(); ++i) {
        const Step &step = circuit.steps[i];
        const std::string trace_label = step.label.empty() ? "step" + std::to_string(i) : step.label;
        std::optional<Selection> measured;
        std::visit(overloaded{
                       [&](const Element &e) { current = ghzforge::apply(current, e); },
                       [&](const SourceStep &s) { current = tensor(current, s.state); },
                       [&](const PostSelectStep &s) { measured = postselect_coincidence(current, s.pattern); },
                       [&](const PolarizationAnalysisStep &s) {
                           measured = herald(polarization_pair_branches(current, s.port_x, s.port_y), s.accept,
                                             s.corrections, current.branch_prob());
                       },
                       [&](const FourierStep &s) {
                           measured = herald(fourier_branches(current, s.ports), s.accept, s.corrections,
                                             current.branch_prob());
                       },
                   },
                   step.op);
        if (measured) {
            result.trace.push_back({trace_label, measured->probability});
            if (!measured->state) {
                return result;
            }
            current = *std::move(measured->state);
        }
        if (!step.label.empty()) {
            result.snapshots.push_back({step.label, current});
        }
    }
    result.state = std::move(current);
    return result;
}

}  // namespace ghzforge
