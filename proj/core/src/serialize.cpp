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

#include "ghzforge/serialize.hpp"

#include <algorithm>
#include <sstream>

#include "ghzforge/error.hpp"

namespace ghzforge {

namespace {

std::string pol_string(Polarization p) {
    return std::string(1, polarization_char(p));
}

Polarization parse_pol(const Json &j) {
    if (j == "H") {
        return Polarization::H;
    }
    if (j == "V") {
        return Polarization::V;
    }
    throw Error(ErrorCode::ParseError, "polarization must be \"H\" or \"V\", got " + j.dump());
}

/// Typed field access that reports the field name on failure.
template <typename T>
T field(const Json &j, const char *name) {
    if (!j.is_object() || !j.contains(name)) {
        throw Error(ErrorCode::ParseError, std::string("missing field '") + name + "' in " + j.dump());
    }
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception &) {
        throw Error(ErrorCode::ParseError, std::string("field '") + name + "' has the wrong type in " + j.dump());
    }
}

Json corrections_to_json(const CorrectionRule &rule) {
    Json out = Json::object();
    for (const auto &[label, elements] : rule) {
        Json list = Json::array();
        for (const auto &e : elements) {
            list.push_back(element_to_json(e));
        }
        out[label] = std::move(list);
    }
    return out;
}

Element element_from_json(const Json &j);

CorrectionRule corrections_from_json(const Json &j) {
    CorrectionRule rule;
    if (!j.is_object()) {
        throw Error(ErrorCode::ParseError, "corrections must be an object");
    }
    for (const auto &[label, list] : j.items()) {
        if (!list.is_array()) {
            throw Error(ErrorCode::ParseError, "correction for '" + label + "' must be an array");
        }
        auto &elements = rule[label];
        for (const auto &e : list) {
            elements.push_back(element_from_json(e));
        }
    }
    return rule;
}

Element element_from_json(const Json &j) {
    const auto kind = field<std::string>(j, "elem");
    if (kind == "pbs") {
        Pbs p{field<int>(j, "a"), field<int>(j, "b")};
        if (j.contains("reflect")) {
            p.reflected = parse_pol(j.at("reflect"));
        }
        return p;
    }
    if (kind == "hwp") {
        return Hwp{field<int>(j, "port"), field<double>(j, "theta")};
    }
    if (kind == "phase") {
        return PhaseShift{field<int>(j, "port"), field<double>(j, "phi")};
    }
    if (kind == "bd_merge") {
        return BdMerge{field<int>(j, "even"), field<int>(j, "odd"), field<int>(j, "out")};
    }
    if (kind == "bd_split") {
        return BdSplit{field<int>(j, "in"), field<int>(j, "even"), field<int>(j, "odd")};
    }
    throw Error(ErrorCode::ParseError, "unknown element '" + kind + "'");
}

int max_port(const PhotonicState &s) {
    int m = -1;
    for (int p : s.occupied_ports()) {
        m = std::max(m, p);
    }
    return m;
}

Json trace_to_json(const std::vector<TraceEntry> &trace) {
    Json out = Json::array();
    for (const auto &t : trace) {
        out.push_back({{"label", t.label}, {"prob", t.probability}, {"prob_exact", probability_string(t.probability)}});
    }
    return out;
}

}  // namespace

Json state_to_json(const PhotonicState &s) {
    Json out = Json::array();
    for (const auto &[term, amp] : s.terms()) {
        Json modes = Json::array();
        for (const auto &o : term.occupations()) {
            modes.push_back(Json::array({o.mode.port, pol_string(o.mode.pol), o.count}));
        }
        out.push_back({{"modes", std::move(modes)}, {"re", amp.real()}, {"im", amp.imag()}});
    }
    return out;
}

PhotonicState state_from_json(const Json &j) {
    if (!j.is_array()) {
        throw Error(ErrorCode::ParseError, "state must be an array of terms");
    }
    std::vector<Ket> kets;
    for (const auto &t : j) {
        const auto modes = field<Json>(t, "modes");
        if (!modes.is_array()) {
            throw Error(ErrorCode::ParseError, "'modes' must be an array");
        }
        std::vector<Occupation> occ;
        for (const auto &m : modes) {
            if (!m.is_array() || m.size() != 3 || !m[0].is_number_integer() || !m[2].is_number_integer()) {
                throw Error(ErrorCode::ParseError, "mode entries are [port, pol, count], got " + m.dump());
            }
            occ.push_back({{m[0].get<int>(), parse_pol(m[1])}, m[2].get<int>()});
        }
        const double im = t.contains("im") ? field<double>(t, "im") : 0.0;
        kets.push_back({FockTerm::from_occupations(std::move(occ)), Amplitude{field<double>(t, "re"), im}});
    }
    return make_state(kets);
}

Json element_to_json(const Element &e) {
    return std::visit(
        [](const auto &x) -> Json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Pbs>) {
                return {{"elem", "pbs"}, {"a", x.port_a}, {"b", x.port_b}, {"reflect", pol_string(x.reflected)}};
            } else if constexpr (std::is_same_v<T, Hwp>) {
                return {{"elem", "hwp"}, {"port", x.port}, {"theta", x.theta}};
            } else if constexpr (std::is_same_v<T, PhaseShift>) {
                return {{"elem", "phase"}, {"port", x.port}, {"phi", x.phi}};
            } else if constexpr (std::is_same_v<T, BdMerge>) {
                return {{"elem", "bd_merge"}, {"even", x.port_even}, {"odd", x.port_odd}, {"out", x.port_out}};
            } else {
                return {{"elem", "bd_split"}, {"in", x.port_in}, {"even", x.port_even}, {"odd", x.port_odd}};
            }
        },
        e);
}

Json circuit_to_json(const Circuit &c) {
    Json out = Json::array();
    for (const auto &step : c.steps) {
        Json j = std::visit(
            [](const auto &x) -> Json {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Element>) {
                    return element_to_json(x);
                } else if constexpr (std::is_same_v<T, SourceStep>) {
                    return {{"elem", "source"}, {"state", state_to_json(x.state)}};
                } else if constexpr (std::is_same_v<T, PostSelectStep>) {
                    return {{"elem", "postselect"}, {"groups", x.pattern.groups}};
                } else if constexpr (std::is_same_v<T, PolarizationAnalysisStep>) {
                    return {{"elem", "pas"},
                            {"x", x.port_x},
                            {"y", x.port_y},
                            {"accept", x.accept},
                            {"corrections", corrections_to_json(x.corrections)}};
                } else {
                    return {{"elem", "fourier"},
                            {"ports", x.ports},
                            {"accept", x.accept},
                            {"corrections", corrections_to_json(x.corrections)}};
                }
            },
            step.op);
        if (!step.label.empty()) {
            j["label"] = step.label;
        }
        out.push_back(std::move(j));
    }
    return out;
}

Circuit circuit_from_json(const Json &j) {
    if (!j.is_array()) {
        throw Error(ErrorCode::ParseError, "circuit must be an array of steps");
    }
    Circuit c;
    int highest = -1;
    auto note = [&](int p) { highest = std::max(highest, p); };
    auto note_rule = [&](const CorrectionRule &rule) {
        for (const auto &[label, elements] : rule) {
            for (const auto &e : elements) {
                for (int p : element_ports(e)) {
                    note(p);
                }
            }
        }
    };
    for (const auto &s : j) {
        const auto kind = field<std::string>(s, "elem");
        Step step;
        if (s.contains("label")) {
            step.label = field<std::string>(s, "label");
        }
        if (kind == "source") {
            SourceStep src{state_from_json(field<Json>(s, "state"))};
            note(max_port(src.state));
            step.op = std::move(src);
        } else if (kind == "postselect") {
            PostSelectStep ps{{field<std::vector<std::vector<int>>>(s, "groups")}};
            for (const auto &g : ps.pattern.groups) {
                for (int p : g) {
                    note(p);
                }
            }
            step.op = std::move(ps);
        } else if (kind == "pas") {
            PolarizationAnalysisStep pas;
            pas.port_x = field<int>(s, "x");
            pas.port_y = field<int>(s, "y");
            pas.accept = s.contains("accept") ? field<std::vector<std::string>>(s, "accept")
                                              : std::vector<std::string>{"HH", "VV"};
            if (s.contains("corrections")) {
                pas.corrections = corrections_from_json(s.at("corrections"));
            }
            note(pas.port_x);
            note(pas.port_y);
            note_rule(pas.corrections);
            step.op = std::move(pas);
        } else if (kind == "fourier") {
            FourierStep f;
            f.ports = field<std::vector<int>>(s, "ports");
            if (s.contains("accept")) {
                f.accept = field<std::vector<std::string>>(s, "accept");
            }
            if (s.contains("corrections")) {
                f.corrections = corrections_from_json(s.at("corrections"));
            }
            for (int p : f.ports) {
                note(p);
            }
            note_rule(f.corrections);
            step.op = std::move(f);
        } else {
            Element e = element_from_json(s);
            for (int p : element_ports(e)) {
                note(p);
            }
            step.op = e;
        }
        c.steps.push_back(std::move(step));
    }
    c.port_count = highest + 1;
    c.validate();
    return c;
}

Json outcomes_to_json(const OutcomeDistribution &dist) {
    Json out = Json::array();
    for (const auto &o : dist) {
        out.push_back({{"outcome", o.label},
                       {"prob", o.probability},
                       {"state", o.state ? state_to_json(*o.state) : Json(nullptr)}});
    }
    return out;
}

std::string probability_string(double p) {
    if (auto r = rational_approximation(p, 1e-9, 1'000'000)) {
        if (r->second == 1) {
            return std::to_string(r->first);
        }
        return std::to_string(r->first) + "/" + std::to_string(r->second);
    }
    std::ostringstream os;
    os.precision(17);
    os << p;
    return os.str();
}

Json report_to_json(const RunReport &r) {
    Json j;
    j["d"] = r.d;
    j["n"] = r.n;
    j["backend"] = backend_name(r.backend);
    j["feedforward"] = r.feedforward;
    j["odd_mode"] = odd_mode_name(r.odd_mode);
    j["uniform_coefficients"] = r.uniform_coefficients;
    j["fidelity"] = r.fidelity;
    j["probability"] = r.probability;
    j["probability_exact"] = r.uniform_coefficients ? Json(probability_string(r.probability)) : Json(nullptr);
    j["prob_filtered"] = r.prob_filtered;
    j["prob_feedforward"] = r.prob_feedforward;
    if (r.predicted) {
        j["predicted_prob"] = to_double(*r.predicted);
        j["predicted_prob_exact"] = to_string(*r.predicted);
    } else {
        j["predicted_prob"] = nullptr;
        j["predicted_prob_exact"] = nullptr;
    }
    j["fidelity_ok"] = r.fidelity_ok();
    j["probability_ok"] = r.probability_ok();
    j["match"] = r.matches();
    j["trace"] = trace_to_json(r.trace);
    j["final_state"] = r.final_state ? state_to_json(*r.final_state) : Json(nullptr);
    return j;
}

Json plan_to_json(const ProtocolPlan &plan) {
    Json j;
    j["d"] = plan.options.d;
    j["n"] = plan.options.n;
    j["feedforward"] = plan.options.feedforward;
    j["odd_mode"] = odd_mode_name(plan.options.odd_mode);
    j["epr_pair_count"] = plan.epr_pair_count;
    j["aux_pair_count"] = plan.aux_pair_count;
    j["signal_photons"] = plan.signal_photons;
    j["port_count"] = plan.circuit.port_count;
    Json junctions = Json::array();
    for (const auto &jn : plan.junctions) {
        Json stages = Json::array();
        for (const auto &st : jn.stages) {
            stages.push_back({{"label", st.label},
                              {"pair", {st.pair.i, st.pair.j}},
                              {"aux_ports", {st.aux.first_i, st.aux.first_j, st.aux.second_i, st.aux.second_j}},
                              {"analysis_ports", {st.analysis_x, st.analysis_y}}});
        }
        junctions.push_back({{"label", jn.label},
                             {"left_photon", jn.left_photon},
                             {"right_photon", jn.right_photon},
                             {"stages", std::move(stages)}});
    }
    j["junctions"] = std::move(junctions);
    j["odd_reduction"] = plan.odd_reduction;
    j["circuit"] = circuit_to_json(plan.circuit);
    return j;
}

Json summary_to_json(const ResourceSummary &s) {
    Json eta2 = Json::array();
    for (const auto &e : s.eta2) {
        eta2.push_back(to_string(e));
    }
    return {{"d", s.d},
            {"n", s.n},
            {"epr_count", s.epr_count},
            {"aux_count", s.aux_count},
            {"eta1", to_string(s.eta1)},
            {"eta2", std::move(eta2)},
            {"predicted_prob_ff", to_string(s.predicted_prob_ff)},
            {"predicted_prob_ff_value", to_double(s.predicted_prob_ff)},
            {"predicted_prob_filtered", to_string(s.predicted_prob_filtered)},
            {"predicted_prob_filtered_value", to_double(s.predicted_prob_filtered)}};
}

std::string summary_csv_header() {
    return "d,n,epr_count,aux_count,eta1,predicted_prob_ff,predicted_prob_filtered";
}

std::string summary_csv_row(const ResourceSummary &s) {
    std::ostringstream os;
    os << s.d << ',' << s.n << ',' << s.epr_count << ',' << s.aux_count << ',' << to_string(s.eta1) << ','
       << to_string(s.predicted_prob_ff) << ',' << to_string(s.predicted_prob_filtered);
    return os.str();
}

}  // namespace ghzforge
