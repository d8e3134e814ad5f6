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

#include "ghzforge/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "ghzforge/error.hpp"
#include "ghzforge/measurement.hpp"
#include "ghzforge/oracle.hpp"
#include "ghzforge/reference.hpp"
#include "ghzforge/tolerance.hpp"

namespace ghzforge {

namespace checkpoint {

std::string junction_filtered(int junction) {
    return "j" + std::to_string(junction) + ".filtered";
}

std::string aux_prefix(int junction, AuxPair pair) {
    return "j" + std::to_string(junction) + ".aux" + std::to_string(pair.i) + "-" + std::to_string(pair.j);
}

}  // namespace checkpoint

namespace {

constexpr double kQuarterWave = std::numbers::pi / 4;  // HWP angle swapping H and V
constexpr double kDiagonal = std::numbers::pi / 8;     // HWP angle onto the diagonal basis

void check_coefficients(int d, std::span<const double> coeffs) {
    if (static_cast<int>(coeffs.size()) != d) {
        throw Error(ErrorCode::InvalidCoefficients,
                    "expected " + std::to_string(d) + " coefficients, got " + std::to_string(coeffs.size()));
    }
    double total = 0;
    for (double c : coeffs) {
        if (!std::isfinite(c)) {
            throw Error(ErrorCode::InvalidCoefficients, "coefficient is not finite");
        }
        total += c * c;
    }
    if (std::abs(total - 1) > tolerance()) {
        throw Error(ErrorCode::InvalidCoefficients, "sum of squared coefficients is " + std::to_string(total));
    }
}

std::vector<double> uniform_coefficients(int d) {
    return std::vector<double>(static_cast<std::size_t>(d), 1.0 / std::sqrt(static_cast<double>(d)));
}

/// Index within `ports` of the single photon found there, or -1.
int path_in(const FockTerm &t, std::span<const int> ports) {
    int found = -1;
    for (std::size_t p = 0; p < ports.size(); ++p) {
        const int c = t.count_in_port(ports[p]);
        if (c == 0) {
            continue;
        }
        if (c > 1 || found >= 0) {
            throw Error(ErrorCode::NotSingleOccupancy, "photon group holds more than one photon in " + t.to_string());
        }
        found = static_cast<int>(p);
    }
    return found;
}

FockTerm with_added(const FockTerm &t, std::initializer_list<Mode> modes) {
    std::vector<Occupation> occ(t.occupations().begin(), t.occupations().end());
    for (const Mode &m : modes) {
        occ.push_back({m, 1});
    }
    return FockTerm::from_occupations(std::move(occ));
}

PolarizationRule stage_rule(AuxPair pair) {
    return [pair](int path) { return path == pair.j ? Polarization::V : Polarization::H; };
}

Polarization all_h(int) {
    return Polarization::H;
}

}  // namespace

void ProtocolOptions::validate() const {
    require_valid_parameters(d, n);
    if (coeffs) {
        check_coefficients(d, *coeffs);
    }
    if (aux_order) {
        auto given = *aux_order;
        auto expected = same_parity_pairs(d);
        std::sort(given.begin(), given.end());
        std::sort(expected.begin(), expected.end());
        if (given != expected) {
            throw Error(ErrorCode::InvalidAuxPair, "aux stage order must be a permutation of the same-parity pairs");
        }
    }
}

std::vector<int> ProtocolPlan::photon_ports(int photon) const {
    std::vector<int> ports;
    const int d = options.d;
    for (int v = 0; v < d; ++v) {
        ports.push_back(path_port(photon, v, d));
    }
    return ports;
}

PhotonicState ProtocolPlan::input_state() const {
    const int d = options.d;
    const auto coeffs = options.coeffs.value_or(uniform_coefficients(d));
    PhotonicState state = PhotonicState::vacuum();
    for (int s = 0; s < epr_pair_count; ++s) {
        state = tensor(state, build_epr_source(d, coeffs, photon_ports(2 * s), photon_ports(2 * s + 1)));
    }
    return state;
}

PhotonicState build_epr_source(int d, std::span<const double> coeffs, std::span<const int> ports_a,
                               std::span<const int> ports_b) {
    require_valid_parameters(d, 2);
    if (static_cast<int>(ports_a.size()) != d || static_cast<int>(ports_b.size()) != d) {
        throw Error(ErrorCode::InvalidParameters, "each photon needs exactly d ports");
    }
    std::set<int> all(ports_a.begin(), ports_a.end());
    all.insert(ports_b.begin(), ports_b.end());
    if (static_cast<int>(all.size()) != 2 * d) {
        throw Error(ErrorCode::PortCollision, "source ports must be distinct");
    }
    check_coefficients(d, coeffs);
    std::vector<Ket> kets;
    for (int i = 0; i < d; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        kets.push_back({FockTerm::from_modes({{ports_a[ui], Polarization::H}, {ports_b[ui], Polarization::H}}),
                        coeffs[ui]});
    }
    return make_state(kets);
}

PhotonicState build_epr_source(int d, std::span<const int> ports_a, std::span<const int> ports_b) {
    require_valid_parameters(d, 2);
    return build_epr_source(d, uniform_coefficients(d), ports_a, ports_b);
}

PhotonicState build_aux_source(AuxPair pair, const AuxPorts &ports) {
    if (pair.i < 0 || pair.j <= pair.i) {
        throw Error(ErrorCode::InvalidAuxPair, "aux pair needs 0 <= i < j");
    }
    if ((pair.j - pair.i) % 2 != 0) {
        throw Error(ErrorCode::InvalidAuxPair,
                    "aux pair (" + std::to_string(pair.i) + "," + std::to_string(pair.j) + ") mixes parities");
    }
    std::set<int> distinct{ports.first_i, ports.first_j, ports.second_i, ports.second_j};
    if (distinct.size() != 4) {
        throw Error(ErrorCode::PortCollision, "aux source ports must be distinct");
    }
    const double amp = 1 / std::numbers::sqrt2;
    return make_state({
        {FockTerm::from_modes({{ports.first_i, Polarization::H}, {ports.second_i, Polarization::H}}), amp},
        {FockTerm::from_modes({{ports.first_j, Polarization::V}, {ports.second_j, Polarization::V}}), amp},
    });
}

Polarization parity_polarization(int path) noexcept {
    return path % 2 == 1 ? Polarization::V : Polarization::H;
}

PhotonicState polarization_tag(const PhotonicState &s, std::span<const int> group, const PolarizationRule &rule) {
    std::map<int, Polarization> target;
    for (std::size_t p = 0; p < group.size(); ++p) {
        const int port = group[p];
        if (s.occupies(Mode{port, Polarization::H}) && s.occupies(Mode{port, Polarization::V})) {
            throw Error(ErrorCode::PolarizationConflict,
                        "port " + std::to_string(port) + " carries both polarizations; tagging would merge them");
        }
        target[port] = rule(static_cast<int>(p));
    }
    auto out = transform_terms(
        s,
        [&](const FockTerm &t) -> std::optional<std::pair<FockTerm, Amplitude>> {
            std::vector<Occupation> occ(t.occupations().begin(), t.occupations().end());
            for (auto &o : occ) {
                if (auto it = target.find(o.mode.port); it != target.end()) {
                    o.mode.pol = it->second;
                }
            }
            return std::pair{FockTerm::from_occupations(std::move(occ)), Amplitude{1.0}};
        },
        s.branch_prob());
    return *std::move(out);
}

std::vector<AuxPair> same_parity_pairs(int d) {
    std::vector<AuxPair> pairs;
    for (int parity : {0, 1}) {
        for (int i = parity; i < d; i += 2) {
            for (int j = i + 2; j < d; j += 2) {
                pairs.push_back({i, j});
            }
        }
    }
    return pairs;
}

ProtocolPlan compile(const ProtocolOptions &opts) {
    opts.validate();
    const int d = opts.d;
    ProtocolPlan plan;
    plan.options = opts;
    plan.epr_pair_count = epr_count(opts.n);
    plan.aux_pair_count = aux_count(d, opts.n);
    plan.signal_photons = 2 * plan.epr_pair_count;
    plan.odd_reduction = opts.n % 2 == 1;

    const auto pairs = opts.aux_order.value_or(same_parity_pairs(d));
    const auto coeffs = opts.coeffs.value_or(uniform_coefficients(d));
    const Polarization reflected = opts.pbs_reflected;

    int next_port = plan.signal_photons * d;
    auto fresh = [&] { return next_port++; };
    std::vector<Polarization> port_pol(static_cast<std::size_t>(plan.signal_photons * d), Polarization::H);
    auto &steps = plan.circuit.steps;

    // Tagging is realized by a quarter-turn HWP on each port whose
    // polarization must change.
    auto retag = [&](const std::vector<int> &ports, const PolarizationRule &rule) {
        for (std::size_t p = 0; p < ports.size(); ++p) {
            const int port = ports[p];
            const Polarization want = rule(static_cast<int>(p));
            auto &have = port_pol[static_cast<std::size_t>(port)];
            if (have != want) {
                steps.push_back({Hwp{port, kQuarterWave}, ""});
                have = want;
            }
        }
    };

    for (int s = 0; s < plan.epr_pair_count; ++s) {
        steps.push_back({SourceStep{build_epr_source(d, coeffs, plan.photon_ports(2 * s), plan.photon_ports(2 * s + 1))},
                         s + 1 == plan.epr_pair_count ? checkpoint::kInput : ""});
    }

    for (int t = 1; t < plan.epr_pair_count; ++t) {
        Junction junction;
        junction.index = t;
        junction.left_photon = 2 * t - 1;
        junction.right_photon = 2 * t;
        junction.label = "j" + std::to_string(t);
        const auto left = plan.photon_ports(junction.left_photon);
        const auto right = plan.photon_ports(junction.right_photon);

        retag(left, parity_polarization);
        retag(right, parity_polarization);
        for (int p = 0; p < d; ++p) {
            steps.push_back({Pbs{left[static_cast<std::size_t>(p)], right[static_cast<std::size_t>(p)], reflected}, ""});
        }
        steps.push_back({PostSelectStep{{{left, right}}}, checkpoint::junction_filtered(t)});

        for (const AuxPair &pair : pairs) {
            AuxStage stage;
            stage.pair = pair;
            stage.aux = {fresh(), fresh(), fresh(), fresh()};
            stage.merged_left = fresh();
            stage.merged_first = fresh();
            stage.merged_right = fresh();
            stage.merged_second = fresh();
            stage.analysis_x = fresh();
            stage.analysis_y = fresh();
            stage.label = checkpoint::aux_prefix(t, pair);
            const auto ui = static_cast<std::size_t>(pair.i);
            const auto uj = static_cast<std::size_t>(pair.j);
            const auto &aux = stage.aux;

            retag(left, stage_rule(pair));
            retag(right, stage_rule(pair));
            steps.push_back({SourceStep{build_aux_source(pair, aux)}, stage.label + ".joined"});

            // Each arm meets its auxiliary photon on a PBS; beam displacers fold
            // paths i (H) and j (V) into one beam on either side and unfold after.
            auto interfere = [&](const std::vector<int> &arm, int aux_i, int aux_j, int merged_arm, int merged_aux) {
                steps.push_back({BdMerge{arm[ui], arm[uj], merged_arm}, ""});
                steps.push_back({BdMerge{aux_i, aux_j, merged_aux}, ""});
                steps.push_back({Pbs{merged_arm, merged_aux, reflected}, ""});
                steps.push_back({BdSplit{merged_arm, arm[ui], arm[uj]}, ""});
                steps.push_back({BdSplit{merged_aux, aux_i, aux_j}, ""});
            };
            interfere(left, aux.first_i, aux.first_j, stage.merged_left, stage.merged_first);
            interfere(right, aux.second_i, aux.second_j, stage.merged_right, stage.merged_second);
            steps.push_back({PostSelectStep{{{left, right, {aux.first_i, aux.first_j}, {aux.second_i, aux.second_j}}}},
                             stage.label + ".selected"});

            retag(left, all_h);
            retag(right, all_h);
            steps.push_back({BdMerge{aux.first_i, aux.first_j, stage.analysis_x}, ""});
            steps.push_back({Hwp{stage.analysis_x, kDiagonal}, ""});
            steps.push_back({BdMerge{aux.second_i, aux.second_j, stage.analysis_y}, ""});
            steps.push_back({Hwp{stage.analysis_y, kDiagonal}, stage.label + ".analyzed"});

            PolarizationAnalysisStep pas;
            pas.port_x = stage.analysis_x;
            pas.port_y = stage.analysis_y;
            pas.accept = {"HH", "VV"};
            if (opts.feedforward) {
                pas.corrections = pas_phase_rule(left[uj]);
            }
            steps.push_back({std::move(pas), stage.label + ".heralded"});
            junction.stages.push_back(std::move(stage));
        }
        retag(left, all_h);
        retag(right, all_h);
        plan.junctions.push_back(std::move(junction));
    }

    if (plan.odd_reduction) {
        FourierStep f;
        f.ports = plan.photon_ports(0);
        if (opts.odd_mode == OddMode::SingleOutcome) {
            f.accept = {"0"};
        } else {
            f.corrections = fourier_phase_rule(plan.photon_ports(1));
        }
        steps.push_back({std::move(f), checkpoint::kOddReduced});
    }

    plan.circuit.port_count = next_port;
    plan.circuit.validate();
    return plan;
}

double BackendRun::total_probability() const {
    if (!state) {
        return 0;
    }
    double p = 1;
    for (const auto &t : trace) {
        p *= t.probability;
    }
    return p;
}

namespace {

/// Keeps terms accepted by `rule`; the rule may also rewrite the term.
/// Returns false (and clears the state) when nothing survives.
bool apply_filter(std::optional<PhotonicState> &state, BackendRun &run, const std::string &label,
                  const std::function<std::optional<FockTerm>(const FockTerm &)> &rule) {
    const double before = state->norm2();
    StateBuilder b;
    b.reserve(state->size());
    for (const auto &[t, a] : state->terms()) {
        if (auto kept = rule(t)) {
            b.add(*std::move(kept), a);
        }
    }
    auto next = std::move(b).build();
    const double p = next ? next->norm2() / before : 0.0;
    run.trace.push_back({label, p});
    if (!next) {
        state.reset();
        return false;
    }
    state = next->with_branch_prob(state->branch_prob() * p);
    run.snapshots.push_back({label, *state});
    return true;
}

bool apply_herald(std::optional<PhotonicState> &state, BackendRun &run, const std::string &label, Selection sel) {
    run.trace.push_back({label, sel.probability});
    state = std::move(sel.state);
    if (!state) {
        return false;
    }
    run.snapshots.push_back({label, *state});
    return true;
}

BackendRun run_rules(const ProtocolPlan &plan, bool feedforward) {
    const int d = plan.options.d;
    BackendRun run;
    std::optional<PhotonicState> state = plan.input_state();
    run.snapshots.push_back({checkpoint::kInput, *state});

    for (const Junction &junction : plan.junctions) {
        const auto left = plan.photon_ports(junction.left_photon);
        const auto right = plan.photon_ports(junction.right_photon);

        state = polarization_tag(*state, left, parity_polarization);
        state = polarization_tag(*state, right, parity_polarization);
        // Step i: mismatched parities leave both photons on one side of the
        // PBS. Two V photons swap arms.
        const bool alive = apply_filter(state, run, checkpoint::junction_filtered(junction.index),
                                        [&](const FockTerm &t) -> std::optional<FockTerm> {
                                            const int x = path_in(t, left);
                                            const int y = path_in(t, right);
                                            if (x % 2 != y % 2) {
                                                return std::nullopt;
                                            }
                                            if (x % 2 == 0) {
                                                return t;
                                            }
                                            const auto ux = static_cast<std::size_t>(x);
                                            const auto uy = static_cast<std::size_t>(y);
                                            FockTerm rest = t.without({left[ux], Polarization::V})
                                                                .without({right[uy], Polarization::V});
                                            return with_added(rest, {{right[ux], Polarization::V},
                                                                     {left[uy], Polarization::V}});
                                        });
        if (!alive) {
            return run;
        }

        for (const AuxStage &stage : junction.stages) {
            const AuxPair pair = stage.pair;
            const auto &aux = stage.aux;
            const int first[] = {aux.first_i, aux.first_j};
            const int second[] = {aux.second_i, aux.second_j};

            state = polarization_tag(*state, left, stage_rule(pair));
            state = polarization_tag(*state, right, stage_rule(pair));
            state = tensor(*state, build_aux_source(pair, aux));
            run.snapshots.push_back({stage.label + ".joined", *state});

            // An arm photon reaches its auxiliary photon's PBS only on paths i
            // and j. Exactly one photon per side survives iff the arm sits on
            // path j exactly when the auxiliary photon does.
            if (!apply_filter(state, run, stage.label + ".selected", [&](const FockTerm &t) -> std::optional<FockTerm> {
                    const bool left_j = path_in(t, left) == pair.j;
                    const bool right_j = path_in(t, right) == pair.j;
                    const bool first_j = path_in(t, first) == 1;
                    const bool second_j = path_in(t, second) == 1;
                    if (left_j != first_j || right_j != second_j) {
                        return std::nullopt;
                    }
                    return t;
                })) {
                return run;
            }

            state = polarization_tag(*state, left, all_h);
            state = polarization_tag(*state, right, all_h);

            // Merged auxiliary beams on the diagonal basis: the i branch gives
            // (HH+HV+VH+VV)/2, the j branch (HH-HV-VH+VV)/2.
            StateBuilder analyzed;
            analyzed.reserve(state->size() * 4);
            for (const auto &[t, a] : state->terms()) {
                const bool on_j = path_in(t, first) == 1;
                const FockTerm rest = on_j ? t.without({aux.first_j, Polarization::V}).without({aux.second_j, Polarization::V})
                                           : t.without({aux.first_i, Polarization::H}).without({aux.second_i, Polarization::H});
                for (Polarization px : {Polarization::H, Polarization::V}) {
                    for (Polarization py : {Polarization::H, Polarization::V}) {
                        const double sign = (on_j && px != py) ? -1.0 : 1.0;
                        analyzed.add(with_added(rest, {{stage.analysis_x, px}, {stage.analysis_y, py}}), a * (0.5 * sign));
                    }
                }
            }
            state = std::move(analyzed).build(state->branch_prob());
            run.snapshots.push_back({stage.label + ".analyzed", *state});

            const CorrectionRule corrections =
                feedforward ? pas_phase_rule(left[static_cast<std::size_t>(pair.j)]) : CorrectionRule{};
            const double bp = state->branch_prob();
            if (!apply_herald(state, run, stage.label + ".heralded",
                              herald(polarization_pair_branches(*state, stage.analysis_x, stage.analysis_y),
                                     {"HH", "VV"}, corrections, bp))) {
                return run;
            }
        }
        state = polarization_tag(*state, left, all_h);
        state = polarization_tag(*state, right, all_h);
    }

    if (plan.odd_reduction) {
        const auto measured = plan.photon_ports(0);
        const auto partner = plan.photon_ports(1);
        const bool single = plan.options.odd_mode == OddMode::SingleOutcome;
        const double bp = state->branch_prob();
        if (!apply_herald(state, run, checkpoint::kOddReduced,
                          herald(fourier_branches(*state, measured), single ? std::vector<std::string>{"0"}
                                                                             : std::vector<std::string>{},
                                 single ? CorrectionRule{} : fourier_phase_rule(partner), bp))) {
            return run;
        }
    }
    (void)d;
    run.state = std::move(state);
    return run;
}

BackendRun run_elements(const ProtocolPlan &plan) {
    CircuitResult result = run_circuit(PhotonicState::vacuum(), plan.circuit);
    return BackendRun{std::move(result.state), std::move(result.trace), std::move(result.snapshots)};
}

/// The measured photon 0 leaves; shift the rest down to the standard layout.
void finish_output(BackendRun &run, bool odd, int d) {
    if (!run.state) {
        return;
    }
    if (odd) {
        run.state = relabel_ports(*run.state, [d](int p) { return p - d; });
    }
    run.snapshots.push_back({checkpoint::kOutput, *run.state});
}

}  // namespace

BackendRun run_backend(const ProtocolPlan &plan, Backend backend, bool feedforward) {
    BackendRun run;
    try {
        if (backend == Backend::Element) {
            if (feedforward == plan.options.feedforward) {
                run = run_elements(plan);
            } else {
                auto opts = plan.options;
                opts.feedforward = feedforward;
                run = run_elements(compile(opts));
            }
        } else if (backend == Backend::Rule) {
            run = run_rules(plan, feedforward);
        } else {
            throw Error(ErrorCode::InvalidParameters, "run_backend handles the rule and element backends only");
        }
    } catch (const Error &e) {
        if (e.code() != ErrorCode::EmptyState) {
            throw;
        }
        run.state.reset();
    }
    finish_output(run, plan.odd_reduction, plan.options.d);
    return run;
}

RunReport execute(const ProtocolPlan &plan, Backend backend) {
    const auto &opts = plan.options;
    if (backend == Backend::Oracle) {
        return oracle_run(opts);
    }
    RunReport report;
    report.d = opts.d;
    report.n = opts.n;
    report.backend = backend;
    report.feedforward = opts.feedforward;
    report.odd_mode = opts.odd_mode;
    report.uniform_coefficients = opts.uniform();

    BackendRun main = run_backend(plan, backend, opts.feedforward);
    BackendRun other = run_backend(plan, backend, !opts.feedforward);
    report.probability = main.total_probability();
    (opts.feedforward ? report.prob_feedforward : report.prob_filtered) = report.probability;
    (opts.feedforward ? report.prob_filtered : report.prob_feedforward) = other.total_probability();
    report.trace = std::move(main.trace);
    report.final_state = std::move(main.state);
    report.fidelity = fidelity(report.final_state, ghz_reference(opts.d, opts.n));
    if (opts.uniform()) {
        report.predicted = predicted_prob(opts.d, opts.n, opts.feedforward, opts.odd_mode);
    }
    return report;
}

RunReport reduce_to_odd(const PhotonicState &s, int d, OddMode mode) {
    require_valid_parameters(d, 2);
    const auto photons = s.photon_number();
    if (!photons || *photons < 3) {
        throw Error(ErrorCode::InvalidParameters, "odd reduction needs a state with at least three photons");
    }
    std::vector<int> measured;
    std::vector<int> partner;
    for (int v = 0; v < d; ++v) {
        measured.push_back(path_port(0, v, d));
        partner.push_back(path_port(1, v, d));
    }
    const bool single = mode == OddMode::SingleOutcome;
    Selection sel = herald(fourier_branches(s, measured), single ? std::vector<std::string>{"0"} : std::vector<std::string>{},
                           single ? CorrectionRule{} : fourier_phase_rule(partner), s.branch_prob());

    RunReport report;
    report.d = d;
    report.n = *photons - 1;
    report.feedforward = !single;
    report.odd_mode = mode;
    report.probability = sel.probability;
    (single ? report.prob_filtered : report.prob_feedforward) = sel.probability;
    report.trace.push_back({checkpoint::kOddReduced, sel.probability});
    if (sel.state) {
        report.final_state = relabel_ports(*sel.state, [d](int p) { return p - d; });
    }
    report.fidelity = fidelity(report.final_state, ghz_reference(d, report.n));
    report.predicted = single ? Rational(1, d) : Rational(1);
    return report;
}

}  // namespace ghzforge
