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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <thread>

#include "ghzforge/error.hpp"
#include "ghzforge/formulas.hpp"
#include "ghzforge/oracle.hpp"
#include "ghzforge/protocol.hpp"
#include "ghzforge/reference.hpp"
#include "ghzforge/serialize.hpp"
#include "ghzforge/tolerance.hpp"
#include "ghzforge/verification.hpp"

namespace ghzforge::cli {

namespace {

constexpr const char *kCrlf = "\r\n";

struct Flags {
    int d = 3;
    int n = 4;
    bool feedforward = false;
    std::string odd_mode = "single";
    std::string backend = "rule";
    std::string coeffs;
    std::string format;
    std::string out_path;
    std::string circuit_path;
    std::string state_path;
    std::string d_range = "2..4";
    std::string n_range = "4..6";
    bool json = false;
    std::string pbs_reflect = "V";
};

/// Raised for I/O failures; mapped to the runtime exit code.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int parse_int(const std::string &text) {
    int value = 0;
    const char *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorCode::ParseError, "not an integer: '" + text + "'");
    }
    return value;
}

double parse_double(const std::string &text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::logic_error &) {
        throw Error(ErrorCode::ParseError, "not a number: '" + text + "'");
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Json parse_json(const std::string &text, const std::string &what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorCode::ParseError, what + ": " + e.what());
    }
}

void emit(const std::string &text, const std::string &path, std::ostream &out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot write " + path);
    }
    f << text;
    if (!f) {
        throw IoError("write failed for " + path);
    }
}

std::string dump(const Json &j) {
    return j.dump(2) + "\n";
}

std::string num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

ProtocolOptions options_from(const Flags &f) {
    ProtocolOptions o;
    o.d = f.d;
    o.n = f.n;
    o.feedforward = f.feedforward;
    o.odd_mode = parse_odd_mode(f.odd_mode);
    if (!f.coeffs.empty()) {
        o.coeffs = parse_coeffs(f.coeffs);
    }
    return o;
}

std::string report_csv(const RunReport &r) {
    std::ostringstream os;
    os << "d,n,backend,feedforward,odd_mode,probability,prob_filtered,prob_feedforward,predicted_prob,fidelity,match"
       << kCrlf;
    os << r.d << ',' << r.n << ',' << backend_name(r.backend) << ',' << (r.feedforward ? "true" : "false") << ','
       << odd_mode_name(r.odd_mode) << ',' << num(r.probability) << ',' << num(r.prob_filtered) << ','
       << num(r.prob_feedforward) << ',' << (r.predicted ? to_string(*r.predicted) : "") << ',' << num(r.fidelity)
       << ',' << (r.matches() ? "true" : "false") << kCrlf;
    return os.str();
}

std::string report_pretty(const RunReport &r) {
    std::ostringstream os;
    os << "d=" << r.d << " n=" << r.n << " backend=" << backend_name(r.backend)
       << " feedforward=" << (r.feedforward ? "on" : "off") << " odd_mode=" << odd_mode_name(r.odd_mode) << "\n";
    os << "  probability       " << probability_string(r.probability) << " (" << num(r.probability) << ")\n";
    os << "  predicted         " << (r.predicted ? to_string(*r.predicted) : "n/a (non-uniform input)") << "\n";
    os << "  prob_filtered     " << probability_string(r.prob_filtered) << "\n";
    os << "  prob_feedforward  " << probability_string(r.prob_feedforward) << "\n";
    os << "  fidelity          " << num(r.fidelity) << "\n";
    os << "  trace\n";
    for (const auto &t : r.trace) {
        os << "    " << t.label << "  " << probability_string(t.probability) << "\n";
    }
    os << "  match             " << (r.matches() ? "yes" : "no") << "\n";
    return os.str();
}

std::string format_report(const RunReport &r, const std::string &format) {
    if (format == "csv") {
        return report_csv(r);
    }
    if (format == "pretty") {
        return report_pretty(r);
    }
    return dump(report_to_json(r));
}

int cmd_plan(const Flags &f, std::ostream &out) {
    ProtocolOptions o = options_from(f);
    const auto plan = compile(o);
    const auto summary = summarize(o.d, o.n, o.odd_mode);
    std::string text;
    if (f.format == "csv") {
        text = summary_csv_header() + kCrlf + summary_csv_row(summary) + kCrlf;
    } else if (f.format == "pretty") {
        std::ostringstream os;
        os << "d=" << o.d << " n=" << o.n << "\n";
        os << "  pair sources       " << summary.epr_count << "\n";
        os << "  auxiliary pairs    " << summary.aux_count << "\n";
        os << "  eta1               " << to_string(summary.eta1) << "\n";
        for (std::size_t k = 0; k < summary.eta2.size(); ++k) {
            os << "  eta2(" << k + 1 << ")            " << to_string(summary.eta2[k]) << "\n";
        }
        os << "  p (feedforward)    " << to_string(summary.predicted_prob_ff) << "\n";
        os << "  p (filtered)       " << to_string(summary.predicted_prob_filtered) << "\n";
        os << "  circuit steps      " << plan.circuit.steps.size() << " over " << plan.circuit.port_count
           << " ports\n";
        text = os.str();
    } else {
        Json j = summary_to_json(summary);
        j["plan"] = plan_to_json(plan);
        text = dump(j);
    }
    emit(text, f.out_path, out);
    return kOk;
}

int cmd_run_circuit(const Flags &f, std::ostream &out) {
    const Circuit circuit = circuit_from_json(parse_json(read_file(f.circuit_path), f.circuit_path));
    const auto result = run_circuit(PhotonicState::vacuum(), circuit);
    const double fid = fidelity(result.state, ghz_reference(f.d, f.n));
    Json j;
    j["circuit"] = f.circuit_path;
    j["d"] = f.d;
    j["n"] = f.n;
    j["probability"] = result.total_probability();
    j["probability_exact"] = probability_string(result.total_probability());
    j["fidelity"] = fid;
    j["fidelity_ok"] = fid >= 1 - kReportFidelityThreshold;
    Json trace = Json::array();
    for (const auto &t : result.trace) {
        trace.push_back({{"label", t.label}, {"prob", t.probability}});
    }
    j["trace"] = std::move(trace);
    j["final_state"] = result.state ? state_to_json(*result.state) : Json(nullptr);
    emit(dump(j), f.out_path, out);
    return fid >= 1 - kReportFidelityThreshold ? kOk : kMismatch;
}

int cmd_run(const Flags &f, std::ostream &out) {
    if (!f.circuit_path.empty()) {
        return cmd_run_circuit(f, out);
    }
    const auto plan = compile(options_from(f));
    const RunReport report = execute(plan, parse_backend(f.backend));
    emit(format_report(report, f.format), f.out_path, out);
    return report.matches() ? kOk : kMismatch;
}

struct SweepRow {
    ResourceSummary summary;
    std::string status;
    std::optional<RunReport> report;
    std::string error;
};

SweepRow sweep_cell(const Flags &f, int d, int n) {
    SweepRow row;
    const OddMode mode = parse_odd_mode(f.odd_mode);
    row.summary = summarize(d, n, mode);
    const Backend backend = parse_backend(f.backend);
    const bool too_large = d > kSweepMaxD || n > kSweepMaxN ||
                           (backend == Backend::Oracle && (d > kOracleMaxD || n > kOracleMaxN));
    if (too_large) {
        row.status = "skipped";
        return row;
    }
    try {
        ProtocolOptions o;
        o.d = d;
        o.n = n;
        o.feedforward = f.feedforward;
        o.odd_mode = mode;
        row.report = execute(compile(o), backend);
        row.status = "ok";
    } catch (const std::exception &e) {
        row.status = "error";
        row.error = e.what();
    }
    return row;
}

int cmd_sweep(const Flags &f, std::ostream &out, std::ostream &err) {
    const Range dr = parse_range(f.d_range);
    const Range nr = parse_range(f.n_range);
    parse_backend(f.backend);
    parse_odd_mode(f.odd_mode);
    std::vector<std::pair<int, int>> cells;
    for (int d = dr.lo; d <= dr.hi; ++d) {
        for (int n = nr.lo; n <= nr.hi; ++n) {
            require_valid_parameters(d, n);
            cells.emplace_back(d, n);
        }
    }

    // Cells are independent; a fixed pool pulls them off a shared counter.
    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::min<std::size_t>(cells.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next++; i < cells.size(); i = next++) {
                rows[i] = sweep_cell(f, cells[i].first, cells[i].second);
            }
        }));
    }
    for (auto &p : pool) {
        p.get();
    }

    bool all_match = true;
    bool any_error = false;
    std::string text;
    if (f.format == "json" || f.format == "pretty") {
        Json arr = Json::array();
        for (const auto &row : rows) {
            Json j = summary_to_json(row.summary);
            j["status"] = row.status;
            if (row.report) {
                j["result"] = report_to_json(*row.report);
            }
            if (!row.error.empty()) {
                j["error"] = row.error;
            }
            arr.push_back(std::move(j));
        }
        text = dump(arr);
    } else {
        std::ostringstream os;
        os << summary_csv_header() << ",status,prob_filtered,prob_feedforward,fidelity,match" << kCrlf;
        for (const auto &row : rows) {
            os << summary_csv_row(row.summary) << ',' << row.status << ',';
            if (row.report) {
                os << num(row.report->prob_filtered) << ',' << num(row.report->prob_feedforward) << ','
                   << num(row.report->fidelity) << ',' << (row.report->matches() ? "true" : "false");
            } else {
                os << ",,,";
            }
            os << kCrlf;
        }
        text = os.str();
    }
    for (const auto &row : rows) {
        if (row.report && !row.report->matches()) {
            all_match = false;
        }
        if (row.status == "error") {
            any_error = true;
            err << "d=" << row.summary.d << " n=" << row.summary.n << ": " << row.error << "\n";
        }
    }
    emit(text, f.out_path, out);
    if (any_error) {
        return kRuntime;
    }
    return all_match ? kOk : kMismatch;
}

int cmd_verify(const Flags &f, std::ostream &out) {
    VerifyOptions vo;
    if (f.pbs_reflect == "H") {
        vo.pbs_reflected = Polarization::H;
    }
    const auto report = run_verification(vo);
    std::string text;
    if (f.json || f.format == "json") {
        Json anchors = Json::array();
        for (const auto &a : report.anchors) {
            anchors.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
        }
        text = dump({{"passed", report.all_passed()}, {"failed", report.failed()}, {"anchors", std::move(anchors)}});
    } else {
        std::ostringstream os;
        std::size_t passed = 0;
        for (const auto &a : report.anchors) {
            os << (a.passed ? "[PASS] " : "[FAIL] ") << a.name << ": " << a.detail << "\n";
            passed += a.passed ? 1 : 0;
        }
        os << passed << "/" << report.anchors.size() << " anchors passed\n";
        for (const auto &name : report.failed()) {
            os << "failed: " << name << "\n";
        }
        text = os.str();
    }
    emit(text, f.out_path, out);
    return report.all_passed() ? kOk : kMismatch;
}

int cmd_reduce_odd(const Flags &f, std::ostream &out) {
    PhotonicState input = PhotonicState::vacuum();
    if (!f.state_path.empty()) {
        input = state_from_json(parse_json(read_file(f.state_path), f.state_path));
    } else {
        if (f.n % 2 != 0 || f.n < 4) {
            throw Error(ErrorCode::InvalidParameters, "reduce-odd simulates an even GHZ state; --n must be even and >= 4");
        }
        ProtocolOptions o;
        o.d = f.d;
        o.n = f.n;
        o.feedforward = true;
        const RunReport source = execute(compile(o));
        if (!source.final_state) {
            throw Error(ErrorCode::EmptyState, "GHZ preparation produced no state");
        }
        input = *source.final_state;
    }
    const RunReport report = reduce_to_odd(normalize(input), f.d, parse_odd_mode(f.odd_mode));
    emit(format_report(report, f.format), f.out_path, out);
    return report.matches() ? kOk : kMismatch;
}

bool is_usage_error(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidParameters:
        case ErrorCode::InvalidCoefficients:
        case ErrorCode::InvalidAuxPair:
        case ErrorCode::ParseError:
            return true;
        default:
            return false;
    }
}

}  // namespace

Range parse_range(const std::string &text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const int v = parse_int(text);
        return {v, v};
    }
    return {parse_int(text.substr(0, dots)), parse_int(text.substr(dots + 2))};
}

std::vector<double> parse_coeffs(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(item));
    }
    if (out.empty()) {
        throw Error(ErrorCode::ParseError, "empty coefficient list");
    }
    return out;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
            const std::optional<std::string> &eps) {
    Flags f;
    CLI::App app{"ghzforge: linear-optics GHZ state preparation simulator"};
    app.name("ghzforge");
    app.require_subcommand(1, 1);

    const std::vector<std::string> formats{"json", "csv", "pretty"};
    const std::vector<std::string> backends{"rule", "element", "oracle"};
    const std::vector<std::string> modes{"single", "fourier"};

    auto add_dn = [&](CLI::App *sub) {
        sub->add_option("--d", f.d, "Qudit dimension (>= 2)");
        sub->add_option("--n", f.n, "Photon count (>= 2)");
    };
    std::map<const CLI::App *, std::string> default_format;
    auto add_output = [&](CLI::App *sub, const std::string &fallback) {
        default_format[sub] = fallback;
        sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember(formats));
        sub->add_option("--out", f.out_path, "Write output to PATH instead of stdout");
    };

    auto *plan = app.add_subcommand("plan", "Resource counts and the compiled circuit");
    add_dn(plan);
    plan->add_flag("--feedforward", f.feedforward, "Compile the outcome-conditioned phase corrections");
    plan->add_option("--odd-mode", f.odd_mode, "Odd-n reduction mode")->check(CLI::IsMember(modes));
    add_output(plan, "json");

    auto *run = app.add_subcommand("run", "Execute the protocol and report fidelity and probability");
    add_dn(run);
    run->add_flag("--feedforward", f.feedforward, "Apply outcome-conditioned phase corrections");
    run->add_option("--odd-mode", f.odd_mode, "Odd-n reduction mode")->check(CLI::IsMember(modes));
    run->add_option("--backend", f.backend, "Execution backend")->check(CLI::IsMember(backends));
    run->add_option("--coeffs", f.coeffs, "Source coefficients c0,c1,...");
    run->add_option("--circuit", f.circuit_path, "Run a circuit JSON file instead of the compiled plan");
    add_output(run, "json");

    auto *sweep = app.add_subcommand("sweep", "Run a (d, n) grid in parallel");
    sweep->add_option("--d", f.d_range, "Range a..b");
    sweep->add_option("--n", f.n_range, "Range a..b");
    sweep->add_flag("--feedforward", f.feedforward, "Apply outcome-conditioned phase corrections");
    sweep->add_option("--odd-mode", f.odd_mode, "Odd-n reduction mode")->check(CLI::IsMember(modes));
    sweep->add_option("--backend", f.backend, "Execution backend")->check(CLI::IsMember(backends));
    add_output(sweep, "csv");

    auto *verify = app.add_subcommand("verify", "Golden regression anchors");
    verify->add_flag("--json", f.json, "Machine-readable results");
    verify->add_option("--pbs-reflect", f.pbs_reflect, "")->check(CLI::IsMember({"H", "V"}))->group("");
    add_output(verify, "pretty");

    auto *reduce = app.add_subcommand("reduce-odd", "Measure photon 0 of an even GHZ state");
    add_dn(reduce);
    reduce->add_option("--odd-mode", f.odd_mode, "Reduction mode")->check(CLI::IsMember(modes));
    reduce->add_option("--state", f.state_path, "Input state JSON (default: simulate GHZ(d, n))");
    add_output(reduce, "json");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kUsage;
    }

    for (const auto &[sub, fallback] : default_format) {
        if (sub->parsed() && f.format.empty()) {
            f.format = fallback;
        }
    }

    try {
        std::optional<ScopedTolerance> scoped;
        if (eps && !eps->empty()) {
            scoped.emplace(parse_double(*eps));
        }
        if (*plan) {
            return cmd_plan(f, out);
        }
        if (*run) {
            return cmd_run(f, out);
        }
        if (*sweep) {
            return cmd_sweep(f, out, err);
        }
        if (*verify) {
            return cmd_verify(f, out);
        }
        return cmd_reduce_odd(f, out);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return is_usage_error(e.code()) ? kUsage : kRuntime;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kRuntime;
    }
}

}  // namespace ghzforge::cli
