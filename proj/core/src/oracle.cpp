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

#include "ghzforge/oracle.hpp"

#include <cmath>
#include <complex>
#include <algorithm>
#include <numbers>

#include "ghzforge/error.hpp"
#include "ghzforge/reference.hpp"

namespace ghzforge {

namespace {

struct Table {
    int d = 0;
    int sources = 0;
    int aux = 0;  // auxiliary bits; y = 0 means path i, y = 1 means path j
    std::vector<std::complex<double>> amp;

    std::size_t path_states() const {
        std::size_t p = 1;
        for (int s = 0; s < sources; ++s) {
            p *= static_cast<std::size_t>(d);
        }
        return p;
    }
    std::vector<int> decode(std::size_t idx) const {
        std::vector<int> v(static_cast<std::size_t>(sources));
        idx %= path_states();
        for (int s = 0; s < sources; ++s) {
            v[static_cast<std::size_t>(s)] = static_cast<int>(idx % static_cast<std::size_t>(d));
            idx /= static_cast<std::size_t>(d);
        }
        return v;
    }
    std::uint64_t aux_bits(std::size_t idx) const {
        return idx / path_states();
    }
    double norm2() const {
        double s = 0;
        for (auto a : amp) {
            s += std::norm(a);
        }
        return s;
    }
};

std::vector<AuxPair> oracle_pairs(int d) {
    std::vector<AuxPair> pairs;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            if ((i + j) % 2 == 0) {
                pairs.push_back({i, j});
            }
        }
    }
    // Even pairs first, matching the default schedule.
    std::stable_partition(pairs.begin(), pairs.end(), [](AuxPair p) { return p.i % 2 == 0; });
    return pairs;
}

struct OracleResult {
    std::vector<TraceEntry> trace;
    std::optional<PhotonicState> state;
    double probability = 0;
};

OracleResult simulate(const ProtocolOptions &opts, bool feedforward) {
    const int d = opts.d;
    const int n = opts.n;
    const int m = (n + 1) / 2;
    const auto pairs = opts.aux_order.value_or(oracle_pairs(d));
    const int stages_total = (m - 1) * static_cast<int>(pairs.size());

    Table table;
    table.d = d;
    table.sources = m;
    table.aux = stages_total;
    const std::size_t paths = table.path_states();
    table.amp.assign(paths << stages_total, 0.0);

    std::vector<double> c(static_cast<std::size_t>(d), 1.0 / std::sqrt(static_cast<double>(d)));
    if (opts.coeffs) {
        c = *opts.coeffs;
    }
    for (std::size_t idx = 0; idx < paths; ++idx) {
        const auto v = table.decode(idx);
        double a = 1;
        for (int x : v) {
            a *= c[static_cast<std::size_t>(x)];
        }
        table.amp[idx] = a;
    }

    OracleResult out;
    double cumulative = 1;
    auto record = [&](const std::string &label, double before) {
        const double after = table.norm2();
        const double p = before > 0 ? after / before : 0;
        out.trace.push_back({label, p});
        cumulative *= p;
        return after > 0;
    };

    int stage_bit = 0;
    for (int t = 1; t < m; ++t) {
        const auto left = static_cast<std::size_t>(t - 1);
        const auto right = static_cast<std::size_t>(t);

        double before = table.norm2();
        for (std::size_t idx = 0; idx < table.amp.size(); ++idx) {
            const auto v = table.decode(idx);
            if (v[left] % 2 != v[right] % 2) {
                table.amp[idx] = 0;
            }
        }
        if (!record(checkpoint::junction_filtered(t), before)) {
            return out;
        }

        for (const AuxPair &pair : pairs) {
            const std::string prefix = checkpoint::aux_prefix(t, pair);
            const std::uint64_t bit = std::uint64_t{1} << stage_bit;
            // Attach the auxiliary pair: both branches at 1/sqrt 2.
            for (std::size_t idx = 0; idx < table.amp.size(); ++idx) {
                if ((table.aux_bits(idx) & bit) == 0 && table.amp[idx] != 0.0) {
                    const auto a = table.amp[idx] / std::numbers::sqrt2;
                    table.amp[idx] = a;
                    table.amp[idx + bit * paths] = a;
                }
            }
            before = table.norm2();
            for (std::size_t idx = 0; idx < table.amp.size(); ++idx) {
                const auto v = table.decode(idx);
                const bool y_j = (table.aux_bits(idx) & bit) != 0;
                if ((v[left] == pair.j) != y_j || (v[right] == pair.j) != y_j) {
                    table.amp[idx] = 0;
                }
            }
            if (!record(prefix + ".selected", before)) {
                return out;
            }

            // Diagonal-basis analysis of the pair: outcome amplitude 1/2,
            // sign -1 for HV and VH on the j branch. Branches are summed
            // coherently after erasing the auxiliary bit.
            before = table.norm2();
            std::vector<std::complex<double>> merged(table.amp.size(), 0.0);
            double kept = 0;
            for (int outcome = 0; outcome < 4; ++outcome) {
                const bool mixed = outcome == 1 || outcome == 2;
                const bool accepted = !mixed || feedforward;
                if (!accepted) {
                    continue;
                }
                std::vector<std::complex<double>> branch(table.amp.size(), 0.0);
                for (std::size_t idx = 0; idx < table.amp.size(); ++idx) {
                    if (table.amp[idx] == 0.0) {
                        continue;
                    }
                    const bool y_j = (table.aux_bits(idx) & bit) != 0;
                    double f = 0.5 * ((mixed && y_j) ? -1.0 : 1.0);
                    if (mixed && feedforward && table.decode(idx)[left] == pair.j) {
                        f = -f;
                    }
                    branch[y_j ? idx - bit * paths : idx] += table.amp[idx] * f;
                }
                double p = 0;
                for (auto a : branch) {
                    p += std::norm(a);
                }
                kept += p;
                if (outcome == 0) {
                    merged = std::move(branch);
                }
            }
            const double p_hh = [&] {
                double s = 0;
                for (auto a : merged) {
                    s += std::norm(a);
                }
                return s;
            }();
            const double scale = p_hh > 0 ? std::sqrt(kept / p_hh) : 0.0;
            for (auto &a : merged) {
                a *= scale;
            }
            table.amp = std::move(merged);
            if (!record(prefix + ".heralded", before)) {
                return out;
            }
            ++stage_bit;
        }
    }

    std::vector<std::complex<double>> final_amp(paths, 0.0);
    for (std::size_t idx = 0; idx < table.amp.size(); ++idx) {
        final_amp[idx % paths] += table.amp[idx];
    }

    if (n % 2 == 1) {
        double before = 0;
        for (auto a : final_amp) {
            before += std::norm(a);
        }
        std::vector<std::complex<double>> reduced(paths, 0.0);
        double kept = 0;
        const bool single = opts.odd_mode == OddMode::SingleOutcome;
        for (int k = 0; k < d; ++k) {
            if (single && k != 0) {
                continue;
            }
            std::vector<std::complex<double>> branch(paths, 0.0);
            for (std::size_t idx = 0; idx < paths; ++idx) {
                const int v0 = table.decode(idx)[0];
                const double angle = 2 * std::numbers::pi * v0 * k / d;
                auto f = std::polar(1 / std::sqrt(static_cast<double>(d)), -angle);
                if (!single) {
                    f *= std::polar(1.0, angle);
                }
                branch[idx] = final_amp[idx] * f;
            }
            for (std::size_t idx = 0; idx < paths; ++idx) {
                kept += std::norm(branch[idx]);
                reduced[idx] += k == 0 ? branch[idx] : 0.0;
            }
        }
        double p0 = 0;
        for (auto a : reduced) {
            p0 += std::norm(a);
        }
        const double scale = p0 > 0 ? std::sqrt(kept / p0) : 0.0;
        for (auto &a : reduced) {
            a *= scale;
        }
        final_amp = std::move(reduced);
        double after = 0;
        for (auto a : final_amp) {
            after += std::norm(a);
        }
        const double p = before > 0 ? after / before : 0;
        out.trace.push_back({checkpoint::kOddReduced, p});
        cumulative *= p;
        if (after <= 0) {
            return out;
        }
    }

    StateBuilder b;
    for (std::size_t idx = 0; idx < paths; ++idx) {
        if (final_amp[idx] == 0.0) {
            continue;
        }
        const auto v = table.decode(idx);
        std::vector<int> values;
        for (int p = n % 2; p < 2 * m; ++p) {
            values.push_back(v[static_cast<std::size_t>(p / 2)]);
        }
        b.add(path_ket(values, d), final_amp[idx]);
    }
    out.state = std::move(b).build(cumulative);
    out.probability = out.state ? cumulative : 0.0;
    return out;
}

}  // namespace

RunReport oracle_run(const ProtocolOptions &opts) {
    opts.validate();
    if (opts.d > kOracleMaxD || opts.n > kOracleMaxN) {
        throw Error(ErrorCode::OracleTooLarge, "oracle enumerates d <= " + std::to_string(kOracleMaxD) +
                                                   " and n <= " + std::to_string(kOracleMaxN) + " only");
    }
    OracleResult main = simulate(opts, opts.feedforward);
    OracleResult other = simulate(opts, !opts.feedforward);

    RunReport report;
    report.d = opts.d;
    report.n = opts.n;
    report.backend = Backend::Oracle;
    report.feedforward = opts.feedforward;
    report.odd_mode = opts.odd_mode;
    report.uniform_coefficients = opts.uniform();
    report.probability = main.probability;
    (opts.feedforward ? report.prob_feedforward : report.prob_filtered) = main.probability;
    (opts.feedforward ? report.prob_filtered : report.prob_feedforward) = other.probability;
    report.trace = std::move(main.trace);
    report.final_state = std::move(main.state);
    report.fidelity = fidelity(report.final_state, ghz_reference(opts.d, opts.n));
    if (opts.uniform()) {
        report.predicted = predicted_prob(opts.d, opts.n, opts.feedforward, opts.odd_mode);
    }
    return report;
}

}  // namespace ghzforge
