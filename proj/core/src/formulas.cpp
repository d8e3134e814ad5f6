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

#include "ghzforge/formulas.hpp"

#include <cmath>

#include "ghzforge/error.hpp"

namespace ghzforge {

namespace {

std::int64_t choose2(std::int64_t k) {
    return k * (k - 1) / 2;
}

/// d^2 * eta1 as an integer: the number of junction terms left after step i.
std::int64_t step_one_survivors(int d) {
    const std::int64_t even = (d + 1) / 2;
    const std::int64_t odd = d / 2;
    return static_cast<std::int64_t>(d) * d - 2 * even * odd;
}

}  // namespace

void require_valid_parameters(int d, int n) {
    if (d < 2) {
        throw Error(ErrorCode::InvalidParameters, "dimension d must be >= 2 (got " + std::to_string(d) + ")");
    }
    if (n < 2) {
        throw Error(ErrorCode::InvalidParameters, "photon number n must be >= 2 (got " + std::to_string(n) + ")");
    }
}

std::string to_string(const Rational &r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

double to_double(const Rational &r) {
    return r.convert_to<double>();
}

std::optional<std::pair<std::int64_t, std::int64_t>> rational_approximation(double x, double tol,
                                                                            std::int64_t max_denominator) {
    if (!std::isfinite(x)) {
        return std::nullopt;
    }
    // Convergents h/k of the continued fraction of x.
    long double h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
    long double r = x;
    for (int iter = 0; iter < 64; ++iter) {
        const long double a = std::floor(r);
        const long double h = a * h_prev + h_prev2;
        const long double k = a * k_prev + k_prev2;
        if (k > static_cast<long double>(max_denominator)) {
            return std::nullopt;
        }
        if (std::fabs(static_cast<long double>(x) - h / k) <= tol) {
            return std::pair{static_cast<std::int64_t>(h), static_cast<std::int64_t>(k)};
        }
        const long double frac = r - a;
        if (frac < 1e-18L) {
            return std::nullopt;
        }
        r = 1 / frac;
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
    }
    return std::nullopt;
}

std::int64_t aux_per_junction_binomial(int d) {
    return choose2((d + 1) / 2) + choose2(d / 2);
}

std::int64_t aux_per_junction_ceiling(int d) {
    const std::int64_t x = static_cast<std::int64_t>(d) * (d - 2);
    return (x + 3) / 4;
}

int junction_count(int n) {
    return (n + 1) / 2 - 1;
}

int epr_count(int n) {
    return (n + 1) / 2;
}

std::int64_t aux_count(int d, int n) {
    require_valid_parameters(d, n);
    const auto binomial = aux_per_junction_binomial(d);
    const auto ceiling = aux_per_junction_ceiling(d);
    if (binomial != ceiling) {
        throw Error(ErrorCode::InvalidParameters, "auxiliary count forms disagree for d=" + std::to_string(d));
    }
    return binomial * junction_count(n);
}

Rational eta1(int d) {
    require_valid_parameters(d, 2);
    return Rational(step_one_survivors(d), static_cast<std::int64_t>(d) * d);
}

Rational eta2(int d, std::int64_t k) {
    require_valid_parameters(d, 2);
    const std::int64_t stages = aux_per_junction_binomial(d);
    if (k < 1 || k > stages) {
        throw Error(ErrorCode::InvalidParameters, "stage index k=" + std::to_string(k) + " outside [1, " +
                                                      std::to_string(stages) + "] for d=" + std::to_string(d));
    }
    const std::int64_t a = step_one_survivors(d);
    return Rational(a - 2 * k, 2 * (a - 2 * (k - 1)));
}

Rational junction_success(int d) {
    require_valid_parameters(d, 2);
    const std::int64_t a = step_one_survivors(d);
    const std::int64_t stages = aux_per_junction_binomial(d);
    // Accumulate numerator and denominator separately; one reduction at the end.
    BigInt num = a;
    BigInt den = static_cast<std::int64_t>(d) * d;
    for (std::int64_t k = 1; k <= stages; ++k) {
        num *= a - 2 * k;
        den *= 2 * (a - 2 * (k - 1));
    }
    return Rational(num, den);
}

Rational predicted_prob(int d, int n, bool feedforward, OddMode odd_mode) {
    require_valid_parameters(d, n);
    const auto aux = aux_count(d, n);
    BigInt den = boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(epr_count(n) - 1));
    den <<= static_cast<unsigned>(feedforward ? aux : 2 * aux);
    if (n % 2 == 1 && odd_mode == OddMode::SingleOutcome) {
        den *= d;
    }
    return Rational(BigInt(1), den);
}

ResourceSummary summarize(int d, int n, OddMode odd_mode) {
    require_valid_parameters(d, n);
    ResourceSummary s;
    s.d = d;
    s.n = n;
    s.epr_count = epr_count(n);
    s.aux_count = aux_count(d, n);
    s.eta1 = eta1(d);
    for (std::int64_t k = 1; k <= aux_per_junction_binomial(d); ++k) {
        s.eta2.push_back(eta2(d, k));
    }
    s.predicted_prob_ff = predicted_prob(d, n, true, odd_mode);
    s.predicted_prob_filtered = predicted_prob(d, n, false, odd_mode);
    return s;
}

MCTClassification classify_terms(int d) {
    require_valid_parameters(d, 2);
    MCTClassification c;
    c.d = d;
    c.entries.assign(static_cast<std::size_t>(d), std::vector<TermClass>(static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            TermClass cls = i == j ? TermClass::Diagonal
                                   : ((i - j) % 2 != 0 ? TermClass::CrossParity : TermClass::SameParity);
            c.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cls;
            switch (cls) {
                case TermClass::Diagonal:
                    ++c.diagonal;
                    break;
                case TermClass::CrossParity:
                    ++c.cross_parity;
                    break;
                case TermClass::SameParity:
                    ++c.same_parity;
                    break;
            }
        }
    }
    return c;
}

}  // namespace ghzforge
