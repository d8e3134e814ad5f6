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

#ifndef GHZFORGE_FORMULAS_HPP
#define GHZFORGE_FORMULAS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ghzforge {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class OddMode { SingleOutcome, FullFourier };

std::string to_string(const Rational &r);
double to_double(const Rational &r);

/// Best rational p/q with q <= max_denominator approximating x within tol,
/// found from the continued-fraction expansion.
std::optional<std::pair<std::int64_t, std::int64_t>> rational_approximation(double x, double tol,
                                                                            std::int64_t max_denominator = 1'000'000'000);

/// Same-parity path pairs per junction, C(ceil(d/2),2) + C(floor(d/2),2).
std::int64_t aux_per_junction_binomial(int d);
/// ceil(d(d-2)/4).
std::int64_t aux_per_junction_ceiling(int d);

/// Number of junctions, ceil(n/2) - 1.
int junction_count(int n);
int epr_count(int n);

/// Auxiliary pairs for an n-photon run: both per-junction forms are computed
/// and must agree.
std::int64_t aux_count(int d, int n);

/// Step-i survival probability 1 - 2 ceil(d/2) floor(d/2) / d^2.
Rational eta1(int d);
/// Survival of the k-th auxiliary stage, 1 <= k <= aux_per_junction(d):
/// (d^2 eta1 - 2k) / (2 (d^2 eta1 - 2(k-1))).
Rational eta2(int d, std::int64_t k);
/// eta1 * prod_k eta2(k) over one junction, multiplied out exactly.
Rational junction_success(int d);

/// Closed-form success probability.
///   feedforward: d^(1 - ceil(n/2)) * 2^-N
///   filtered:    an extra 1/2 per auxiliary pair (HH/VV heralds only)
/// For odd n the single-outcome reduction contributes an extra 1/d; the full
/// Fourier reduction with feedforward contributes 1.
Rational predicted_prob(int d, int n, bool feedforward, OddMode odd_mode = OddMode::FullFourier);

struct ResourceSummary {
    int d = 0;
    int n = 0;
    int epr_count = 0;
    std::int64_t aux_count = 0;
    Rational eta1;
    std::vector<Rational> eta2;
    Rational predicted_prob_ff;
    Rational predicted_prob_filtered;
};

/// Throws InvalidParameters for d < 2 or n < 2.
ResourceSummary summarize(int d, int n, OddMode odd_mode = OddMode::FullFourier);

enum class TermClass { Diagonal, CrossParity, SameParity };

struct MCTClassification {
    int d = 0;
    /// entries[i][j] classifies the junction term |i i j j>.
    std::vector<std::vector<TermClass>> entries;
    int diagonal = 0;
    int cross_parity = 0;
    int same_parity = 0;
};

MCTClassification classify_terms(int d);

void require_valid_parameters(int d, int n);

}  // namespace ghzforge

#endif
