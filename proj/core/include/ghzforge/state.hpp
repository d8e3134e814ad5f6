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

#ifndef GHZFORGE_STATE_HPP
#define GHZFORGE_STATE_HPP

#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ghzforge {

enum class Polarization : std::uint8_t { H = 0, V = 1 };

char polarization_char(Polarization pol) noexcept;
Polarization flipped(Polarization pol) noexcept;

/// Single-photon degree of freedom: a spatial port plus a polarization.
/// Ordered port-major, then H before V.
struct Mode {
    int port = 0;
    Polarization pol = Polarization::H;

    auto operator<=>(const Mode &) const = default;
};

struct Occupation {
    Mode mode;
    int count = 0;

    auto operator<=>(const Occupation &) const = default;
};

/// A bosonic occupation-number basis ket. Stored as a strictly increasing list
/// of (mode, count >= 1); the empty list is the vacuum.
class FockTerm {
   public:
    FockTerm() = default;

    /// Builds the ket holding one photon per listed mode (repeats allowed).
    static FockTerm from_modes(std::vector<Mode> photons);
    /// Canonicalizes; duplicate modes are summed. Throws on count < 1 or port < 0.
    static FockTerm from_occupations(std::vector<Occupation> occupations);

    std::span<const Occupation> occupations() const noexcept {
        return occ_;
    }
    bool is_vacuum() const noexcept {
        return occ_.empty();
    }
    int photon_count() const noexcept;
    int count(Mode mode) const noexcept;
    int count_in_port(int port) const noexcept;
    int count_in_ports(std::span<const int> ports) const noexcept;
    /// Expanded multiset, one entry per photon, canonical order.
    std::vector<Mode> photons() const;

    /// Removes one photon from `mode`. Requires count(mode) >= 1.
    FockTerm without(Mode mode) const;

    std::string to_string() const;

    auto operator<=>(const FockTerm &) const = default;

   private:
    std::vector<Occupation> occ_;
};

using Amplitude = std::complex<double>;

struct Ket {
    FockTerm term;
    Amplitude amplitude;
};

/// Sparse superposition of Fock terms. Immutable once built.
///
/// Terms are kept sorted by FockTerm with no duplicates. An amplitude is
/// pruned when it falls below tolerance() times the largest contribution that
/// went into the build (capped at 1), so exact cancellations vanish while tiny
/// post-selected branches survive. Amplitudes are not renormalized between pipeline stages: the
/// squared norm of a branch is the probability of reaching it from a
/// normalized input, and branch_prob() carries the same product of stage
/// probabilities independently of the amplitudes.
class PhotonicState {
   public:
    using Term = std::pair<FockTerm, Amplitude>;

    /// Zero-photon state with amplitude one.
    static PhotonicState vacuum();

    std::span<const Term> terms() const noexcept {
        return terms_;
    }
    std::size_t size() const noexcept {
        return terms_.size();
    }
    double branch_prob() const noexcept {
        return branch_prob_;
    }
    double norm2() const noexcept;
    Amplitude amplitude(const FockTerm &term) const noexcept;
    /// Common photon number of all terms, or nullopt when sectors are mixed.
    std::optional<int> photon_number() const noexcept;
    /// Sorted list of ports holding a photon in at least one term.
    std::vector<int> occupied_ports() const;
    bool occupies(int port) const noexcept;
    bool occupies(Mode mode) const noexcept;

    PhotonicState with_branch_prob(double branch_prob) const;

   private:
    friend class StateBuilder;
    PhotonicState() = default;

    std::vector<Term> terms_;
    double branch_prob_ = 1.0;
};

/// Accumulates (term, amplitude) contributions and produces a canonical
/// state: sorted, duplicates summed, small amplitudes pruned.
class StateBuilder {
   public:
    void reserve(std::size_t n) {
        pending_.reserve(n);
    }
    void add(FockTerm term, Amplitude amplitude) {
        pending_.emplace_back(std::move(term), amplitude);
    }
    std::size_t pending() const noexcept {
        return pending_.size();
    }
    /// Returns nullopt when every amplitude cancels or is pruned.
    std::optional<PhotonicState> build(double branch_prob = 1.0) &&;

   private:
    std::vector<PhotonicState::Term> pending_;
};

/// Throws EmptyState if nothing survives canonicalization and NormOutOfRange
/// if the squared norm exceeds 1 + tolerance() or an amplitude is not finite.
PhotonicState make_state(std::span<const Ket> kets);
PhotonicState make_state(std::initializer_list<Ket> kets);

/// Product state. The port sets must be disjoint (PortCollision otherwise).
PhotonicState tensor(const PhotonicState &a, const PhotonicState &b);

/// Rescales to unit norm, keeping branch_prob. Throws EmptyState for a zero
/// or denormal norm.
PhotonicState normalize(const PhotonicState &s);

/// <a|b>, conjugate-linear in the first argument.
Amplitude inner_product(const PhotonicState &a, const PhotonicState &b);

/// Multiplies every amplitude by `factor`; branch_prob is kept.
PhotonicState scaled(const PhotonicState &s, Amplitude factor);

/// Renames ports with `rename` (must be injective on the occupied ports).
PhotonicState relabel_ports(const PhotonicState &s, const std::function<int(int)> &rename);

/// Rewrites every term with `f` (term -> new term, amplitude factor). Used by
/// per-term rules; terms mapping onto the same ket are summed. Returns nullopt
/// if nothing survives.
std::optional<PhotonicState> transform_terms(
    const PhotonicState &s,
    const std::function<std::optional<std::pair<FockTerm, Amplitude>>(const FockTerm &)> &f,
    double branch_prob);

/// Term-by-term comparison within `eps` (default tolerance()).
bool approx_equal(const PhotonicState &a, const PhotonicState &b, double eps = -1);

std::string to_string(const PhotonicState &s);

}  // namespace ghzforge

#endif
