// Copyright 2026 The rydberg-ladder Authors
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

#pragma once

// Exact information-theoretic quantities of a ground state and of bitstring
// distributions. All entropies are in nats.

#include "rydberg/lattice.hpp"
#include "rydberg/spectrum.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rydberg {

// Probability of every occupation bitstring; index bit i = site i.
struct BasisDistribution {
    std::size_t n_sites = 0;
    std::vector<double> probabilities;

    // Throws InvalidArgument unless probabilities are >= 0, sized 2^n_sites
    // and sum to 1 within `tol`.
    void validate(double tol = 1e-10) const;
};

struct EntropyRecord {
    std::optional<double> s_vn;
    double s_x_a = 0.0;
    double s_x_b = 0.0;
    double s_x_ab = 0.0;
    double mi = 0.0;
    double half_mi = 0.0;
};

// Which MI-derived number an analysis compares against the entanglement entropy.
enum class MiComparator { mi, half_mi };
inline constexpr MiComparator kDefaultComparator = MiComparator::half_mi;
double comparator_value(const EntropyRecord &record, MiComparator which);

// Squared Schmidt coefficients across the cut, descending; values whose
// singular value is below kSchmidtCutoff are dropped.
inline constexpr double kSchmidtCutoff = 1e-12;
std::vector<double> schmidt_spectrum(std::span<const double> amplitudes, const Bipartition &bipartition);

double von_neumann_entropy(std::span<const double> amplitudes, const Bipartition &bipartition);
double von_neumann_entropy(const GroundState &state, const Bipartition &bipartition);

BasisDistribution basis_probabilities(std::span<const double> amplitudes);
BasisDistribution basis_probabilities(const GroundState &state);

// p_i = P(site i is in the Rydberg state).
std::vector<double> rydberg_probabilities(const BasisDistribution &distribution);

// C_ij = <r_i r_j> - <r_i><r_j>.
Eigen::MatrixXd two_point_correlations(const BasisDistribution &distribution);

// M_ij = E[(x_i - p_i)^2 (x_j - p_j)^2].
Eigen::MatrixXd fourth_cross_moment(const BasisDistribution &distribution);

// -sum p ln p. Input must sum to 1 within 1e-6; it is renormalized.
double shannon_entropy(std::span<const double> probabilities);

// Distribution of the bits selected by `mask`, compressed to a dense index.
std::vector<double> marginal(const BasisDistribution &distribution, std::uint64_t mask);

EntropyRecord classical_mutual_information(const BasisDistribution &distribution, const Bipartition &bipartition);

// Packs the bits of `value` selected by `mask` into the low bits.
constexpr std::uint64_t compress_bits(std::uint64_t value, std::uint64_t mask) noexcept {
    std::uint64_t out = 0;
    std::uint64_t bit = 1;
    while (mask != 0) {
        const std::uint64_t low = mask & (~mask + 1);
        if (value & low) out |= bit;
        bit <<= 1;
        mask ^= low;
    }
    return out;
}

} // namespace rydberg
