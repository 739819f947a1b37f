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

#include "rydberg/quantum_info.hpp"

#include "rydberg/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace rydberg {

void BasisDistribution::validate(double tol) const {
    if (n_sites == 0 || n_sites > kMaxSites) throw InvalidArgument("distribution has an invalid site count");
    if (probabilities.size() != (std::size_t{1} << n_sites))
        throw InvalidArgument("distribution size does not match 2^n_sites");
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0)) throw InvalidArgument("negative or NaN probability");
        total += p;
    }
    if (std::abs(total - 1.0) > tol) throw InvalidArgument("probabilities sum to " + std::to_string(total));
}

double comparator_value(const EntropyRecord &record, MiComparator which) {
    return which == MiComparator::mi ? record.mi : record.half_mi;
}

namespace {

std::size_t sites_of(std::span<const double> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) throw InvalidArgument("amplitude vector length must be a power of two >= 2");
    return static_cast<std::size_t>(std::countr_zero(dim));
}

void check_normalized(std::span<const double> amplitudes) {
    const double n2 = std::inner_product(amplitudes.begin(), amplitudes.end(), amplitudes.begin(), 0.0);
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-6) throw InvalidArgument("state is not normalized (norm " + std::to_string(std::sqrt(n2)) + ")");
}

double xlogx_sum(std::span<const double> p) {
    double s = 0.0;
    for (double x : p)
        if (x > 0.0) s -= x * std::log(x);
    return s;
}

} // namespace

std::vector<double> schmidt_spectrum(std::span<const double> amplitudes, const Bipartition &bipartition) {
    const std::size_t n = sites_of(amplitudes);
    if (bipartition.n_sites() != n) throw InvalidArgument("bipartition does not match the state");
    check_normalized(amplitudes);

    const std::uint64_t a_mask = bipartition.a_mask();
    const std::uint64_t b_mask = bipartition.b_mask();
    const auto rows = Eigen::Index{1} << bipartition.n_a();
    const auto cols = Eigen::Index{1} << bipartition.n_b();
    Eigen::MatrixXd psi(rows, cols);
    for (std::uint64_t s = 0; s < amplitudes.size(); ++s)
        psi(static_cast<Eigen::Index>(compress_bits(s, a_mask)), static_cast<Eigen::Index>(compress_bits(s, b_mask))) =
            amplitudes[s];

    Eigen::BDCSVD<Eigen::MatrixXd> svd(psi);
    std::vector<double> out;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        const double sigma = svd.singularValues()(k);
        if (sigma >= kSchmidtCutoff) out.push_back(sigma * sigma);
    }
    return out;
}

double von_neumann_entropy(std::span<const double> amplitudes, const Bipartition &bipartition) {
    const auto lambdas = schmidt_spectrum(amplitudes, bipartition);
    return std::max(0.0, xlogx_sum(lambdas));
}

double von_neumann_entropy(const GroundState &state, const Bipartition &bipartition) {
    return von_neumann_entropy(state.amplitudes, bipartition);
}

BasisDistribution basis_probabilities(std::span<const double> amplitudes) {
    BasisDistribution d;
    d.n_sites = sites_of(amplitudes);
    d.probabilities.resize(amplitudes.size());
    std::transform(amplitudes.begin(), amplitudes.end(), d.probabilities.begin(), [](double a) { return a * a; });
    return d;
}

BasisDistribution basis_probabilities(const GroundState &state) { return basis_probabilities(state.amplitudes); }

std::vector<double> rydberg_probabilities(const BasisDistribution &distribution) {
    std::vector<double> p(distribution.n_sites, 0.0);
    const auto &probs = distribution.probabilities;
    for (std::uint64_t s = 0; s < probs.size(); ++s) {
        if (probs[s] == 0.0) continue;
        for (std::size_t i = 0; i < p.size(); ++i)
            if ((s >> i) & 1U) p[i] += probs[s];
    }
    return p;
}

Eigen::MatrixXd two_point_correlations(const BasisDistribution &distribution) {
    const auto n = static_cast<Eigen::Index>(distribution.n_sites);
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(n, n);
    const auto &probs = distribution.probabilities;
    std::vector<Eigen::Index> occupied;
    occupied.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t s = 0; s < probs.size(); ++s) {
        const double w = probs[s];
        if (w == 0.0) continue;
        occupied.clear();
        for (Eigen::Index i = 0; i < n; ++i)
            if ((s >> i) & 1U) occupied.push_back(i);
        for (auto i : occupied)
            for (auto j : occupied) joint(i, j) += w;
    }
    Eigen::VectorXd p = joint.diagonal();
    Eigen::MatrixXd c = joint - p * p.transpose();
    return (c + c.transpose()) / 2.0;
}

Eigen::MatrixXd fourth_cross_moment(const BasisDistribution &distribution) {
    const auto n = static_cast<Eigen::Index>(distribution.n_sites);
    const auto p = rydberg_probabilities(distribution);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    const auto &probs = distribution.probabilities;
    Eigen::VectorXd dev2(n);
    for (std::uint64_t s = 0; s < probs.size(); ++s) {
        const double w = probs[s];
        if (w == 0.0) continue;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = static_cast<double>((s >> i) & 1U) - p[static_cast<std::size_t>(i)];
            dev2(i) = x * x;
        }
        m.noalias() += w * dev2 * dev2.transpose();
    }
    return m;
}

double shannon_entropy(std::span<const double> probabilities) {
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0)) throw InvalidArgument("negative or NaN probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) throw InvalidArgument("probabilities sum to " + std::to_string(total));
    double s = 0.0;
    for (double p : probabilities) {
        const double q = p / total;
        if (q > 0.0) s -= q * std::log(q);
    }
    return s;
}

std::vector<double> marginal(const BasisDistribution &distribution, std::uint64_t mask) {
    std::vector<double> out(std::size_t{1} << std::popcount(mask), 0.0);
    const auto &probs = distribution.probabilities;
    for (std::uint64_t s = 0; s < probs.size(); ++s)
        if (probs[s] != 0.0) out[compress_bits(s, mask)] += probs[s];
    return out;
}

EntropyRecord classical_mutual_information(const BasisDistribution &distribution, const Bipartition &bipartition) {
    if (bipartition.n_sites() != distribution.n_sites) throw InvalidArgument("bipartition does not match distribution");
    EntropyRecord r;
    r.s_x_a = shannon_entropy(marginal(distribution, bipartition.a_mask()));
    r.s_x_b = shannon_entropy(marginal(distribution, bipartition.b_mask()));
    r.s_x_ab = shannon_entropy(distribution.probabilities);
    r.mi = std::max(0.0, r.s_x_a + r.s_x_b - r.s_x_ab);
    r.half_mi = r.mi / 2.0;
    return r;
}

} // namespace rydberg
