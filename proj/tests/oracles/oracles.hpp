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

// Brute-force reference implementations used only by the tests. None of this
// shares code with the library: geometry, Hamiltonian, partial trace and the
// distribution moments are all rebuilt from their definitions.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

struct Site {
    double x;
    double y;
};

// Rung r, lower leg -> 2r at (r, 0); upper leg -> 2r+1 at (r, 2).
inline std::vector<Site> ladder(std::size_t n_rungs) {
    std::vector<Site> s;
    for (std::size_t r = 0; r < n_rungs; ++r) {
        s.push_back({double(r), 0.0});
        s.push_back({double(r), 2.0});
    }
    return s;
}

inline Eigen::MatrixXd hamiltonian(std::size_t n_rungs, double delta, double rb) {
    const auto sites = ladder(n_rungs);
    const std::size_t n = sites.size();
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t s = 0; s < dim; ++s) {
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!((s >> i) & 1)) continue;
            e -= delta;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!((s >> j) & 1)) continue;
                const double dx = sites[i].x - sites[j].x;
                const double dy = sites[i].y - sites[j].y;
                const double d2 = dx * dx + dy * dy;
                e += std::pow(rb, 6) / (d2 * d2 * d2);
            }
        }
        h(s, s) = e;
        for (std::size_t i = 0; i < n; ++i) h(s ^ (std::size_t{1} << i), s) += 0.5;
    }
    return h;
}

struct Eigenpair {
    double e0;
    double e1;
    Eigen::VectorXd v0;
};

inline Eigenpair lowest(const Eigen::MatrixXd &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    return {es.eigenvalues()(0), h.rows() > 1 ? es.eigenvalues()(1) : es.eigenvalues()(0), es.eigenvectors().col(0)};
}

// S = -tr rho_A ln rho_A with rho_A from an explicit partial trace over B.
inline double entropy_partial_trace(const Eigen::VectorXd &psi, std::size_t n_sites, const std::vector<bool> &in_a) {
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < n_sites; ++i) (in_a[i] ? a : b).push_back(i);
    const std::size_t da = std::size_t{1} << a.size();
    const std::size_t db = std::size_t{1} << b.size();
    auto index = [&](std::size_t ia, std::size_t ib) {
        std::size_t s = 0;
        for (std::size_t k = 0; k < a.size(); ++k)
            if ((ia >> k) & 1) s |= std::size_t{1} << a[k];
        for (std::size_t k = 0; k < b.size(); ++k)
            if ((ib >> k) & 1) s |= std::size_t{1} << b[k];
        return s;
    };
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(da, da);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < db; ++k) acc += psi(index(i, k)) * psi(index(j, k));
            rho(i, j) = acc;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double l = es.eigenvalues()(k);
        if (l > 1e-300) s -= l * std::log(l);
    }
    return s;
}

inline double occupation(const Eigen::VectorXd &psi, std::size_t site) {
    double p = 0.0;
    for (Eigen::Index s = 0; s < psi.size(); ++s)
        if ((s >> site) & 1) p += psi(s) * psi(s);
    return p;
}

inline double moment_c(const std::vector<double> &dist, std::size_t i, std::size_t j) {
    double ri = 0, rj = 0, rij = 0;
    for (std::size_t s = 0; s < dist.size(); ++s) {
        const double xi = double((s >> i) & 1), xj = double((s >> j) & 1);
        ri += dist[s] * xi;
        rj += dist[s] * xj;
        rij += dist[s] * xi * xj;
    }
    return rij - ri * rj;
}

inline double moment_m(const std::vector<double> &dist, std::size_t i, std::size_t j) {
    double pi = 0, pj = 0;
    for (std::size_t s = 0; s < dist.size(); ++s) {
        pi += dist[s] * double((s >> i) & 1);
        pj += dist[s] * double((s >> j) & 1);
    }
    double m = 0;
    for (std::size_t s = 0; s < dist.size(); ++s) {
        const double a = double((s >> i) & 1) - pi, b = double((s >> j) & 1) - pj;
        m += dist[s] * a * a * b * b;
    }
    return m;
}

inline double entropy_of(const std::map<std::uint64_t, double> &m) {
    double s = 0;
    for (auto [k, p] : m)
        if (p > 0) s -= p * std::log(p);
    return s;
}

// I = H(A) + H(B) - H(AB), marginals keyed by the raw masked bit pattern.
inline double mutual_information(const std::vector<double> &dist, const std::vector<bool> &in_a) {
    std::uint64_t ma = 0, mb = 0;
    for (std::size_t i = 0; i < in_a.size(); ++i) (in_a[i] ? ma : mb) |= std::uint64_t{1} << i;
    std::map<std::uint64_t, double> pa, pb, pab;
    for (std::size_t s = 0; s < dist.size(); ++s) {
        pa[s & ma] += dist[s];
        pb[s & mb] += dist[s];
        pab[s] += dist[s];
    }
    return entropy_of(pa) + entropy_of(pb) - entropy_of(pab);
}

// |observed - n p| within k binomial standard deviations.
inline bool within_binomial(double count, double n, double p, double k) {
    return std::abs(count - n * p) <= k * std::sqrt(n * p * (1.0 - p));
}

} // namespace oracle
