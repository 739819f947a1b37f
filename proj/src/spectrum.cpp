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

#include "rydberg/spectrum.hpp"

#include "rydberg/errors.hpp"
#include "rydberg/seeding.hpp"

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace rydberg {

void SystemParams::validate() const {
    if (!std::isfinite(delta_over_omega)) throw InvalidArgument("delta_over_omega must be finite");
    if (!std::isfinite(rb_over_a) || rb_over_a < 0.0) throw InvalidArgument("rb_over_a must be finite and >= 0");
    if (phi != 0.0) throw InvalidArgument("only laser phase phi = 0 is supported");
    if (n_rungs == 0) throw InvalidArgument("n_rungs must be >= 1");
}

HardwareParams to_hardware_units(const SystemParams &params, double omega, const PhysicalConstants &constants) {
    if (!(omega > 0.0)) throw InvalidArgument("Rabi amplitude must be positive");
    if (!(constants.c6 > 0.0)) throw InvalidArgument("C6 must be positive");
    if (!(params.rb_over_a > 0.0)) throw InvalidArgument("rb_over_a must be positive to define a spacing");
    HardwareParams out;
    out.omega = omega;
    out.delta = params.delta_over_omega * omega;
    out.blockade_radius = std::pow(constants.c6 / omega, 1.0 / 6.0);
    out.spacing = out.blockade_radius / params.rb_over_a;
    return out;
}

HamiltonianOperator::HamiltonianOperator(const SystemParams &params, const Lattice &lattice)
    : params_(params), n_sites_(lattice.n_sites()) {
    params.validate();
    if (params.n_rungs != lattice.n_rungs())
        throw InvalidArgument("lattice has " + std::to_string(lattice.n_rungs()) + " rungs, params say " +
                              std::to_string(params.n_rungs));
    if (n_sites_ > 30) throw ResourceLimitError("Hilbert space of " + std::to_string(n_sites_) + " sites is too large");

    const double rb6 = std::pow(params.rb_over_a, 6);
    couplings_.assign(n_sites_ * n_sites_, 0.0);
    for (std::size_t i = 0; i < n_sites_; ++i) {
        for (std::size_t j = i + 1; j < n_sites_; ++j) {
            const double v = rb6 / std::pow(lattice.distance(i, j), 6);
            couplings_[i * n_sites_ + j] = v;
            couplings_[j * n_sites_ + i] = v;
        }
    }

    const std::size_t dim = std::size_t{1} << n_sites_;
    diagonal_.resize(dim);
    for (std::size_t s = 0; s < dim; ++s) diagonal_[s] = diagonal_energy(s);
}

double HamiltonianOperator::diagonal_energy(std::uint64_t state) const {
    double e = -params_.delta_over_omega * static_cast<double>(std::popcount(state));
    for (std::size_t i = 0; i < n_sites_; ++i) {
        if (((state >> i) & 1U) == 0) continue;
        for (std::size_t j = i + 1; j < n_sites_; ++j)
            if ((state >> j) & 1U) e += couplings_[i * n_sites_ + j];
    }
    return e;
}

void HamiltonianOperator::apply(std::span<const double> in, std::span<double> out) const {
    const std::size_t dim = dimension();
    if (in.size() != dim || out.size() != dim) throw InvalidArgument("matvec size mismatch");
    for (std::size_t s = 0; s < dim; ++s) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n_sites_; ++i) acc += in[s ^ (std::size_t{1} << i)];
        out[s] = diagonal_[s] * in[s] + kDriveAmplitude * acc;
    }
}

std::vector<double> HamiltonianOperator::dense(std::size_t max_dim) const {
    const std::size_t dim = dimension();
    if (dim > max_dim)
        throw ResourceLimitError("dense matrix of dimension " + std::to_string(dim) + " exceeds limit " +
                                 std::to_string(max_dim));
    std::vector<double> m(dim * dim, 0.0);
    for (std::size_t s = 0; s < dim; ++s) {
        m[s * dim + s] = diagonal_[s];
        for (std::size_t i = 0; i < n_sites_; ++i) m[s * dim + (s ^ (std::size_t{1} << i))] = kDriveAmplitude;
    }
    return m;
}

HamiltonianOperator build_hamiltonian(const SystemParams &params, const Lattice &lattice) {
    return {params, lattice};
}

std::size_t GroundState::n_sites() const noexcept {
    return static_cast<std::size_t>(std::countr_zero(amplitudes.size()));
}

bool is_degenerate(double energy, std::optional<double> gap) {
    return gap.has_value() && *gap < kDegeneracyRelTol * std::max(1.0, std::abs(energy));
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(std::span<double> x, double alpha) {
    for (auto &v : x) v *= alpha;
}

double residual_norm(const HamiltonianOperator &h, std::span<const double> v, double energy) {
    std::vector<double> hv(v.size());
    h.apply(v, hv);
    axpy(-energy, v, hv);
    return norm(hv);
}

// Ground states of the zero-phase Hamiltonian have sign pattern (-1)^popcount
// (Perron-Frobenius after the gauge flip of every site). Fix the overall sign
// so that the gauge-transformed vector has a positive sum.
void canonicalize_sign(std::vector<double> &v) {
    double acc = 0.0;
    for (std::size_t s = 0; s < v.size(); ++s) acc += (std::popcount(s) % 2 == 0) ? v[s] : -v[s];
    if (acc < 0.0)
        for (auto &x : v) x = -x;
}

struct Eigenpair {
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> vector;
    double residual = std::numeric_limits<double>::infinity();
    std::size_t matvecs = 0;
    bool converged = false;
};

// Removes the components along `deflate` (orthonormal set) and the basis.
void orthogonalize(std::span<double> w, const std::vector<std::vector<double>> &basis,
                   const std::vector<const std::vector<double> *> &deflate) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto *d : deflate) axpy(-dot(*d, w), *d, w);
        for (const auto &q : basis) axpy(-dot(q, w), q, w);
    }
}

// Orthogonalizes w against the deflation set and the basis, accumulating the
// basis coefficients into `coeffs`.
void project_out(std::span<double> w, const std::vector<std::vector<double>> &basis,
                 const std::vector<const std::vector<double> *> &deflate, std::vector<double> &coeffs) {
    coeffs.assign(basis.size(), 0.0);
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto *d : deflate) axpy(-dot(*d, w), *d, w);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const double c = dot(basis[i], w);
            coeffs[i] += c;
            axpy(-c, basis[i], w);
        }
    }
}

// Thick-restart Lanczos: at a full basis the lowest Ritz vectors are kept and
// the residual direction is appended, so the Krylov information survives.
Eigenpair lanczos_lowest(const HamiltonianOperator &h, std::vector<double> start, const LanczosOptions &opt,
                         const std::vector<const std::vector<double> *> &deflate) {
    const std::size_t dim = h.dimension();
    const std::size_t cap = std::max<std::size_t>(3, std::min(opt.krylov_dim, dim));
    const std::size_t keep = std::max<std::size_t>(1, cap / 2);
    constexpr std::size_t stride = 8;
    Eigenpair best;
    Rng rng(derive_seed(opt.seed, 0x5eedULL));

    std::vector<std::vector<double>> basis;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cap), static_cast<Eigen::Index>(cap));
    std::vector<double> w(dim), coeffs, x(dim);

    const auto reset = [&](std::vector<double> v) {
        basis.clear();
        t.setZero();
        for (int attempt = 0;; ++attempt) {
            orthogonalize(v, {}, deflate);
            const double nrm = norm(v);
            if (nrm > 1e-300 || attempt > 8) {
                scale(v, 1.0 / nrm);
                break;
            }
            for (auto &e : v) e = 2.0 * uniform_unit(rng) - 1.0;
        }
        basis.push_back(std::move(v));
    };
    reset(std::move(start));

    while (best.matvecs < opt.max_iter) {
        const std::size_t j = basis.size() - 1;
        h.apply(basis[j], w);
        ++best.matvecs;
        project_out(w, basis, deflate, coeffs);
        for (std::size_t i = 0; i <= j; ++i) {
            const auto r = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(j);
            t(r, c) = t(c, r) = coeffs[i];
        }
        const double b = norm(w);
        const std::size_t m = j + 1;
        const bool exhausted = best.matvecs >= opt.max_iter;
        const bool invariant = b < 1e-13 * std::max(1.0, std::abs(t(0, 0)));
        if (m % stride != 0 && m < cap && !exhausted && !invariant) {
            scale(w, 1.0 / b);
            basis.push_back(w);
            continue;
        }

        const auto mi = static_cast<Eigen::Index>(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t.topLeftCorner(mi, mi));
        if (eig.info() != Eigen::Success) throw std::runtime_error("projected eigensolver failed");
        const Eigen::MatrixXd &s = eig.eigenvectors();
        const double estimate = b * std::abs(s(mi - 1, 0));

        if (estimate <= 0.5 * opt.tol || invariant || exhausted) {
            std::fill(x.begin(), x.end(), 0.0);
            for (std::size_t k = 0; k < m; ++k) axpy(s(static_cast<Eigen::Index>(k), 0), basis[k], x);
            orthogonalize(x, {}, deflate);
            scale(x, 1.0 / norm(x));
            h.apply(x, w);
            ++best.matvecs;
            const double rq = dot(x, w);
            axpy(-rq, x, w);
            const double res = norm(w);
            if (res < best.residual) {
                best.value = rq;
                best.vector = x;
                best.residual = res;
            }
            if (res <= opt.tol) {
                best.converged = true;
                break;
            }
            reset(x);
            continue;
        }
        if (m < cap) {
            scale(w, 1.0 / b);
            basis.push_back(w);
            continue;
        }

        std::vector<std::vector<double>> kept(keep, std::vector<double>(dim, 0.0));
        for (std::size_t r = 0; r < keep; ++r)
            for (std::size_t k = 0; k < m; ++k)
                axpy(s(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(r)), basis[k], kept[r]);
        basis = std::move(kept);
        t.setZero();
        for (std::size_t r = 0; r < keep; ++r) {
            const auto ri = static_cast<Eigen::Index>(r);
            t(ri, ri) = eig.eigenvalues()(ri);
        }
        orthogonalize(w, basis, deflate);
        scale(w, 1.0 / norm(w));
        basis.push_back(w);
    }
    return best;
}

} // namespace

GroundState ground_state_dense(const HamiltonianOperator &hamiltonian, std::size_t max_dim) {
    const std::size_t dim = hamiltonian.dimension();
    std::vector<double> matrix = hamiltonian.dense(max_dim);
    const auto n = static_cast<lapack_int>(dim);
    const lapack_int upper = std::min<lapack_int>(2, n);
    std::vector<double> values(dim);
    std::vector<double> vectors(dim * static_cast<std::size_t>(upper));
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(upper));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, matrix.data(), n, 0.0, 0.0, 1, upper,
                                           0.0, &found, values.data(), vectors.data(), n, support.data());
    if (info != 0 || found < 1) throw std::runtime_error("dense eigensolver failed (info " + std::to_string(info) + ")");

    GroundState gs;
    gs.solver = SolverKind::dense;
    gs.energy = values[0];
    gs.amplitudes.assign(vectors.begin(), vectors.begin() + static_cast<std::ptrdiff_t>(dim));
    if (found >= 2) gs.gap = values[1] - values[0];
    gs.degenerate = is_degenerate(gs.energy, gs.gap);
    scale(gs.amplitudes, 1.0 / norm(gs.amplitudes));
    canonicalize_sign(gs.amplitudes);
    gs.residual = residual_norm(hamiltonian, gs.amplitudes, gs.energy);
    gs.iterations = 1;
    return gs;
}

GroundState ground_state_lanczos(const HamiltonianOperator &hamiltonian, const LanczosOptions &options) {
    const std::size_t dim = hamiltonian.dimension();
    if (dim < 2) throw InvalidArgument("Lanczos needs dimension >= 2");
    if (!(options.tol > 0.0)) throw InvalidArgument("Lanczos tolerance must be positive");

    Rng rng(options.seed);
    std::vector<double> start(dim);
    for (auto &x : start) x = 2.0 * uniform_unit(rng) - 1.0;

    Eigenpair ground = lanczos_lowest(hamiltonian, start, options, {});
    if (!ground.converged)
        throw ConvergenceError("Lanczos did not converge within " + std::to_string(options.max_iter) +
                                   " matvecs (best residual " + std::to_string(ground.residual) + ")",
                               ground.residual);

    GroundState gs;
    gs.solver = SolverKind::lanczos;
    gs.energy = ground.value;
    gs.amplitudes = std::move(ground.vector);
    gs.residual = ground.residual;
    gs.iterations = ground.matvecs;
    canonicalize_sign(gs.amplitudes);

    if (options.compute_gap) {
        for (auto &x : start) x = 2.0 * uniform_unit(rng) - 1.0;
        Eigenpair excited = lanczos_lowest(hamiltonian, start, options, {&gs.amplitudes});
        gs.iterations += excited.matvecs;
        if (std::isfinite(excited.value)) gs.gap = std::max(0.0, excited.value - gs.energy);
    }
    gs.degenerate = is_degenerate(gs.energy, gs.gap);
    return gs;
}

GroundState ground_state_lanczos(const HamiltonianOperator &hamiltonian, double tol, std::size_t max_iter,
                                 std::uint64_t seed) {
    LanczosOptions options;
    options.tol = tol;
    options.max_iter = max_iter;
    options.seed = seed;
    return ground_state_lanczos(hamiltonian, options);
}

namespace {

// Eigen-decomposition of a small dense symmetric matrix (column-major),
// eigenvalues ascending.
void small_symmetric_eigen(std::vector<double> matrix, std::size_t m, std::vector<double> &values,
                           std::vector<double> &vectors) {
    values.assign(m, 0.0);
    const lapack_int info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(m), matrix.data(),
                                          static_cast<lapack_int>(m), values.data());
    if (info != 0) throw std::runtime_error("projected eigensolver failed (info " + std::to_string(info) + ")");
    vectors = std::move(matrix);
}

} // namespace

GroundState ground_state_davidson(const HamiltonianOperator &hamiltonian, const DavidsonOptions &options) {
    const std::size_t dim = hamiltonian.dimension();
    if (dim < 2) throw InvalidArgument("Davidson needs dimension >= 2");
    if (!(options.tol > 0.0)) throw InvalidArgument("Davidson tolerance must be positive");

    const std::size_t roots = options.compute_gap ? 2 : 1;
    const std::size_t max_subspace = std::min(dim, std::max<std::size_t>(options.max_subspace, 4 * roots));
    const std::vector<double> &diag = hamiltonian.diagonal();
    // Only the energy of the second root is needed, which is quadratic in its residual.
    const double tol_excited = std::max(options.tol, 1e-6);

    Rng rng(options.seed);
    std::vector<std::vector<double>> basis, images;
    std::vector<std::vector<double>> projected; // projected[j][i] = <v_i|H|v_j>, i <= j
    std::size_t matvecs = 0;

    auto add_direction = [&](std::vector<double> t) {
        const double before = norm(t);
        if (!(before > 0.0) || !std::isfinite(before)) return false;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto &v : basis) axpy(-dot(v, t), v, t);
        const double after = norm(t);
        if (after < 1e-10 * before) return false;
        scale(t, 1.0 / after);
        std::vector<double> ht(dim);
        hamiltonian.apply(t, ht);
        ++matvecs;
        std::vector<double> column;
        column.reserve(basis.size() + 1);
        for (const auto &v : basis) column.push_back(dot(v, ht));
        column.push_back(dot(t, ht));
        basis.push_back(std::move(t));
        images.push_back(std::move(ht));
        projected.push_back(std::move(column));
        return true;
    };
    auto random_direction = [&] {
        std::vector<double> t(dim);
        for (auto &x : t) x = 2.0 * uniform_unit(rng) - 1.0;
        return t;
    };

    {
        std::vector<std::size_t> order(dim);
        std::iota(order.begin(), order.end(), std::size_t{0});
        const std::size_t guesses = std::min(dim, roots + 1);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(guesses), order.end(),
                          [&](std::size_t a, std::size_t b) { return diag[a] < diag[b] || (diag[a] == diag[b] && a < b); });
        for (std::size_t k = 0; k < guesses; ++k) {
            std::vector<double> t = random_direction();
            scale(t, 1e-3);
            t[order[k]] += 1.0;
            add_direction(std::move(t));
        }
    }

    std::vector<double> values, coeffs;
    std::vector<std::vector<double>> ritz(roots, std::vector<double>(dim)), ritz_images(roots, std::vector<double>(dim));
    std::vector<double> theta(roots), residuals(roots);
    double best_residual = std::numeric_limits<double>::infinity();

    while (true) {
        const std::size_t m = basis.size();
        std::vector<double> t_matrix(m * m);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i <= j; ++i) t_matrix[j * m + i] = t_matrix[i * m + j] = projected[j][i];
        small_symmetric_eigen(std::move(t_matrix), m, values, coeffs);

        const std::size_t active = std::min(roots, m);
        std::vector<std::vector<double>> corrections;
        bool converged = true;
        for (std::size_t r = 0; r < active; ++r) {
            auto &x = ritz[r];
            auto &hx = ritz_images[r];
            std::fill(x.begin(), x.end(), 0.0);
            std::fill(hx.begin(), hx.end(), 0.0);
            for (std::size_t k = 0; k < m; ++k) {
                axpy(coeffs[r * m + k], basis[k], x);
                axpy(coeffs[r * m + k], images[k], hx);
            }
            theta[r] = values[r];
            std::vector<double> res = hx;
            axpy(-theta[r], x, res);
            residuals[r] = norm(res);
            const double target = r == 0 ? options.tol : tol_excited;
            if (residuals[r] > target) {
                converged = false;
                for (std::size_t s = 0; s < dim; ++s) {
                    double denom = diag[s] - theta[r];
                    if (std::abs(denom) < 1e-4) denom = std::copysign(1e-4, denom);
                    res[s] /= denom;
                }
                corrections.push_back(std::move(res));
            }
        }
        best_residual = std::min(best_residual, residuals[0]);

        if (converged && active == roots) {
            std::vector<double> check(dim);
            hamiltonian.apply(ritz[0], check);
            ++matvecs;
            axpy(-theta[0], ritz[0], check);
            const double true_residual = norm(check);
            if (true_residual <= options.tol) {
                GroundState gs;
                gs.solver = SolverKind::davidson;
                gs.energy = theta[0];
                gs.amplitudes = ritz[0];
                scale(gs.amplitudes, 1.0 / norm(gs.amplitudes));
                canonicalize_sign(gs.amplitudes);
                gs.residual = true_residual;
                gs.iterations = matvecs;
                if (roots == 2) gs.gap = std::max(0.0, theta[1] - theta[0]);
                gs.degenerate = is_degenerate(gs.energy, gs.gap);
                return gs;
            }
            // Accumulated rounding in the projected images; restart from the Ritz vectors.
            corrections.clear();
            corrections.push_back(std::move(check));
        }
        if (matvecs >= options.max_iter)
            throw ConvergenceError("Davidson did not converge within " + std::to_string(options.max_iter) +
                                       " matvecs (best residual " + std::to_string(best_residual) + ")",
                                   best_residual);

        if (m + corrections.size() > max_subspace) {
            basis.clear();
            images.clear();
            projected.clear();
            for (std::size_t r = 0; r < active; ++r) add_direction(ritz[r]);
        }
        bool grew = false;
        for (auto &c : corrections) grew = add_direction(std::move(c)) || grew;
        if (!grew) add_direction(random_direction());
    }
}

void SolverConfig::set_iterative(double tol, std::size_t max_iter, std::uint64_t seed) {
    lanczos.tol = davidson.tol = tol;
    lanczos.max_iter = davidson.max_iter = max_iter;
    lanczos.seed = davidson.seed = seed;
}

GroundState ground_state_product(const HamiltonianOperator &hamiltonian) {
    if (hamiltonian.params().rb_over_a != 0.0) throw InvalidArgument("closed-form ground state needs rb_over_a = 0");
    // One site: [[0, 1/2], [1/2, -delta]], lowest root lambda with v = (1, 2 lambda) / norm.
    const double delta = hamiltonian.params().delta_over_omega;
    const double root = std::hypot(delta, 1.0);
    const double lambda = 0.5 * (-delta - root);
    const double v0 = 1.0 / std::hypot(1.0, 2.0 * lambda);
    const double v1 = 2.0 * lambda * v0;

    const std::size_t n = hamiltonian.n_sites();
    GroundState gs;
    gs.amplitudes.assign(hamiltonian.dimension(), 1.0);
    for (std::size_t s = 0; s < gs.amplitudes.size(); ++s) {
        double a = 1.0;
        for (std::size_t i = 0; i < n; ++i) a *= ((s >> i) & 1U) ? v1 : v0;
        gs.amplitudes[s] = a;
    }
    gs.energy = static_cast<double>(n) * lambda;
    gs.gap = root;
    gs.degenerate = is_degenerate(gs.energy, gs.gap);
    gs.solver = SolverKind::product;
    gs.residual = residual_norm(hamiltonian, gs.amplitudes, gs.energy);
    return gs;
}

GroundState ground_state(const SystemParams &params, const Lattice &lattice, const SolverConfig &config) {
    const HamiltonianOperator h = build_hamiltonian(params, lattice);
    if (config.choice == SolverChoice::automatic && params.rb_over_a == 0.0) return ground_state_product(h);
    const bool dense = config.choice == SolverChoice::dense ||
                       (config.choice == SolverChoice::automatic && h.dimension() <= config.dense_max_dim);
    if (dense) return ground_state_dense(h, config.dense_limit_dim);
    if (config.choice == SolverChoice::lanczos) return ground_state_lanczos(h, config.lanczos);
    return ground_state_davidson(h, config.davidson);
}

std::string to_string(SolverKind kind) {
    switch (kind) {
    case SolverKind::dense: return "dense";
    case SolverKind::lanczos: return "lanczos";
    case SolverKind::davidson: return "davidson";
    case SolverKind::product: return "product";
    }
    return "dense";
}

std::string to_string(SolverChoice choice) {
    switch (choice) {
    case SolverChoice::automatic: return "auto";
    case SolverChoice::dense: return "dense";
    case SolverChoice::lanczos: return "lanczos";
    case SolverChoice::davidson: return "davidson";
    }
    return "auto";
}

SolverChoice parse_solver_choice(const std::string &text) {
    if (text == "auto") return SolverChoice::automatic;
    if (text == "dense") return SolverChoice::dense;
    if (text == "lanczos") return SolverChoice::lanczos;
    if (text == "davidson") return SolverChoice::davidson;
    throw InvalidArgument("unknown solver '" + text + "' (expected auto, dense, lanczos or davidson)");
}

} // namespace rydberg
