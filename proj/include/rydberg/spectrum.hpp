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

// Dimensionless Rydberg ladder Hamiltonian (energies in units of the Rabi
// amplitude) and its ground state.
//
//   H = 1/2 sum_i X_i - (Delta/Omega) sum_i n_i + sum_{i<j} (Rb/a)^6 / d_ij^6 n_i n_j
//
// with d_ij in units of the rung spacing a. Only the zero laser phase is
// supported, which keeps H real symmetric.

#include "rydberg/lattice.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rydberg {

struct SystemParams {
    double delta_over_omega = 0.0;
    double rb_over_a = 0.0;
    double phi = 0.0;
    std::size_t n_rungs = 1;

    void validate() const;    friend bool operator==(const SystemParams &, const SystemParams &) = default;
};

// C6 of the hardware the ladder is modelled on, in m^6 rad/s.
struct PhysicalConstants {
    double c6 = 5.42e-24;
};

struct HardwareParams {
    double omega = 0.0;   // rad/s
    double delta = 0.0;   // rad/s
    double spacing = 0.0; // rung spacing a, metres
    double blockade_radius = 0.0;
};

// Converts the two ratios to hardware units for a chosen Rabi amplitude.
HardwareParams to_hardware_units(const SystemParams &params, double omega, const PhysicalConstants &constants = {});

class HamiltonianOperator {
  public:
    HamiltonianOperator(const SystemParams &params, const Lattice &lattice);

    [[nodiscard]] std::size_t n_sites() const noexcept { return n_sites_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return diagonal_.size(); }
    [[nodiscard]] const std::vector<double> &diagonal() const noexcept { return diagonal_; }
    [[nodiscard]] const SystemParams &params() const noexcept { return params_; }

    // out = H in. O(dim * n_sites).
    void apply(std::span<const double> in, std::span<double> out) const;
    // Identical to apply for the real symmetric case.
    void apply_adjoint(std::span<const double> in, std::span<double> out) const { apply(in, out); }

    // Column-major dense matrix. Refuses above `max_dim`.
    [[nodiscard]] std::vector<double> dense(std::size_t max_dim) const;

    // <s|H|s> for an occupation bitstring.
    [[nodiscard]] double diagonal_energy(std::uint64_t state) const;

    static constexpr double kDriveAmplitude = 0.5;

  private:
    SystemParams params_;
    std::size_t n_sites_;
    std::vector<double> couplings_; // n_sites x n_sites, zero diagonal
    std::vector<double> diagonal_;
};

HamiltonianOperator build_hamiltonian(const SystemParams &params, const Lattice &lattice);

enum class SolverKind { dense, lanczos, davidson, product };

struct GroundState {
    std::vector<double> amplitudes;
    double energy = 0.0;
    std::optional<double> gap;
    bool degenerate = false;
    SolverKind solver = SolverKind::dense;
    double residual = 0.0;
    std::size_t iterations = 0;

    [[nodiscard]] std::size_t n_sites() const noexcept;
};

// gap < kDegeneracyRelTol * max(1, |E0|) marks the ground space as degenerate.
inline constexpr double kDegeneracyRelTol = 1e-8;
bool is_degenerate(double energy, std::optional<double> gap);

inline constexpr std::size_t kDenseLimitDim = std::size_t{1} << 14;

// Lowest eigenpair of the dense matrix; also fills the gap.
GroundState ground_state_dense(const HamiltonianOperator &hamiltonian, std::size_t max_dim = kDenseLimitDim);

struct LanczosOptions {
    double tol = 1e-10;
    std::size_t max_iter = 5000; // matrix-vector products, all restarts included
    std::size_t krylov_dim = 200; // basis size that triggers a thick restart
    std::uint64_t seed = 0;
    bool compute_gap = true;
};

// Thick-restart Lanczos with full reorthogonalization. Converged once the true
// residual ||Hv - Ev|| is at most tol. The gap comes from a second run
// deflated against the ground state.
GroundState ground_state_lanczos(const HamiltonianOperator &hamiltonian, const LanczosOptions &options);
GroundState ground_state_lanczos(const HamiltonianOperator &hamiltonian, double tol, std::size_t max_iter,
                                 std::uint64_t seed);

struct DavidsonOptions {
    double tol = 1e-10;
    std::size_t max_iter = 5000; // matrix-vector products
    std::size_t max_subspace = 48;
    std::uint64_t seed = 0;
    bool compute_gap = true;
};

// Davidson-Liu iteration with the diagonal preconditioner (D - theta)^-1.
// Tracks the two lowest roots when the gap is requested. The blockade terms
// make H strongly diagonally dominant away from the low-energy sector, where
// plain Krylov methods need thousands of matvecs.
GroundState ground_state_davidson(const HamiltonianOperator &hamiltonian, const DavidsonOptions &options);

// Closed form for rb_over_a = 0, where H is a sum of single-site terms.
GroundState ground_state_product(const HamiltonianOperator &hamiltonian);

enum class SolverChoice { automatic, dense, lanczos, davidson };

struct SolverConfig {
    SolverChoice choice = SolverChoice::automatic;
    std::size_t dense_max_dim = 1024; // automatic dispatch uses dense up to here, Davidson above
    std::size_t dense_limit_dim = kDenseLimitDim;
    LanczosOptions lanczos{};
    DavidsonOptions davidson{};

    // Propagates tolerance, iteration cap and seed to both iterative solvers.
    void set_iterative(double tol, std::size_t max_iter, std::uint64_t seed);
};

// Automatic choice: closed form when rb_over_a = 0, dense up to
// dense_max_dim, Davidson above.
GroundState ground_state(const SystemParams &params, const Lattice &lattice, const SolverConfig &config = {});

std::string to_string(SolverKind kind);
std::string to_string(SolverChoice choice);
SolverChoice parse_solver_choice(const std::string &text);

} // namespace rydberg
