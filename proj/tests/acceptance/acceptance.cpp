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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "rydberg/errors.hpp"
#include "rydberg/features.hpp"
#include "rydberg/metrics.hpp"
#include "rydberg/pipeline.hpp"
#include "rydberg/quantum_info.hpp"
#include "rydberg/sampler.hpp"
#include "rydberg/seeding.hpp"
#include "rydberg/spectrum.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

using namespace rydberg;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(const std::string &name, bool pass, const std::string &detail) {
    std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

SystemParams random_params(Rng &rng, std::size_t min_rungs, std::size_t max_rungs) {
    const std::size_t n = min_rungs + uniform_index(rng, max_rungs - min_rungs + 1);
    return {6.0 * uniform_unit(rng), 0.1 + 4.9 * uniform_unit(rng), 0.0, n};
}

Bipartition random_cut(Rng &rng, std::size_t n_sites) {
    const std::uint64_t full = (std::uint64_t{1} << n_sites) - 1;
    return {n_sites, 1 + uniform_index(rng, full - 1)};
}

Eigen::VectorXd as_eigen(const std::vector<double> &v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
}

// The oracle works on the smaller side; S_A = S_B for pure states.
double oracle_entropy(const GroundState &g, const Bipartition &cut) {
    const auto side = cut.n_a() <= cut.n_b() ? cut : cut.complement();
    return oracle::entropy_partial_trace(as_eigen(g.amplitudes), g.n_sites(), side.flags());
}

void entropy_oracle() {
    const auto t0 = Clock::now();
    Rng rng(derive_seed(1001, 0));
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        const auto p = random_params(rng, 1, 6);
        const Lattice l(p.n_rungs);
        const auto g = ground_state(p, l);
        const auto cut = random_cut(rng, l.n_sites());
        worst = std::max(worst, std::abs(von_neumann_entropy(g, cut) - oracle_entropy(g, cut)));
    }
    const double t = seconds_since(t0);
    report("entropy-oracle", worst <= 1e-9 && t < 120.0, fmt("500 cases, max |dS| = %.2e (tol 1e-9), %.1f s (limit 120 s)", worst, t));
}

void purity_symmetry() {
    Rng rng(derive_seed(1002, 0));
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto p = random_params(rng, 1, 6);
        const Lattice l(p.n_rungs);
        const auto g = ground_state(p, l);
        const auto cut = random_cut(rng, l.n_sites());
        worst = std::max(worst, std::abs(von_neumann_entropy(g, cut) - von_neumann_entropy(g, cut.complement())));
    }
    report("purity-symmetry", worst <= 1e-9, fmt("1000 cases, max |S_A - S_B| = %.2e (tol 1e-9)", worst));
}

void decoupled_limit() {
    bool exact_energy = true;
    double worst_s = 0.0, worst_e = 0.0;
    Rng rng(derive_seed(1003, 0));
    for (std::size_t n = 1; n <= 6; ++n) {
        const Lattice l(n);
        const auto g = ground_state({0.0, 0.0, 0.0, n}, l);
        const double want = -double(l.n_sites()) / 2.0;
        if (g.energy != want) exact_energy = false;
        worst_e = std::max(worst_e, std::abs(g.energy - want));
        for (int k = 0; k < 20; ++k) worst_s = std::max(worst_s, std::abs(von_neumann_entropy(g, random_cut(rng, l.n_sites()))));
    }
    report("decoupled-limit", exact_energy && worst_s <= 1e-9,
           fmt("1-6 rungs, max |E + n/2| = %.2e (exact required), max S = %.2e (tol 1e-9)", worst_e, worst_s));
}

void lanczos_vs_dense() {
    const auto t0 = Clock::now();
    Rng rng(derive_seed(1004, 0));
    double worst_e = 0.0, worst_s = 0.0;
    int failures = 0;
    std::size_t max_dim = 0;
    for (int k = 0; k < 100; ++k) {
        const auto p = random_params(rng, 1, 6);
        const Lattice l(p.n_rungs);
        const auto h = build_hamiltonian(p, l);
        const auto d = ground_state_dense(h);
        LanczosOptions o;
        o.seed = rng();
        o.compute_gap = false;
        try {
            const auto v = ground_state_lanczos(h, o);
            const auto cut = random_cut(rng, l.n_sites());
            worst_e = std::max(worst_e, std::abs(v.energy - d.energy));
            worst_s = std::max(worst_s, std::abs(von_neumann_entropy(v, cut) - von_neumann_entropy(d, cut)));
        } catch (const std::exception &e) {
            ++failures;
            std::printf("      lanczos failed at rungs=%zu delta/omega=%.4f rb/a=%.4f: %s\n", p.n_rungs, p.delta_over_omega,
                        p.rb_over_a, e.what());
        }
        max_dim = std::max(max_dim, h.dimension());
    }
    report("lanczos-vs-dense", failures == 0 && worst_e <= 1e-8 && worst_s <= 1e-8,
           fmt("100 cases up to dim %zu, %d unconverged, max |dE| = %.2e, max |dS| = %.2e (tol 1e-8), %.1f s", max_dim,
               failures, worst_e, worst_s, seconds_since(t0)));
}

void bell_anchor() {
    const std::vector<double> v{0.0, M_SQRT1_2, M_SQRT1_2, 0.0};
    const double s = von_neumann_entropy(v, Bipartition(2, 0b01));
    const double err = std::abs(s - std::log(2.0));
    report("bell-anchor", err <= 1e-12, fmt("S = %.17g, |S - ln 2| = %.2e (tol 1e-12)", s, err));
}

void shot_convergence() {
    const std::vector<std::pair<double, double>> cases{{1.0, 1.2}, {2.5, 2.0}, {4.0, 0.8}, {5.5, 3.5}};
    const std::array<std::size_t, 3> shots{1000, 10000, 1000000};
    const Lattice l(2);
    bool pass = true;
    std::string detail;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const SystemParams p{cases[c].first, cases[c].second, 0.0, 2};
        const auto exact = basis_probabilities(ground_state(p, l));
        const auto cut = random_bipartition(l, derive_seed(1006, c));
        const double mi = classical_mutual_information(exact, cut).mi;
        std::array<double, 3> median{};
        for (std::size_t s = 0; s < shots.size(); ++s) {
            std::vector<double> err;
            for (std::uint64_t seed = 0; seed < 50; ++seed) {
                const auto emp = empirical_distribution(sample_bitstrings(exact, shots[s], derive_seed(derive_seed(1006, c), seed)));
                err.push_back(std::abs(classical_mutual_information(emp, cut).mi - mi));
            }
            std::nth_element(err.begin(), err.begin() + 25, err.end());
            const double hi = err[25];
            std::nth_element(err.begin(), err.begin() + 24, err.end());
            median[s] = 0.5 * (err[24] + hi);
        }
        const bool ok = median[0] > median[1] && median[1] > median[2] && median[2] <= 0.01;
        pass = pass && ok;
        detail += fmt("[%.1f,%.1f]: %.1e > %.1e > %.1e%s ", cases[c].first, cases[c].second, median[0], median[1], median[2],
                      ok ? "" : " (!)");
    }
    report("shot-convergence", pass, "median |dMI| at 1e3/1e4/1e6 shots, 2 rungs " + detail);
}

void noise_channels() {
    const Lattice l(6);
    const auto exact = basis_probabilities(ground_state({3.0, 1.5, 0.0, 6}, l));
    const auto shots = sample_bitstrings(exact, 10000, 77);
    const auto same = apply_bitflip_noise(shots, 0.0, 1);
    const auto flipped = apply_bitflip_noise(shots, 1.0, 2);
    const std::uint64_t full = (std::uint64_t{1} << l.n_sites()) - 1;
    bool identity = same.shots == shots.shots;
    bool complement = true;
    for (std::size_t i = 0; i < shots.n_shots(); ++i) complement = complement && flipped.shots[i] == (shots.shots[i] ^ full);

    const auto cut = symmetric_bipartition(l);
    const auto boundary = boundary_sites(l, cut);
    std::uint64_t boundary_mask = 0;
    for (auto s : boundary) boundary_mask |= std::uint64_t{1} << s;
    bool interior_untouched = true;
    std::uint64_t ever_flipped = 0;
    for (std::uint64_t seed = 0; seed < 20000; ++seed) {
        const auto r = perturb_bipartition_boundary(cut, l, 0.5, seed);
        const std::uint64_t changed = r.bipartition.a_mask() ^ cut.a_mask();
        interior_untouched = interior_untouched && (changed & ~boundary_mask) == 0;
        ever_flipped |= changed;
    }
    const bool all_at_one = perturb_bipartition_boundary(cut, l, 1.0, 3).bipartition.a_mask() == (cut.a_mask() ^ boundary_mask);
    const bool identity_cut = perturb_bipartition_boundary(cut, l, 0.0, 3).bipartition == cut;
    report("noise-channels", identity && complement && interior_untouched && all_at_one && identity_cut && ever_flipped == boundary_mask,
           fmt("bitflip p=0 identity %s, p=1 complement %s; boundary flips on 6-rung symmetric cut: %zu boundary sites, "
               "interior untouched over 20000 draws %s",
               identity ? "ok" : "NO", complement ? "ok" : "NO", boundary.size(), interior_untouched ? "ok" : "NO"));
}

void metrics_exactness() {
    using V = std::vector<double>;
    std::vector<std::string> bad;
    auto check = [&](const char *what, bool ok) {
        if (!ok) bad.emplace_back(what);
    };
    check("log_cosh identical", metrics::log_cosh_loss(V{0.3, 0.7}, V{0.3, 0.7}) == 0.0);
    check("log_cosh 1", std::abs(metrics::log_cosh_loss(V{1.0}, V{0.0}) - 0.433781) < 5e-7);
    check("log_cosh 50", std::abs(metrics::log_cosh_loss(V{50.0}, V{0.0}) - (50.0 - std::log(2.0))) <= 1e-9);
    check("mae identical", metrics::mae(V{0.3, 0.7}, V{0.3, 0.7}) == 0.0);
    check("mae [0.5]", metrics::mae(V{0.5}, V{1.0}) == 0.5);
    check("mae [1,3]", metrics::mae(V{1, 3}, V{2, 2}) == 1.0);
    check("mape 10%", std::abs(*metrics::mape_thresholded(V{1.1}, V{1.0}) - 10.0) < 1e-12);
    check("mape threshold", metrics::mape_thresholded(V{5.0, 1.0}, V{1e-9, 1.0}) == 0.0);
    check("mape undefined", !metrics::mape_thresholded(V{1.0}, V{0.0}).has_value());
    const auto c = metrics::paired_comparison(V{0, 0}, V{1, 3});
    check("paired mean", c.mean_diff == 2.0);
    check("paired sd", c.sd_diff == std::sqrt(2.0));
    check("paired t", c.t == 2.0);
    check("paired d", c.cohens_d == std::sqrt(2.0));
    try {
        (void)metrics::paired_comparison(V{0.1, 0.2}, V{0.1, 0.2});
        check("paired degenerate", false);
    } catch (const DegenerateInputError &) {
    }
    const auto b = metrics::bias_test(V{0.2, -0.2, 0.4, -0.4});
    check("bias symmetric", b.mean_bias == 0.0 && b.t == 0.0);
    const auto iv1 = metrics::apply_temperature({{0.1, 0.4, 0.2, 0.3}}, 1.0)[0];
    const auto iv2 = metrics::apply_temperature({{0.1, 0.4, 0.2, 0.3}}, 2.0)[0];
    check("temperature doubling", std::abs(iv2.width() - 2 * iv1.width()) < 1e-15);
    const auto ivc = metrics::apply_temperature({{0.7, 0.7, 0.7}}, 3.0)[0];
    check("constant interval", ivc.lo == 0.7 && ivc.hi == 0.7);
    std::string detail = fmt("paired diffs [1,3]: d = %.17g, t = %.17g", c.cohens_d, c.t);
    for (const auto &w : bad) detail += "; mismatch: " + w;
    report("metrics-exactness", bad.empty(), detail);
}

metrics::PredictionSet gaussian_set(std::size_t n, std::size_t k, double shrink, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> z;
    metrics::PredictionSet ps;
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = 0.6 + 0.4 * z(rng);
        const double sigma = 0.01 + 0.04 * uniform_unit(rng);
        ps.truth.push_back(mu + sigma * z(rng));
        std::vector<double> s(k);
        for (auto &x : s) x = mu + shrink * sigma * z(rng);
        ps.prediction.push_back(mu);
        ps.dropout_samples.push_back(std::move(s));
    }
    return ps;
}

void calibration() {
    const std::size_t n = 10000, k = 1000;
    const auto shrunk = metrics::calibrate_temperature(gaussian_set(n, k, 1.0 / 1.11, derive_seed(1009, 0)));
    const auto unit = metrics::calibrate_temperature(gaussian_set(n, k, 1.0, derive_seed(1009, 1)));
    const bool ok = shrunk.converged && std::abs(shrunk.temperature - 1.11) <= 0.05 && std::abs(shrunk.coverage - 0.95) <= 0.01 &&
                    unit.converged && std::abs(unit.temperature - 1.0) <= 0.05 && std::abs(unit.coverage - 0.95) <= 0.01;
    report("calibration", ok,
           fmt("N=%zu K=%zu; shrunk 1/1.11: T = %.3f (1.11 +- 0.05), coverage %.4f -> %.4f; calibrated: T = %.3f (1 +- 0.05), "
               "coverage %.4f",
               n, k, shrunk.temperature, shrunk.coverage_at_unit, shrunk.coverage, unit.temperature, unit.coverage));
}

void lower_bound_sweep() {
    const auto t0 = Clock::now();
    SweepConfig c;
    c.n_rungs = 6;
    c.delta = {0.0, 6.0};
    c.rb = {0.1, 5.0};
    c.delta_steps = 20;
    c.rb_steps = 20;
    c.partition = PartitionMode::symmetric;
    const auto cells = sweep_grid(c);
    const double t = seconds_since(t0);
    std::size_t failed = 0;
    double worst_sym = 0.0;
    for (const auto &cell : cells) {
        if (!cell.ok) {
            ++failed;
            continue;
        }
        worst_sym = std::max(worst_sym, std::abs(cell.s_vn - cell.s_vn_complement));
    }
    const auto half = lower_bound_report(cells, MiComparator::half_mi);
    const auto full = lower_bound_report(cells, MiComparator::mi);
    std::filesystem::create_directories("acceptance_out");
    std::ofstream csv("acceptance_out/sweep_6rung_20x20.csv");
    write_grid_csv(csv, cells);
    report("mi-lower-bound-report", failed == 0 && cells.size() == 400 && t < 600.0 && worst_sym <= 1e-9,
           fmt("400 cells in %.1f s (limit 600 s), %zu failed, max |S_A - S_B| = %.1e; half_mi <= S_vN + 1e-9 in %.4f of "
               "cells (max excess %.3e); mi: %.4f",
               t, failed, worst_sym, half.fraction, half.max_violation, full.fraction));
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void determinism() {
    std::filesystem::create_directories("acceptance_out");
    std::string reference;
    bool same = true;
    std::size_t bytes = 0;
    for (std::size_t workers : {1, 2, 4}) {
        GenerationConfig g;
        g.per_rung = {{1, 40}, {2, 40}, {3, 40}, {4, 20}, {5, 10}, {6, 5}};
        g.master_seed = 20260101;
        g.noise = {1000, 0.01, 0.01};
        g.workers = workers;
        g.out = "acceptance_out/determinism_w" + std::to_string(workers) + ".jsonl";
        g.raw_out = "acceptance_out/determinism_w" + std::to_string(workers) + ".raw.jsonl";
        generate_dataset(g);
        const std::string text = slurp(g.out) + slurp(*g.raw_out);
        if (reference.empty()) {
            reference = text;
            bytes = text.size();
        }
        same = same && text == reference;
    }
    report("determinism", same && bytes > 0, fmt("155 draws with shots and noise, workers 1/2/4, %zu bytes each: %s", bytes,
                                                 same ? "byte-identical" : "DIFFER"));
}

} // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<void()>>> checks{
        {"entropy-oracle", entropy_oracle},       {"purity-symmetry", purity_symmetry},
        {"decoupled-limit", decoupled_limit},     {"lanczos-vs-dense", lanczos_vs_dense},
        {"bell-anchor", bell_anchor},             {"shot-convergence", shot_convergence},
        {"noise-channels", noise_channels},       {"metrics-exactness", metrics_exactness},
        {"calibration", calibration},             {"mi-lower-bound-report", lower_bound_sweep},
        {"determinism", determinism},
    };
    for (const auto &[name, run] : checks) {
        try {
            run();
        } catch (const std::exception &e) {
            report(name, false, std::string("threw: ") + e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", g_failures, checks.size());
    return g_failures == 0 ? 0 : 1;
}
