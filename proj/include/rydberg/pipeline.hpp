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

// Parameter sampling, dataset generation, phase-diagram sweeps.
//
// Every record is a pure function of (config, record index): per-record seeds
// come from derive_seed(master_seed, index), so outputs do not depend on the
// number of workers or on scheduling.

#include "rydberg/features.hpp"
#include "rydberg/lattice.hpp"
#include "rydberg/quantum_info.hpp"
#include "rydberg/sampler.hpp"
#include "rydberg/spectrum.hpp"

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rydberg {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

inline constexpr Range kDefaultDeltaRange{0.0, 6.0};
inline constexpr Range kDefaultRbRange{0.1, 5.0};

// Rung count -> number of draws used for the full-size dataset.
std::map<std::size_t, std::size_t> full_scale_counts();

struct NoiseOptions {
    std::size_t shots = 0; // 0 = exact probabilities
    double bitflip_p = 0.0;
    double boundary_flip_p = 0.0;

    void validate() const;
};

struct GenerationConfig {
    Range delta = kDefaultDeltaRange;
    Range rb = kDefaultRbRange;
    std::map<std::size_t, std::size_t> per_rung{{1, 100}, {2, 100}, {3, 100}};
    std::uint64_t master_seed = 0;
    NoiseOptions noise;
    PartitionMode partition = PartitionMode::random;
    std::size_t partitions_per_draw = 1;
    FeatureOptions features;
    SolverConfig solver;
    std::size_t workers = 1;
    std::filesystem::path out;
    std::optional<std::filesystem::path> raw_out;
    double max_failure_fraction = 0.01;
    const std::atomic<bool> *cancel = nullptr;

    void validate() const;
};

struct ParameterDraw {
    std::uint64_t index = 0;
    std::uint64_t sample_seed = 0;
    SystemParams params;
};

std::size_t total_draws(const GenerationConfig &config);
// Draws are ordered by rung count, then by position within that rung's block.
ParameterDraw parameter_draw(const GenerationConfig &config, std::uint64_t index);
std::vector<ParameterDraw> sample_parameters(const GenerationConfig &config);

struct SampleOutcome {
    GraphSample graph;
    RawSample raw;
};

// All records of one draw (partitions_per_draw of them, sharing a ground state).
std::vector<SampleOutcome> process_draw(const GenerationConfig &config, const ParameterDraw &draw);

struct GenerationSummary {
    std::size_t requested = 0;
    std::size_t written = 0;
    std::size_t failed = 0;
    std::size_t degenerate = 0;
    bool cancelled = false;
    double s_vn_min = 0.0;
    double s_vn_max = 0.0;
    double s_vn_mean = 0.0;
    double wall_seconds = 0.0;

    [[nodiscard]] double failure_fraction() const noexcept;
    [[nodiscard]] std::string to_json() const;
};

// Writes config.out (graph records) and optionally config.raw_out. Solver
// failures are logged and skipped.
GenerationSummary generate_dataset(const GenerationConfig &config);

struct SweepConfig {
    std::size_t n_rungs = 6;
    Range delta = kDefaultDeltaRange;
    std::size_t delta_steps = 20;
    Range rb = kDefaultRbRange;
    std::size_t rb_steps = 20;
    PartitionMode partition = PartitionMode::symmetric;
    std::uint64_t master_seed = 0;
    NoiseOptions noise;
    FeatureOptions features;
    SolverConfig solver;
    std::size_t workers = 1;
    const std::atomic<bool> *cancel = nullptr;

    void validate() const;
};

struct GridCell {
    std::size_t row = 0; // delta index
    std::size_t col = 0; // rb index
    double delta_over_omega = 0.0;
    double rb_over_a = 0.0;
    bool ok = false;
    std::string error;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    double s_vn = 0.0;
    double s_vn_complement = 0.0;
    double mi = 0.0;
    double half_mi = 0.0;
    std::optional<double> mi_noisy;
    std::optional<double> half_mi_noisy;
    double energy = 0.0;
    std::optional<double> gap;
    bool degenerate = false;
    std::optional<GraphSample> graph;
};

// Grid axis values; steps == 1 is allowed only for a degenerate range.
std::vector<double> axis_values(Range range, std::size_t steps);

// Row-major over (delta, rb).
std::vector<GridCell> sweep_grid(const SweepConfig &config);

void write_grid_csv(std::ostream &out, const std::vector<GridCell> &cells);
std::vector<GridCell> read_grid_csv(std::istream &in);

struct LowerBoundReport {
    std::size_t cells = 0;
    std::size_t satisfied = 0;
    double fraction = 0.0;
    double max_violation = 0.0;
    MiComparator comparator = kDefaultComparator;
};

// Counts cells with comparator <= s_vn + tol.
LowerBoundReport lower_bound_report(const std::vector<GridCell> &cells, MiComparator comparator, double tol = 1e-9,
                                    bool noisy = false);

struct CaseConfig {
    SystemParams params;
    PartitionMode partition = PartitionMode::random;
    std::optional<std::vector<std::size_t>> subsystem; // explicit A sites override `partition`
    std::uint64_t seed = 0;
    NoiseOptions noise{kDefaultShots, 0.0, 0.0};
    SolverConfig solver;
};

struct CaseResult {
    GroundState state;
    Bipartition target;
    Bipartition observed;
    ShotSet shots;
    EntropyRecord exact;
    EntropyRecord measured;
    std::vector<double> p_exact;
    std::vector<double> p_measured;
    bool boundary_fallback = false;
};

// Shot and noise simulation of one stored case.
CaseResult simulate_case(const CaseConfig &config);

} // namespace rydberg
