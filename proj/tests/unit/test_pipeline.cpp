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

#include "rydberg/errors.hpp"
#include "rydberg/features.hpp"
#include "rydberg/pipeline.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rydberg;

namespace {

std::filesystem::path temp_file(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("rydberg_pipeline_" + name);
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GenerationConfig small_config(const std::string &name) {
    GenerationConfig c;
    c.per_rung = {{1, 10}, {2, 10}, {3, 10}};
    c.master_seed = 31337;
    c.out = temp_file(name);
    return c;
}

} // namespace

TEST(Parameters, DefaultRanges) {
    GenerationConfig c;
    EXPECT_EQ(c.delta.lo, 0.0);
    EXPECT_EQ(c.delta.hi, 6.0);
    EXPECT_EQ(c.rb.lo, 0.1);
    EXPECT_EQ(c.rb.hi, 5.0);
    c.per_rung = {{1, 2000}, {2, 2000}};
    for (const auto &d : sample_parameters(c)) {
        EXPECT_GE(d.params.delta_over_omega, 0.0);
        EXPECT_LT(d.params.delta_over_omega, 6.0);
        EXPECT_GE(d.params.rb_over_a, 0.1);
        EXPECT_LT(d.params.rb_over_a, 5.0);
    }
}

TEST(Parameters, FullScaleCounts) {
    const std::map<std::size_t, std::size_t> want{{1, 30000}, {2, 60000}, {3, 100000}, {4, 200000}, {5, 350000}, {6, 500000}};
    EXPECT_EQ(full_scale_counts(), want);
    GenerationConfig c;
    c.per_rung = full_scale_counts();
    EXPECT_EQ(total_draws(c), 1240000u);
    EXPECT_EQ(parameter_draw(c, 0).params.n_rungs, 1u);
    EXPECT_EQ(parameter_draw(c, 29999).params.n_rungs, 1u);
    EXPECT_EQ(parameter_draw(c, 30000).params.n_rungs, 2u);
    EXPECT_EQ(parameter_draw(c, 1239999).params.n_rungs, 6u);
    EXPECT_THROW(parameter_draw(c, 1240000), InvalidArgument);
}

TEST(Parameters, DeskScaleExactCounts) {
    GenerationConfig c;
    c.per_rung = {{1, 1000}, {2, 1000}, {3, 1000}};
    std::map<std::size_t, std::size_t> seen;
    for (const auto &d : sample_parameters(c)) ++seen[d.params.n_rungs];
    EXPECT_EQ(seen, c.per_rung);
}

TEST(Parameters, UniformMoments) {
    GenerationConfig c;
    c.per_rung = {{2, 20000}};
    double sd = 0, sr = 0;
    for (const auto &d : sample_parameters(c)) {
        sd += d.params.delta_over_omega;
        sr += d.params.rb_over_a;
    }
    EXPECT_NEAR(sd / 20000, 3.0, 4 * 6.0 / std::sqrt(12.0 * 20000));
    EXPECT_NEAR(sr / 20000, 2.55, 4 * 4.9 / std::sqrt(12.0 * 20000));
}

TEST(Parameters, Deterministic) {
    GenerationConfig c;
    c.master_seed = 5;
    const auto a = parameter_draw(c, 17);
    const auto b = parameter_draw(c, 17);
    EXPECT_EQ(a.params.delta_over_omega, b.params.delta_over_omega);
    EXPECT_EQ(a.sample_seed, b.sample_seed);
    c.master_seed = 6;
    EXPECT_NE(parameter_draw(c, 17).params.delta_over_omega, a.params.delta_over_omega);
}

TEST(Config, Validation) {
    GenerationConfig c;
    c.noise.bitflip_p = 0.01;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c.noise.shots = 100;
    EXPECT_NO_THROW(c.validate());
    c.partition = PartitionMode::symmetric;
    EXPECT_THROW(c.validate(), InvalidArgument); // odd rung counts
    c.per_rung = {{2, 10}};
    EXPECT_NO_THROW(c.validate());
    c.partitions_per_draw = 2;
    EXPECT_THROW(c.validate(), InvalidArgument);
    GenerationConfig d;
    d.rb = {-1.0, 2.0};
    EXPECT_THROW(d.validate(), InvalidArgument);
    d.rb = {3.0, 2.0};
    EXPECT_THROW(d.validate(), InvalidArgument);
}

TEST(Generate, DeskConfigBounds) {
    auto c = small_config("desk.jsonl");
    c.per_rung = {{1, 100}, {2, 100}, {3, 100}};
    const auto summary = generate_dataset(c);
    EXPECT_EQ(summary.written, 300u);
    EXPECT_EQ(summary.failed, 0u);
    const auto samples = read_samples(c.out);
    ASSERT_EQ(samples.size(), 300u);
    double lo = 1e9, hi = -1e9;
    for (const auto &s : samples) {
        const auto bip = Bipartition::from_flags(s.metadata.target_mask);
        EXPECT_GE(s.targets.s_vn, -1e-12);
        EXPECT_LE(s.targets.s_vn, double(std::min(bip.n_a(), bip.n_b())) * std::log(2.0) + 1e-9);
        lo = std::min(lo, s.targets.s_vn);
        hi = std::max(hi, s.targets.s_vn);
        EXPECT_EQ(s.mask, s.metadata.target_mask);
        EXPECT_TRUE(s.metadata.noise.exact());
    }
    EXPECT_DOUBLE_EQ(summary.s_vn_min, lo);
    EXPECT_DOUBLE_EQ(summary.s_vn_max, hi);
    EXPECT_TRUE(std::filesystem::exists(c.out.string() + ".summary.json"));
}

TEST(Generate, ByteIdenticalAcrossRunsAndWorkers) {
    std::string reference;
    for (std::size_t workers : {1, 2, 4}) {
        auto c = small_config("det" + std::to_string(workers) + ".jsonl");
        c.workers = workers;
        c.noise = {500, 0.01, 0.01};
        c.raw_out = temp_file("det_raw" + std::to_string(workers) + ".jsonl");
        generate_dataset(c);
        const std::string text = slurp(c.out) + slurp(*c.raw_out);
        if (reference.empty()) reference = text;
        EXPECT_EQ(text, reference) << workers;
    }
}

TEST(Generate, NoisyRecordsCarryProvenance) {
    auto c = small_config("noisy.jsonl");
    c.noise = {2000, 0.01, 0.0};
    generate_dataset(c);
    for (const auto &s : read_samples(c.out)) {
        EXPECT_EQ(s.metadata.noise.shots, 2000u);
        EXPECT_EQ(s.metadata.noise.bitflip_p, 0.01);
        EXPECT_TRUE(s.targets.mi_exact.has_value());
    }
}

TEST(Generate, FailuresAreSkipped) {
    auto c = small_config("fail.jsonl");
    c.per_rung = {{1, 3}, {3, 4}};
    c.solver.choice = SolverChoice::davidson;
    c.solver.davidson.max_iter = 1;
    const auto s = generate_dataset(c);
    EXPECT_EQ(s.failed + s.written, 7u);
    EXPECT_GT(s.failed, 0u);
    EXPECT_GT(s.failure_fraction(), c.max_failure_fraction);
    EXPECT_EQ(read_samples(c.out).size(), s.written);
}

TEST(Generate, CancelledBeforeStart) {
    auto c = small_config("cancel.jsonl");
    std::atomic<bool> stop{true};
    c.cancel = &stop;
    c.workers = 2;
    const auto s = generate_dataset(c);
    EXPECT_TRUE(s.cancelled);
    EXPECT_EQ(s.written, 0u);
    EXPECT_TRUE(std::filesystem::exists(c.out.string() + ".summary.json"));
}

TEST(Generate, SeveralPartitionsPerDraw) {
    auto c = small_config("multi.jsonl");
    c.per_rung = {{3, 5}};
    c.partitions_per_draw = 3;
    const auto s = generate_dataset(c);
    EXPECT_EQ(s.written, 15u);
    const auto samples = read_samples(c.out);
    EXPECT_EQ(samples[0].metadata.energy, samples[2].metadata.energy);
}

TEST(Sweep, AxisValues) {
    EXPECT_EQ(axis_values({0, 6}, 4), (std::vector<double>{0, 2, 4, 6}));
    EXPECT_EQ(axis_values({1, 1}, 1), (std::vector<double>{1}));
    EXPECT_THROW(axis_values({0, 1}, 1), InvalidArgument);
}

TEST(Sweep, CellsMatchDirectComputation) {
    SweepConfig c;
    c.n_rungs = 1;
    c.partition = PartitionMode::random;
    c.delta_steps = 2;
    c.rb_steps = 2;
    const auto cells = sweep_grid(c);
    ASSERT_EQ(cells.size(), 4u);
    const Lattice l = build_ladder(1);
    for (const auto &cell : cells) {
        ASSERT_TRUE(cell.ok);
        const auto g = ground_state({cell.delta_over_omega, cell.rb_over_a, 0.0, 1}, l);
        EXPECT_NEAR(cell.s_vn, von_neumann_entropy(g, Bipartition(2, 1)), 1e-12);
        EXPECT_NEAR(cell.energy, g.energy, 1e-12);
    }
    EXPECT_EQ(cells[1].row, 0u);
    EXPECT_EQ(cells[1].col, 1u);
    EXPECT_EQ(cells[2].delta_over_omega, 6.0);
}

TEST(Sweep, NoisyCellsStoreBoth) {
    SweepConfig c;
    c.n_rungs = 2;
    c.delta_steps = 2;
    c.rb_steps = 3;
    c.noise = {1000, 0.01, 0.01};
    const auto cells = sweep_grid(c);
    for (const auto &cell : cells) {
        ASSERT_TRUE(cell.mi_noisy.has_value());
        ASSERT_TRUE(cell.half_mi_noisy.has_value());
        EXPECT_DOUBLE_EQ(cell.half_mi, cell.mi / 2);
    }
    std::stringstream io;
    write_grid_csv(io, cells);
    const auto back = read_grid_csv(io);
    ASSERT_EQ(back.size(), cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        EXPECT_EQ(back[i].s_vn, cells[i].s_vn);
        EXPECT_EQ(back[i].mi_noisy, cells[i].mi_noisy);
        EXPECT_EQ(back[i].gap, cells[i].gap);
    }
}

TEST(Sweep, SymmetricCutEntropiesAgree) {
    SweepConfig c;
    c.n_rungs = 4;
    c.delta_steps = 3;
    c.rb_steps = 3;
    for (const auto &cell : sweep_grid(c)) EXPECT_NEAR(cell.s_vn, cell.s_vn_complement, 1e-9);
}

TEST(Sweep, BadCsv) {
    std::stringstream bad("row,col\n1,2\n");
    EXPECT_THROW(read_grid_csv(bad), ParseError);
}

TEST(LowerBound, Report) {
    std::vector<GridCell> cells(3);
    for (auto &c : cells) c.ok = true;
    cells[0].s_vn = 1.0, cells[0].half_mi = 0.5, cells[0].mi = 1.0;
    cells[1].s_vn = 0.1, cells[1].half_mi = 0.2, cells[1].mi = 0.4;
    cells[2].ok = false;
    const auto r = lower_bound_report(cells, MiComparator::half_mi);
    EXPECT_EQ(r.cells, 2u);
    EXPECT_EQ(r.satisfied, 1u);
    EXPECT_DOUBLE_EQ(r.fraction, 0.5);
    EXPECT_NEAR(r.max_violation, 0.1, 1e-15);
    EXPECT_EQ(lower_bound_report(cells, MiComparator::half_mi, 1e-9, true).cells, 0u);
}

TEST(Case, ShotSimulation) {
    CaseConfig c;
    c.params = {2.0, 1.5, 0.0, 2};
    c.subsystem = std::vector<std::size_t>{0, 1};
    c.noise.shots = 200000;
    const auto r = simulate_case(c);
    EXPECT_EQ(r.shots.n_shots(), 200000u);
    EXPECT_EQ(r.target.a_sites(), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(r.observed, r.target);
    EXPECT_NEAR(r.measured.mi, r.exact.mi, 0.01);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r.p_measured[i], r.p_exact[i], 0.01);
    c.noise.shots = 0;
    EXPECT_THROW(simulate_case(c), InvalidArgument);
}
