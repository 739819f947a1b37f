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

#include "rydberg/pipeline.hpp"

#include "rydberg/errors.hpp"
#include "rydberg/seeding.hpp"

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

extern "C" void openblas_set_num_threads(int);

namespace rydberg {

std::map<std::size_t, std::size_t> full_scale_counts() {
    return {{1, 30000}, {2, 60000}, {3, 100000}, {4, 200000}, {5, 350000}, {6, 500000}};
}

void NoiseOptions::validate() const {
    if (!(bitflip_p >= 0.0 && bitflip_p <= 1.0)) throw InvalidArgument("bit-flip probability must lie in [0, 1]");
    if (!(boundary_flip_p >= 0.0 && boundary_flip_p <= 1.0))
        throw InvalidArgument("boundary flip probability must lie in [0, 1]");
    if (bitflip_p > 0.0 && shots == 0) throw InvalidArgument("bit-flip noise acts on measured shots; set a shot count");
}

namespace {

void validate_range(Range r, const char *name, double floor) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
        throw InvalidArgument(std::string(name) + " range is empty or not finite");
    if (r.lo < floor) throw InvalidArgument(std::string(name) + " range must start at or above " + std::to_string(floor));
}

// Results land in index order on the calling thread no matter which worker
// produced them. On cancellation, in-flight tasks finish and the contiguous
// prefix is delivered.
template <class Result>
bool ordered_parallel(std::size_t n, std::size_t workers, const std::atomic<bool> *cancel,
                      const std::function<Result(std::size_t)> &task,
                      const std::function<void(std::size_t, Result &&)> &sink) {
    const auto cancelled = [&] { return cancel != nullptr && cancel->load(std::memory_order_relaxed); };
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            if (cancelled()) return false;
            sink(i, task(i));
        }
        return true;
    }

    std::mutex mu;
    std::condition_variable ready, space;
    std::map<std::size_t, Result> done;
    std::size_t next_task = 0;
    std::size_t next_write = 0;
    std::size_t in_flight = 0;
    bool stop = false;
    const std::size_t window = 8 * workers;

    auto worker = [&] {
        while (true) {
            std::size_t i = 0;
            {
                std::unique_lock lock(mu);
                space.wait(lock, [&] { return stop || next_task >= n || next_task < next_write + window; });
                if (stop || next_task >= n) return;
                if (cancelled()) {
                    stop = true;
                    ready.notify_all();
                    space.notify_all();
                    return;
                }
                i = next_task++;
                ++in_flight;
            }
            Result r = task(i);
            {
                std::lock_guard lock(mu);
                done.emplace(i, std::move(r));
                --in_flight;
            }
            ready.notify_all();
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);

    bool complete = true;
    while (next_write < n) {
        Result r;
        {
            std::unique_lock lock(mu);
            ready.wait(lock, [&] { return done.contains(next_write) || (stop && in_flight == 0); });
            auto it = done.find(next_write);
            if (it == done.end()) {
                complete = false;
                break;
            }
            r = std::move(it->second);
            done.erase(it);
        }
        sink(next_write, std::move(r));
        {
            std::lock_guard lock(mu);
            ++next_write;
        }
        space.notify_all();
    }
    {
        std::lock_guard lock(mu);
        stop = true;
    }
    space.notify_all();
    return complete && next_write == n;
}

struct RecordInputs {
    const Lattice &lattice;
    const GroundState &state;
    const BasisDistribution &exact;
    SystemParams params;
    PartitionMode partition;
    NoiseOptions noise;
    FeatureOptions features;
    SampleSeeds seeds;
    std::uint64_t partition_slot = 0;
};

SampleOutcome evaluate_record(const RecordInputs &in) {
    const std::uint64_t seed = in.seeds.sample;
    const Bipartition target = in.partition == PartitionMode::symmetric
                                   ? symmetric_bipartition(in.lattice)
                                   : random_bipartition(in.lattice, derive_seed(derive_seed(seed, Stream::bipartition), in.partition_slot));

    NoiseDescriptor noise;
    noise.bitflip_p = in.noise.bitflip_p;
    noise.boundary_flip_p = in.noise.boundary_flip_p;

    const BasisDistribution *observed = &in.exact;
    BasisDistribution measured;
    if (in.noise.shots > 0) {
        ShotSet shots = sample_bitstrings(in.exact, in.noise.shots, derive_seed(derive_seed(seed, Stream::shots), in.partition_slot));
        if (in.noise.bitflip_p > 0.0)
            shots = apply_bitflip_noise(shots, in.noise.bitflip_p, derive_seed(derive_seed(seed, Stream::bitflip), in.partition_slot));
        measured = empirical_distribution(shots);
        observed = &measured;
        noise.shots = in.noise.shots;
    }
    Bipartition seen = target;
    if (in.noise.boundary_flip_p > 0.0) {
        auto perturbed = perturb_bipartition_boundary(target, in.lattice, in.noise.boundary_flip_p,
                                                      derive_seed(derive_seed(seed, Stream::boundary), in.partition_slot));
        seen = perturbed.bipartition;
        noise.boundary_fallback = perturbed.fallback;
    }

    Targets targets;
    targets.s_vn = von_neumann_entropy(in.state, target);
    const EntropyRecord mi = classical_mutual_information(*observed, seen);
    targets.mi = mi.mi;
    targets.half_mi = mi.half_mi;
    if (!noise.exact()) {
        const EntropyRecord exact_mi = classical_mutual_information(in.exact, target);
        targets.mi_exact = exact_mi.mi;
        targets.half_mi_exact = exact_mi.half_mi;
    }

    SampleMetadata meta;
    meta.params = in.params;
    meta.partition = in.partition;
    meta.target_mask = target.flags();
    meta.noise = noise;
    meta.seeds = in.seeds;
    meta.degenerate = in.state.degenerate;
    meta.energy = in.state.energy;
    meta.gap = in.state.gap;
    meta.solver = to_string(in.state.solver);

    SampleOutcome out;
    out.raw.mask = seen.flags();
    out.raw.p = rydberg_probabilities(*observed);
    out.raw.correlations = two_point_correlations(*observed);
    out.raw.fourth_moment = fourth_cross_moment(*observed);
    out.raw.targets = targets;
    out.raw.metadata = meta;
    out.graph = featurize(in.lattice, seen, out.raw.p, out.raw.correlations, in.features, &out.raw.fourth_moment);
    out.graph.targets = targets;
    out.graph.metadata = meta;
    return out;
}

SolverConfig seeded_solver(SolverConfig solver, std::uint64_t sample_seed) {
    const std::uint64_t s = derive_seed(sample_seed, Stream::lanczos);
    solver.lanczos.seed = s;
    solver.davidson.seed = s;
    return solver;
}

void pin_blas_threads() { openblas_set_num_threads(1); }

} // namespace

void GenerationConfig::validate() const {
    validate_range(delta, "delta_over_omega", -std::numeric_limits<double>::infinity());
    validate_range(rb, "rb_over_a", 0.0);
    noise.validate();
    if (partitions_per_draw == 0) throw InvalidArgument("partitions_per_draw must be >= 1");
    if (partitions_per_draw > 1 && partition == PartitionMode::symmetric)
        throw InvalidArgument("several partitions per draw only make sense for random partitions");
    if (workers == 0) throw InvalidArgument("workers must be >= 1");
    if (features.cutoff && !(*features.cutoff > 0.0)) throw InvalidArgument("edge cutoff must be positive");
    if (!(max_failure_fraction >= 0.0)) throw InvalidArgument("max_failure_fraction must be >= 0");
    for (auto [rungs, count] : per_rung) {
        if (rungs == 0 || 2 * rungs > kMaxSites) throw InvalidArgument("invalid rung count " + std::to_string(rungs));
        if (partition == PartitionMode::symmetric && rungs % 2 != 0 && count > 0)
            throw InvalidArgument("symmetric partitions need even rung counts, got " + std::to_string(rungs));
    }
}

std::size_t total_draws(const GenerationConfig &config) {
    std::size_t total = 0;
    for (auto [rungs, count] : config.per_rung) total += count;
    return total;
}

ParameterDraw parameter_draw(const GenerationConfig &config, std::uint64_t index) {
    std::uint64_t offset = index;
    std::size_t rungs = 0;
    for (auto [r, count] : config.per_rung) {
        if (offset < count) {
            rungs = r;
            break;
        }
        offset -= count;
    }
    if (rungs == 0) throw InvalidArgument("draw index " + std::to_string(index) + " out of range");

    ParameterDraw d;
    d.index = index;
    d.sample_seed = derive_seed(config.master_seed, index);
    Rng rng(derive_seed(d.sample_seed, Stream::parameters));
    d.params.n_rungs = rungs;
    d.params.delta_over_omega = config.delta.lo + (config.delta.hi - config.delta.lo) * uniform_unit(rng);
    d.params.rb_over_a = config.rb.lo + (config.rb.hi - config.rb.lo) * uniform_unit(rng);
    return d;
}

std::vector<ParameterDraw> sample_parameters(const GenerationConfig &config) {
    const std::size_t n = total_draws(config);
    std::vector<ParameterDraw> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(parameter_draw(config, i));
    return out;
}

std::vector<SampleOutcome> process_draw(const GenerationConfig &config, const ParameterDraw &draw) {
    const Lattice lattice(draw.params.n_rungs);
    const GroundState state = ground_state(draw.params, lattice, seeded_solver(config.solver, draw.sample_seed));
    const BasisDistribution exact = basis_probabilities(state);
    std::vector<SampleOutcome> out;
    for (std::size_t j = 0; j < config.partitions_per_draw; ++j) {
        RecordInputs in{lattice, state, exact, draw.params, config.partition, config.noise, config.features,
                        SampleSeeds{config.master_seed, draw.index, draw.sample_seed}, j};
        out.push_back(evaluate_record(in));
    }
    return out;
}

double GenerationSummary::failure_fraction() const noexcept {
    const std::size_t attempted = written + failed;
    return attempted == 0 ? 0.0 : static_cast<double>(failed) / static_cast<double>(attempted);
}

std::string GenerationSummary::to_json() const {
    nlohmann::json j;
    j["requested_draws"] = requested;
    j["records_written"] = written;
    j["failed_draws"] = failed;
    j["failure_fraction"] = failure_fraction();
    j["degenerate_records"] = degenerate;
    j["cancelled"] = cancelled;
    j["s_vn"] = {{"min", s_vn_min}, {"max", s_vn_max}, {"mean", s_vn_mean}};
    j["wall_seconds"] = wall_seconds;
    j["records_per_second"] = wall_seconds > 0.0 ? static_cast<double>(written) / wall_seconds : 0.0;
    return j.dump(2);
}

GenerationSummary generate_dataset(const GenerationConfig &config) {
    config.validate();
    pin_blas_threads();
    const auto start = std::chrono::steady_clock::now();

    std::ofstream out(config.out, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + config.out.string() + " for writing");
    std::ofstream raw;
    if (config.raw_out) {
        raw.open(*config.raw_out, std::ios::binary | std::ios::trunc);
        if (!raw) throw std::runtime_error("cannot open " + config.raw_out->string() + " for writing");
    }

    struct DrawResult {
        std::vector<SampleOutcome> outcomes;
        std::string error;
        SystemParams params;
    };

    GenerationSummary summary;
    summary.requested = total_draws(config);
    double sum = 0.0;
    summary.s_vn_min = std::numeric_limits<double>::infinity();
    summary.s_vn_max = -std::numeric_limits<double>::infinity();

    const std::function<DrawResult(std::size_t)> task = [&](std::size_t i) {
        DrawResult r;
        const ParameterDraw draw = parameter_draw(config, i);
        r.params = draw.params;
        try {
            r.outcomes = process_draw(config, draw);
        } catch (const std::exception &e) {
            r.error = e.what();
        }
        return r;
    };
    const std::function<void(std::size_t, DrawResult &&)> sink = [&](std::size_t i, DrawResult &&r) {
        if (!r.error.empty()) {
            ++summary.failed;
            spdlog::warn("draw {} (rungs={}, delta/omega={:.6f}, rb/a={:.6f}) skipped: {}", i, r.params.n_rungs,
                         r.params.delta_over_omega, r.params.rb_over_a, r.error);
            return;
        }
        for (const auto &o : r.outcomes) {
            out << to_line(o.graph) << '\n';
            if (raw.is_open()) raw << to_line(o.raw) << '\n';
            ++summary.written;
            if (o.graph.metadata.degenerate) ++summary.degenerate;
            const double s = o.graph.targets.s_vn;
            sum += s;
            summary.s_vn_min = std::min(summary.s_vn_min, s);
            summary.s_vn_max = std::max(summary.s_vn_max, s);
        }
    };

    const bool complete = ordered_parallel<DrawResult>(summary.requested, config.workers, config.cancel, task, sink);
    summary.cancelled = !complete;
    out.flush();
    if (raw.is_open()) raw.flush();
    if (!out || (raw.is_open() && !raw)) throw std::runtime_error("write to dataset file failed");

    if (summary.written == 0) summary.s_vn_min = summary.s_vn_max = 0.0;
    summary.s_vn_mean = summary.written > 0 ? sum / static_cast<double>(summary.written) : 0.0;
    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ofstream report(config.out.string() + ".summary.json", std::ios::trunc);
    report << summary.to_json() << '\n';
    return summary;
}

void SweepConfig::validate() const {
    if (n_rungs == 0 || 2 * n_rungs > kMaxSites) throw InvalidArgument("invalid rung count");
    if (partition == PartitionMode::symmetric && n_rungs % 2 != 0)
        throw InvalidArgument("symmetric partitions need an even number of rungs");
    validate_range(delta, "delta_over_omega", -std::numeric_limits<double>::infinity());
    validate_range(rb, "rb_over_a", 0.0);
    (void)axis_values(delta, delta_steps);
    (void)axis_values(rb, rb_steps);
    noise.validate();
    if (workers == 0) throw InvalidArgument("workers must be >= 1");
}

std::vector<double> axis_values(Range range, std::size_t steps) {
    if (steps == 1 && range.lo == range.hi) return {range.lo};
    if (steps < 2) throw InvalidArgument("a sweep axis needs at least two steps (or one step on a single value)");
    std::vector<double> out(steps);
    for (std::size_t k = 0; k < steps; ++k)
        out[k] = range.lo + (range.hi - range.lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
    out.back() = range.hi;
    return out;
}

std::vector<GridCell> sweep_grid(const SweepConfig &config) {
    config.validate();
    pin_blas_threads();
    const auto deltas = axis_values(config.delta, config.delta_steps);
    const auto rbs = axis_values(config.rb, config.rb_steps);
    const Lattice lattice(config.n_rungs);
    const bool noisy = config.noise.shots > 0 || config.noise.boundary_flip_p > 0.0;

    const std::function<GridCell(std::size_t)> task = [&](std::size_t index) {
        GridCell cell;
        cell.row = index / rbs.size();
        cell.col = index % rbs.size();
        cell.delta_over_omega = deltas[cell.row];
        cell.rb_over_a = rbs[cell.col];
        try {
            SystemParams params{cell.delta_over_omega, cell.rb_over_a, 0.0, config.n_rungs};
            const std::uint64_t seed = derive_seed(config.master_seed, index);
            const GroundState state = ground_state(params, lattice, seeded_solver(config.solver, seed));
            const BasisDistribution exact = basis_probabilities(state);
            RecordInputs in{lattice, state, exact, params, config.partition, config.noise, config.features,
                            SampleSeeds{config.master_seed, index, seed}, 0};
            SampleOutcome o = evaluate_record(in);

            const Bipartition target = Bipartition::from_flags(o.graph.metadata.target_mask);
            cell.n_a = target.n_a();
            cell.n_b = target.n_b();
            cell.s_vn = o.graph.targets.s_vn;
            cell.s_vn_complement = von_neumann_entropy(state, target.complement());
            if (noisy) {
                cell.mi = *o.graph.targets.mi_exact;
                cell.half_mi = *o.graph.targets.half_mi_exact;
                cell.mi_noisy = o.graph.targets.mi;
                cell.half_mi_noisy = o.graph.targets.half_mi;
            } else {
                cell.mi = o.graph.targets.mi;
                cell.half_mi = o.graph.targets.half_mi;
            }
            cell.energy = state.energy;
            cell.gap = state.gap;
            cell.degenerate = state.degenerate;
            cell.graph = std::move(o.graph);
            cell.ok = true;
        } catch (const std::exception &e) {
            cell.error = e.what();
        }
        return cell;
    };

    std::vector<GridCell> cells;
    cells.reserve(deltas.size() * rbs.size());
    const std::function<void(std::size_t, GridCell &&)> sink = [&](std::size_t, GridCell &&cell) {
        if (!cell.ok)
            spdlog::warn("sweep cell ({}, {}) delta/omega={:.6f} rb/a={:.6f} failed: {}", cell.row, cell.col,
                         cell.delta_over_omega, cell.rb_over_a, cell.error);
        cells.push_back(std::move(cell));
    };
    ordered_parallel<GridCell>(deltas.size() * rbs.size(), config.workers, config.cancel, task, sink);
    return cells;
}

namespace {

std::string fmt_double(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::string fmt_optional(const std::optional<double> &x) { return x ? fmt_double(*x) : std::string{}; }

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

const char *kGridHeader = "row,col,delta_over_omega,rb_over_a,status,n_a,n_b,s_vn,s_vn_complement,mi,half_mi,"
                          "mi_noisy,half_mi_noisy,energy,gap,degenerate";

} // namespace

void write_grid_csv(std::ostream &out, const std::vector<GridCell> &cells) {
    out << kGridHeader << '\n';
    for (const auto &c : cells) {
        out << c.row << ',' << c.col << ',' << fmt_double(c.delta_over_omega) << ',' << fmt_double(c.rb_over_a) << ','
            << (c.ok ? "ok" : "failed") << ',';
        if (c.ok) {
            out << c.n_a << ',' << c.n_b << ',' << fmt_double(c.s_vn) << ',' << fmt_double(c.s_vn_complement) << ','
                << fmt_double(c.mi) << ',' << fmt_double(c.half_mi) << ',' << fmt_optional(c.mi_noisy) << ','
                << fmt_optional(c.half_mi_noisy) << ',' << fmt_double(c.energy) << ',' << fmt_optional(c.gap) << ','
                << (c.degenerate ? 1 : 0);
        } else {
            out << ",,,,,,,,,,";
        }
        out << '\n';
    }
}

std::vector<GridCell> read_grid_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kGridHeader) throw ParseError("unexpected grid header", 1);
    std::vector<GridCell> cells;
    std::size_t number = 1;
    const auto opt = [](const std::string &s) -> std::optional<double> {
        if (s.empty()) return std::nullopt;
        return std::stod(s);
    };
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 16) throw ParseError("expected 16 columns, got " + std::to_string(f.size()), number);
        try {
            GridCell c;
            c.row = std::stoul(f[0]);
            c.col = std::stoul(f[1]);
            c.delta_over_omega = std::stod(f[2]);
            c.rb_over_a = std::stod(f[3]);
            c.ok = f[4] == "ok";
            if (c.ok) {
                c.n_a = std::stoul(f[5]);
                c.n_b = std::stoul(f[6]);
                c.s_vn = std::stod(f[7]);
                c.s_vn_complement = std::stod(f[8]);
                c.mi = std::stod(f[9]);
                c.half_mi = std::stod(f[10]);
                c.mi_noisy = opt(f[11]);
                c.half_mi_noisy = opt(f[12]);
                c.energy = std::stod(f[13]);
                c.gap = opt(f[14]);
                c.degenerate = f[15] == "1";
            }
            cells.push_back(std::move(c));
        } catch (const std::logic_error &e) {
            throw ParseError(std::string("bad number: ") + e.what(), number);
        }
    }
    return cells;
}

LowerBoundReport lower_bound_report(const std::vector<GridCell> &cells, MiComparator comparator, double tol, bool noisy) {
    LowerBoundReport r;
    r.comparator = comparator;
    r.max_violation = -std::numeric_limits<double>::infinity();
    for (const auto &c : cells) {
        if (!c.ok) continue;
        std::optional<double> value;
        if (noisy) value = comparator == MiComparator::mi ? c.mi_noisy : c.half_mi_noisy;
        else value = comparator == MiComparator::mi ? c.mi : c.half_mi;
        if (!value) continue;
        ++r.cells;
        if (*value <= c.s_vn + tol) ++r.satisfied;
        r.max_violation = std::max(r.max_violation, *value - c.s_vn);
    }
    r.fraction = r.cells == 0 ? 0.0 : static_cast<double>(r.satisfied) / static_cast<double>(r.cells);
    if (r.cells == 0) r.max_violation = 0.0;
    return r;
}

CaseResult simulate_case(const CaseConfig &config) {
    config.noise.validate();
    if (config.noise.shots == 0) throw InvalidArgument("shot simulation needs at least one shot");
    const Lattice lattice(config.params.n_rungs);
    GroundState state = ground_state(config.params, lattice, seeded_solver(config.solver, config.seed));

    const Bipartition target = config.subsystem ? Bipartition::from_sites(lattice.n_sites(), *config.subsystem)
                               : config.partition == PartitionMode::symmetric
                                   ? symmetric_bipartition(lattice)
                                   : random_bipartition(lattice, derive_seed(derive_seed(config.seed, Stream::bipartition), 0));
    const BasisDistribution exact = basis_probabilities(state);
    ShotSet shots = sample_bitstrings(exact, config.noise.shots, derive_seed(derive_seed(config.seed, Stream::shots), 0));
    if (config.noise.bitflip_p > 0.0)
        shots = apply_bitflip_noise(shots, config.noise.bitflip_p, derive_seed(derive_seed(config.seed, Stream::bitflip), 0));
    auto perturbed = perturb_bipartition_boundary(target, lattice, config.noise.boundary_flip_p,
                                                  derive_seed(derive_seed(config.seed, Stream::boundary), 0));
    shots.provenance.boundary_flip_p = config.noise.boundary_flip_p;
    shots.provenance.boundary_fallback = perturbed.fallback;

    const BasisDistribution measured = empirical_distribution(shots);
    CaseResult r{std::move(state), target, perturbed.bipartition, std::move(shots), {}, {}, {}, {}, perturbed.fallback};
    r.exact = classical_mutual_information(exact, target);
    r.exact.s_vn = von_neumann_entropy(r.state, target);
    r.measured = classical_mutual_information(measured, r.observed);
    r.measured.s_vn = r.exact.s_vn;
    r.p_exact = rydberg_probabilities(exact);
    r.p_measured = rydberg_probabilities(measured);
    return r;
}

} // namespace rydberg
