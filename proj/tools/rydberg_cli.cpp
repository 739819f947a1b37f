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

// Command-line front end: dataset generation, sweeps, re-featurization, shot
// simulation, and prediction analysis.

#include "rydberg/errors.hpp"
#include "rydberg/features.hpp"
#include "rydberg/metrics.hpp"
#include "rydberg/pipeline.hpp"
#include "rydberg/sampler.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace {

using json = nlohmann::json;
using namespace rydberg;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitFailures = 3;

std::atomic<bool> g_cancel{false};

extern "C" void on_interrupt(int) { g_cancel.store(true); }

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonFlags {
    std::uint64_t seed = 0;
    std::string out;
    std::size_t workers = 1;
    std::size_t shots = 0;
    double bitflip_p = 0.0;
    double boundary_flip_p = 0.0;
    std::string partition;
    std::string cutoff = "inf";
    bool fourth_moment = false;
    std::string solver = "auto";
    double solver_tol = 1e-10;
    std::size_t solver_max_iter = 5000;
};

void add_noise_flags(CLI::App *cmd, CommonFlags &f) {
    cmd->add_option("--shots", f.shots, "Measurement shots per sample (0 = exact probabilities)");
    cmd->add_option("--bitflip-p", f.bitflip_p, "Independent per-site readout flip probability")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--boundary-flip-p", f.boundary_flip_p, "Per-site flip probability of boundary partition labels")
        ->check(CLI::Range(0.0, 1.0));
}

void add_feature_flags(CLI::App *cmd, CommonFlags &f) {
    cmd->add_option("--cutoff", f.cutoff, "Edge cutoff in grid units, or 'inf' for a fully connected graph");
    cmd->add_flag("--fourth-moment", f.fourth_moment, "Append the fourth-order cross moment to edge features");
}

void add_solver_flags(CLI::App *cmd, CommonFlags &f) {
    cmd->add_option("--solver", f.solver, "Ground-state solver")
        ->check(CLI::IsMember({"auto", "dense", "lanczos", "davidson"}));
    cmd->add_option("--solver-tol", f.solver_tol, "Iterative solver residual tolerance");
    cmd->add_option("--solver-max-iter", f.solver_max_iter, "Iterative solver matvec budget");
}

FeatureOptions feature_options(const CommonFlags &f) {
    FeatureOptions o;
    o.fourth_moment = f.fourth_moment;
    if (f.cutoff != "inf") {
        try {
            std::size_t used = 0;
            const double c = std::stod(f.cutoff, &used);
            if (used != f.cutoff.size()) throw std::invalid_argument(f.cutoff);
            o.cutoff = c;
        } catch (const std::logic_error &) {
            throw UsageError("--cutoff expects a number or 'inf', got '" + f.cutoff + "'");
        }
    }
    return o;
}

SolverConfig solver_config(const CommonFlags &f, std::uint64_t seed) {
    SolverConfig s;
    s.choice = parse_solver_choice(f.solver);
    s.set_iterative(f.solver_tol, f.solver_max_iter, seed);
    return s;
}

NoiseOptions noise_options(const CommonFlags &f) { return {f.shots, f.bitflip_p, f.boundary_flip_p}; }

// {"1:100", "2:100"} -> {1: 100, 2: 100}
std::map<std::size_t, std::size_t> parse_rung_counts(const std::vector<std::string> &items) {
    std::map<std::size_t, std::size_t> out;
    for (const auto &item : items) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw UsageError("--per-rung entries look like RUNGS:COUNT, got '" + item + "'");
        try {
            out[std::stoul(item.substr(0, colon))] = std::stoul(item.substr(colon + 1));
        } catch (const std::logic_error &) {
            throw UsageError("--per-rung entries look like RUNGS:COUNT, got '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("--per-rung is empty");
    return out;
}

std::vector<std::size_t> parse_sites(const std::string &text) {
    std::vector<std::size_t> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stoul(item));
        } catch (const std::logic_error &) {
            throw UsageError("--subsystem expects comma-separated site indices, got '" + item + "'");
        }
    }
    return out;
}

void emit(const json &j, const std::string &path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

json optional_json(const std::optional<double> &x) { return x ? json(*x) : json(nullptr); }

json entropy_json(const EntropyRecord &r) {
    return {{"s_vn", optional_json(r.s_vn)}, {"s_x_a", r.s_x_a}, {"s_x_b", r.s_x_b},
            {"s_x_ab", r.s_x_ab}, {"mi", r.mi}, {"half_mi", r.half_mi}};
}

json point_metrics(std::span<const double> preds, std::span<const double> truth) {
    return {{"log_cosh", metrics::log_cosh_loss(preds, truth)},
            {"mae", metrics::mae(preds, truth)},
            {"rmse", metrics::rmse(preds, truth)},
            {"mape", optional_json(metrics::mape_thresholded(preds, truth))}};
}

json bias_json(std::span<const double> preds, std::span<const double> truth) {
    try {
        const auto b = metrics::bias_test(metrics::signed_errors(preds, truth));
        return {{"n", b.n}, {"mean_bias", b.mean_bias}, {"t", b.t}, {"p_two_sided", b.p_two_sided}};
    } catch (const std::exception &e) {
        return {{"error", e.what()}};
    }
}

json analyze_predictions(const metrics::PredictionSet &ps, metrics::ErrorKind kind) {
    json j;
    j["n"] = ps.size();
    j["model"] = point_metrics(ps.prediction, ps.truth);
    j["model"]["bias"] = bias_json(ps.prediction, ps.truth);
    if (ps.baseline) {
        j["baseline"] = point_metrics(*ps.baseline, ps.truth);
        j["baseline"]["bias"] = bias_json(*ps.baseline, ps.truth);
        try {
            const auto err_a = metrics::errors(ps.prediction, ps.truth, kind);
            const auto err_b = metrics::errors(*ps.baseline, ps.truth, kind);
            const auto c = metrics::paired_comparison(err_a, err_b);
            j["paired"] = {{"error_kind", kind == metrics::ErrorKind::absolute ? "absolute" : "squared"},
                           {"n", c.n},
                           {"mean_diff", c.mean_diff},
                           {"sd_diff", c.sd_diff},
                           {"t", c.t},
                           {"p_two_sided", c.p_two_sided},
                           {"cohens_d", c.cohens_d}};
        } catch (const std::exception &e) {
            j["paired"] = {{"error", e.what()}};
        }
    }
    if (ps.has_samples()) {
        const auto intervals = metrics::apply_temperature(ps.dropout_samples, 1.0);
        j["interval"] = {{"coverage", metrics::coverage(intervals, ps.truth)},
                         {"mean_width", metrics::mean_width(intervals)}};
    }
    return j;
}

int run_analyze(const std::string &input, const std::string &grid, const std::string &baseline_field,
                const std::string &error_kind, const std::string &out, double tol) {
    json report;
    if (!grid.empty()) {
        std::ifstream in(grid);
        if (!in) throw std::runtime_error("cannot open " + grid);
        const auto cells = read_grid_csv(in);
        auto add = [&](const char *name, MiComparator cmp, bool noisy) {
            const auto r = lower_bound_report(cells, cmp, tol, noisy);
            if (r.cells == 0) return;
            report["lower_bound"][name] = {{"cells", r.cells},
                                           {"satisfied", r.satisfied},
                                           {"fraction", r.fraction},
                                           {"max_violation", r.max_violation},
                                           {"tolerance", tol}};
        };
        add("half_mi", MiComparator::half_mi, false);
        add("mi", MiComparator::mi, false);
        add("half_mi_noisy", MiComparator::half_mi, true);
        add("mi_noisy", MiComparator::mi, true);
        std::size_t failed = 0;
        for (const auto &c : cells) failed += c.ok ? 0 : 1;
        report["grid_cells"] = cells.size();
        report["failed_cells"] = failed;
    }
    if (!input.empty()) {
        const auto kind = metrics::parse_error_kind(error_kind);
        const auto ps = metrics::read_predictions(std::filesystem::path(input), baseline_field);
        report["overall"] = analyze_predictions(ps, kind);
        if (!ps.n_rungs.empty()) {
            std::map<std::size_t, metrics::PredictionSet> by_rung;
            for (std::size_t i = 0; i < ps.size(); ++i) {
                auto &sub = by_rung[ps.n_rungs[i]];
                sub.truth.push_back(ps.truth[i]);
                sub.prediction.push_back(ps.prediction[i]);
                if (ps.has_samples()) sub.dropout_samples.push_back(ps.dropout_samples[i]);
                if (ps.baseline) {
                    if (!sub.baseline) sub.baseline.emplace();
                    sub.baseline->push_back((*ps.baseline)[i]);
                }
            }
            for (const auto &[rungs, sub] : by_rung) report["per_rung"][std::to_string(rungs)] = analyze_predictions(sub, kind);
        }
    }
    if (report.is_null()) throw UsageError("analyze needs a prediction file and/or --grid");
    emit(report, out);
    return 0;
}

int run_calibrate(const std::string &input, const metrics::CalibrationOptions &options, const std::string &out,
                  const std::string &curve_out, std::size_t curve_steps) {
    const auto ps = metrics::read_predictions(std::filesystem::path(input), "");
    if (!ps.has_samples()) throw DegenerateInputError("calibration needs dropout_samples on every record");
    const auto r = metrics::calibrate_temperature(ps, options);
    emit({{"temperature", r.temperature},
          {"coverage", r.coverage},
          {"mean_width", r.mean_width},
          {"coverage_at_unit", r.coverage_at_unit},
          {"target", r.target},
          {"converged", r.converged},
          {"n", ps.size()},
          {"samples_per_record", ps.dropout_samples.front().size()}},
         out);
    if (!curve_out.empty()) {
        if (curve_steps < 2) throw UsageError("--curve-steps must be >= 2");
        const auto ts = axis_values({options.t_min, options.t_max}, curve_steps);
        const auto cov = metrics::coverage_curve(ps, ts);
        std::ofstream csv(curve_out, std::ios::trunc);
        if (!csv) throw std::runtime_error("cannot open " + curve_out + " for writing");
        csv << "temperature,coverage,mean_width\n" << std::setprecision(17);
        for (std::size_t k = 0; k < ts.size(); ++k)
            csv << ts[k] << ',' << cov[k] << ',' << metrics::mean_width(metrics::apply_temperature(ps.dropout_samples, ts[k]))
                << '\n';
    }
    return 0;
}

int run_featurize(const std::string &input, const CommonFlags &f) {
    if (f.out.empty()) throw UsageError("featurize needs --out");
    const auto options = feature_options(f);
    const auto raws = read_raw_samples(input);
    std::vector<GraphSample> graphs;
    graphs.reserve(raws.size());
    for (const auto &r : raws) graphs.push_back(featurize(r, options));
    write_samples(f.out, graphs);
    spdlog::info("featurized {} records into {}", graphs.size(), f.out);
    return 0;
}

struct CaseSource {
    std::string record;
    std::size_t index = 0;
    std::size_t n_rungs = 0;
    double delta = 0.0;
    double rb = 0.0;
    std::string subsystem;
};

int run_sample(const CaseSource &src, const CommonFlags &f, const std::string &summary_out) {
    CaseConfig c;
    c.seed = f.seed;
    c.noise = noise_options(f);
    if (c.noise.shots == 0) c.noise.shots = kDefaultShots;
    c.solver = solver_config(f, 0);
    if (!src.record.empty()) {
        std::ifstream in(src.record, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + src.record);
        std::string line;
        std::size_t k = 0;
        std::size_t seen = 0;
        bool found = false;
        while (std::getline(in, line)) {
            ++k;
            if (line.empty()) continue;
            if (seen++ == src.index) {
                found = true;
                break;
            }
        }
        if (!found) throw ParseError("record index " + std::to_string(src.index) + " not found", k);
        const SampleMetadata meta = [&] {
            const auto probe = json::parse(line, nullptr, false);
            if (probe.is_object() && probe.value("kind", "") == "raw") return raw_from_line(line, k).metadata;
            return graph_from_line(line, k).metadata;
        }();
        c.params = meta.params;
        std::vector<std::size_t> sites;
        for (std::size_t i = 0; i < meta.target_mask.size(); ++i)
            if (meta.target_mask[i]) sites.push_back(i);
        c.subsystem = sites;
    } else {
        if (src.n_rungs == 0) throw UsageError("sample needs --record or --rungs/--delta/--rb");
        c.params = SystemParams{src.delta, src.rb, 0.0, src.n_rungs};
        c.partition = f.partition.empty() ? PartitionMode::random : parse_partition_mode(f.partition);
    }
    if (!src.subsystem.empty()) c.subsystem = parse_sites(src.subsystem);

    const CaseResult r = simulate_case(c);
    if (!f.out.empty()) {
        std::ofstream out(f.out, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + f.out + " for writing");
        write_shots(out, r.shots);
    }
    json mask_a = json::array();
    for (auto s : r.target.a_sites()) mask_a.push_back(s);
    json observed_a = json::array();
    for (auto s : r.observed.a_sites()) observed_a.push_back(s);
    emit({{"n_rungs", c.params.n_rungs},
          {"delta_over_omega", c.params.delta_over_omega},
          {"rb_over_a", c.params.rb_over_a},
          {"energy", r.state.energy},
          {"gap", optional_json(r.state.gap)},
          {"degenerate", r.state.degenerate},
          {"subsystem", mask_a},
          {"observed_subsystem", observed_a},
          {"boundary_fallback", r.boundary_fallback},
          {"shots", r.shots.n_shots()},
          {"bitflip_p", c.noise.bitflip_p},
          {"boundary_flip_p", c.noise.boundary_flip_p},
          {"exact", entropy_json(r.exact)},
          {"measured", entropy_json(r.measured)},
          {"p_exact", r.p_exact},
          {"p_measured", r.p_measured}},
         summary_out);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("rydberg"));

    CLI::App app{"Rydberg ladder entanglement dataset tools"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key-value config file; command-line flags override it");
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error")
        ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

    CommonFlags f;

    // generate
    auto *gen = app.add_subcommand("generate", "Generate a graph dataset");
    std::vector<std::string> per_rung{"1:100", "2:100", "3:100"};
    bool full_scale = false;
    Range delta = kDefaultDeltaRange;
    Range rb = kDefaultRbRange;
    std::string raw_out;
    std::size_t partitions_per_draw = 1;
    double max_failure_fraction = 0.01;
    gen->add_option("--seed", f.seed, "Master seed");
    gen->add_option("--out", f.out, "Graph record output (JSON lines)")->required();
    gen->add_option("--raw-out", raw_out, "Also write raw records for later re-featurization");
    gen->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
    gen->add_option("--per-rung", per_rung, "Draw counts as RUNGS:COUNT,...")->delimiter(',');
    gen->add_flag("--full-scale", full_scale, "Use the full-size per-rung counts");
    gen->add_option("--delta-min", delta.lo, "Lower bound of delta/omega");
    gen->add_option("--delta-max", delta.hi, "Upper bound of delta/omega");
    gen->add_option("--rb-min", rb.lo, "Lower bound of rb/a");
    gen->add_option("--rb-max", rb.hi, "Upper bound of rb/a");
    gen->add_option("--partitions-per-draw", partitions_per_draw, "Records per parameter draw (random partitions)");
    gen->add_option("--max-failure-fraction", max_failure_fraction, "Exit with code 3 above this failed-draw fraction");
    f.partition = "random";
    gen->add_option("--partition", f.partition, "Bipartition choice")->check(CLI::IsMember({"random", "symmetric"}));
    add_noise_flags(gen, f);
    add_feature_flags(gen, f);
    add_solver_flags(gen, f);

    // sweep
    auto *sweep = app.add_subcommand("sweep", "Phase-diagram sweep over (delta/omega, rb/a)");
    SweepConfig sc;
    std::string graphs_out;
    std::string sweep_partition = "symmetric";
    sweep->add_option("--seed", f.seed, "Master seed");
    sweep->add_option("--out", f.out, "Grid CSV output")->required();
    sweep->add_option("--graphs-out", graphs_out, "Also write one graph record per cell");
    sweep->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--rungs", sc.n_rungs, "Ladder rungs");
    sweep->add_option("--delta-min", sc.delta.lo, "Lower bound of delta/omega");
    sweep->add_option("--delta-max", sc.delta.hi, "Upper bound of delta/omega");
    sweep->add_option("--delta-steps", sc.delta_steps, "Grid points along delta/omega");
    sweep->add_option("--rb-min", sc.rb.lo, "Lower bound of rb/a");
    sweep->add_option("--rb-max", sc.rb.hi, "Upper bound of rb/a");
    sweep->add_option("--rb-steps", sc.rb_steps, "Grid points along rb/a");
    sweep->add_option("--partition", sweep_partition, "Bipartition choice")->check(CLI::IsMember({"random", "symmetric"}));
    add_noise_flags(sweep, f);
    add_feature_flags(sweep, f);
    add_solver_flags(sweep, f);

    // featurize
    auto *feat = app.add_subcommand("featurize", "Re-featurize raw records with new feature options");
    std::string raw_in;
    feat->add_option("input", raw_in, "Raw record file")->required()->check(CLI::ExistingFile);
    feat->add_option("--out", f.out, "Graph record output")->required();
    add_feature_flags(feat, f);

    // sample
    auto *samp = app.add_subcommand("sample", "Shot and noise simulation of one case");
    CaseSource src;
    std::string summary_out;
    samp->add_option("--record", src.record, "Take the case from a graph or raw record file")->check(CLI::ExistingFile);
    samp->add_option("--index", src.index, "Record index within --record");
    samp->add_option("--rungs", src.n_rungs, "Ladder rungs");
    samp->add_option("--delta", src.delta, "delta/omega");
    samp->add_option("--rb", src.rb, "rb/a");
    samp->add_option("--subsystem", src.subsystem, "Comma-separated sites of subsystem A");
    samp->add_option("--seed", f.seed, "Master seed");
    samp->add_option("--out", f.out, "Shot file output");
    samp->add_option("--summary", summary_out, "JSON summary output (default stdout)");
    samp->add_option("--partition", f.partition, "Bipartition choice")->check(CLI::IsMember({"random", "symmetric"}));
    add_noise_flags(samp, f);
    add_solver_flags(samp, f);

    // analyze
    auto *ana = app.add_subcommand("analyze", "Score a prediction file and/or report the MI lower bound on a grid");
    std::string pred_in, grid_in, baseline_field = "half_mi", error_kind = "absolute", ana_out;
    double lb_tol = 1e-9;
    ana->add_option("input", pred_in, "Prediction file")->check(CLI::ExistingFile);
    ana->add_option("--grid", grid_in, "Grid CSV from `sweep`")->check(CLI::ExistingFile);
    ana->add_option("--baseline-field", baseline_field, "Baseline column ('' for none)");
    ana->add_option("--error-kind", error_kind, "Paired-test errors")->check(CLI::IsMember({"absolute", "squared"}));
    ana->add_option("--tolerance", lb_tol, "Lower-bound comparison tolerance");
    ana->add_option("--out", ana_out, "Summary output (default stdout)");

    // calibrate
    auto *cal = app.add_subcommand("calibrate", "Temperature-calibrate dropout prediction intervals");
    std::string cal_in, cal_out, curve_out;
    std::size_t curve_steps = 76;
    metrics::CalibrationOptions cal_opts;
    cal->add_option("input", cal_in, "Prediction file with dropout_samples")->required()->check(CLI::ExistingFile);
    cal->add_option("--target", cal_opts.target_coverage, "Target coverage")->check(CLI::Range(0.0, 1.0));
    cal->add_option("--t-min", cal_opts.t_min, "Smallest temperature searched");
    cal->add_option("--t-max", cal_opts.t_max, "Largest temperature searched");
    cal->add_option("--resolution", cal_opts.resolution, "Temperature resolution");
    cal->add_option("--out", cal_out, "CalibrationResult output (default stdout)");
    cal->add_option("--curve", curve_out, "Coverage-vs-temperature CSV");
    cal->add_option("--curve-steps", curve_steps, "Temperatures on the coverage curve");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }
    spdlog::set_level(spdlog::level::from_str(log_level));
    std::signal(SIGINT, on_interrupt);
    std::signal(SIGTERM, on_interrupt);

    try {
        if (gen->parsed()) {
            GenerationConfig g;
            g.delta = delta;
            g.rb = rb;
            g.per_rung = full_scale ? full_scale_counts() : parse_rung_counts(per_rung);
            g.master_seed = f.seed;
            g.noise = noise_options(f);
            g.partition = parse_partition_mode(f.partition);
            g.partitions_per_draw = partitions_per_draw;
            g.features = feature_options(f);
            g.solver = solver_config(f, 0);
            g.workers = f.workers;
            g.out = f.out;
            if (!raw_out.empty()) g.raw_out = raw_out;
            g.max_failure_fraction = max_failure_fraction;
            g.cancel = &g_cancel;
            const auto s = generate_dataset(g);
            spdlog::info("wrote {} records ({} failed draws) in {:.1f} s", s.written, s.failed, s.wall_seconds);
            if (s.failure_fraction() > g.max_failure_fraction) {
                spdlog::error("failure fraction {:.4f} exceeds {:.4f}", s.failure_fraction(), g.max_failure_fraction);
                return kExitFailures;
            }
            return 0;
        }
        if (sweep->parsed()) {
            sc.master_seed = f.seed;
            sc.partition = parse_partition_mode(sweep_partition);
            sc.noise = noise_options(f);
            sc.features = feature_options(f);
            sc.solver = solver_config(f, 0);
            sc.workers = f.workers;
            sc.cancel = &g_cancel;
            const auto cells = sweep_grid(sc);
            std::ofstream out(f.out, std::ios::trunc);
            if (!out) throw std::runtime_error("cannot open " + f.out + " for writing");
            write_grid_csv(out, cells);
            if (!graphs_out.empty()) {
                std::vector<GraphSample> graphs;
                for (const auto &c : cells)
                    if (c.graph) graphs.push_back(*c.graph);
                write_samples(graphs_out, graphs);
            }
            std::size_t failed = 0;
            for (const auto &c : cells) failed += c.ok ? 0 : 1;
            spdlog::info("sweep finished: {} cells, {} failed", cells.size(), failed);
            return failed > 0 ? kExitFailures : 0;
        }
        if (feat->parsed()) return run_featurize(raw_in, f);
        if (samp->parsed()) return run_sample(src, f, summary_out);
        if (ana->parsed()) return run_analyze(pred_in, grid_in, baseline_field, error_kind, ana_out, lb_tol);
        if (cal->parsed()) return run_calibrate(cal_in, cal_opts, cal_out, curve_out, curve_steps);
    } catch (const UsageError &e) {
        spdlog::error("{}", e.what());
        return kExitUsage;
    } catch (const InvalidArgument &e) {
        spdlog::error("{}", e.what());
        return kExitUsage;
    } catch (const std::exception &e) {
        spdlog::error("{}", e.what());
        return kExitData;
    }
    return kExitUsage;
}
