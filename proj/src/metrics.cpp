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

#include "rydberg/metrics.hpp"

#include "rydberg/errors.hpp"
#include "rydberg/features.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

namespace rydberg::metrics {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
    if (a.empty()) throw InvalidArgument("metric of an empty column");
    if (a.size() != b.size()) throw InvalidArgument("prediction and truth columns differ in length");
}

double mean_of(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size()); }

// Anchored at the first sample so that constant inputs give their value back
// exactly.
double anchored_mean(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v - x.front();
    return x.front() + acc / static_cast<double>(x.size());
}

double sample_var(std::span<const double> x, double mean) {
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(x.size() - 1);
}

// mean / sqrt(var) under a single rounding of the square root.
double standardized(double mean, double var) {
    const double ratio = mean * mean / var;
    if (std::isnormal(ratio) || mean == 0.0) return std::copysign(std::sqrt(ratio), mean);
    return mean / std::sqrt(var);
}

} // namespace

double log_cosh(double d) {
    const double a = std::abs(d);
    if (a > 20.0) return a - std::numbers::ln2 + std::log1p(std::exp(-2.0 * a));
    return std::log(std::cosh(d));
}

double log_cosh_loss(std::span<const double> preds, std::span<const double> truths) {
    check_pair(preds, truths);
    double s = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) s += log_cosh(preds[i] - truths[i]);
    return s / static_cast<double>(preds.size());
}

double mae(std::span<const double> preds, std::span<const double> truths) {
    check_pair(preds, truths);
    double s = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) s += std::abs(preds[i] - truths[i]);
    return s / static_cast<double>(preds.size());
}

double rmse(std::span<const double> preds, std::span<const double> truths) {
    check_pair(preds, truths);
    double s = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) s += (preds[i] - truths[i]) * (preds[i] - truths[i]);
    return std::sqrt(s / static_cast<double>(preds.size()));
}

std::optional<double> mape_thresholded(std::span<const double> preds, std::span<const double> truths) {
    check_pair(preds, truths);
    const double threshold = kMapeRelativeThreshold * *std::max_element(truths.begin(), truths.end());
    double s = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (!(truths[i] > threshold) || truths[i] <= 0.0) continue;
        s += 100.0 * std::abs(preds[i] - truths[i]) / truths[i];
        ++used;
    }
    if (used == 0) return std::nullopt;
    return s / static_cast<double>(used);
}

ErrorKind parse_error_kind(const std::string &text) {
    if (text == "abs" || text == "absolute") return ErrorKind::absolute;
    if (text == "squared") return ErrorKind::squared;
    throw InvalidArgument("unknown error kind '" + text + "' (expected abs or squared)");
}

std::vector<double> errors(std::span<const double> preds, std::span<const double> truths, ErrorKind kind) {
    check_pair(preds, truths);
    std::vector<double> out(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double d = preds[i] - truths[i];
        out[i] = kind == ErrorKind::absolute ? std::abs(d) : d * d;
    }
    return out;
}

std::vector<double> signed_errors(std::span<const double> preds, std::span<const double> truths) {
    check_pair(preds, truths);
    std::vector<double> out(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) out[i] = preds[i] - truths[i];
    return out;
}

double student_t_two_sided(double t, double dof) {
    if (!std::isfinite(t)) return 0.0;
    const boost::math::students_t_distribution<double> dist(dof);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

PairedComparison paired_comparison(std::span<const double> err_a, std::span<const double> err_b) {
    if (err_a.size() != err_b.size()) throw InvalidArgument("paired columns differ in length");
    if (err_a.size() < 2) throw InvalidArgument("paired comparison needs at least two records");
    std::vector<double> d(err_a.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = err_b[i] - err_a[i];

    PairedComparison out;
    out.n = d.size();
    out.mean_diff = mean_of(d);
    const double var = sample_var(d, out.mean_diff);
    out.sd_diff = std::sqrt(var);
    if (!(out.sd_diff > 0.0)) throw DegenerateInputError("paired differences have zero spread");
    const double n = static_cast<double>(out.n);
    out.t = standardized(out.mean_diff, var / n);
    out.cohens_d = standardized(out.mean_diff, var);
    out.p_two_sided = student_t_two_sided(out.t, n - 1.0);
    return out;
}

BiasTest bias_test(std::span<const double> errs) {
    if (errs.size() < 2) throw InvalidArgument("bias test needs at least two records");
    BiasTest out;
    out.n = errs.size();
    out.mean_bias = mean_of(errs);
    const double var = sample_var(errs, out.mean_bias);
    if (!(var > 0.0)) throw DegenerateInputError("signed errors have zero spread");
    const double n = static_cast<double>(out.n);
    out.t = standardized(out.mean_bias, var / n);
    out.p_two_sided = student_t_two_sided(out.t, n - 1.0);
    return out;
}

double percentile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw InvalidArgument("percentile of an empty sample");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<Interval> apply_temperature(const std::vector<std::vector<double>> &samples_per_record, double temperature) {
    if (!(temperature > 0.0)) throw InvalidArgument("temperature must be positive");
    std::vector<Interval> out;
    out.reserve(samples_per_record.size());
    std::vector<double> scaled;
    for (const auto &samples : samples_per_record) {
        if (samples.size() < 2) throw InvalidArgument("need at least two dropout samples per record");
        const double m = anchored_mean(samples);
        scaled.resize(samples.size());
        std::transform(samples.begin(), samples.end(), scaled.begin(), [&](double s) { return m + temperature * (s - m); });
        std::sort(scaled.begin(), scaled.end());
        out.push_back({percentile(scaled, kLowerQuantile), percentile(scaled, kUpperQuantile)});
    }
    return out;
}

double coverage(std::span<const Interval> intervals, std::span<const double> truths) {
    if (intervals.size() != truths.size()) throw InvalidArgument("interval and truth columns differ in length");
    if (intervals.empty()) return 0.0;
    std::size_t inside = 0;
    for (std::size_t i = 0; i < truths.size(); ++i)
        if (intervals[i].contains(truths[i])) ++inside;
    return static_cast<double>(inside) / static_cast<double>(truths.size());
}

double mean_width(std::span<const Interval> intervals) {
    if (intervals.empty()) return 0.0;
    double s = 0.0;
    for (const auto &iv : intervals) s += iv.width();
    return s / static_cast<double>(intervals.size());
}

void PredictionSet::validate() const {
    const std::size_t n = truth.size();
    if (prediction.size() != n) throw InvalidArgument("prediction column length differs from truth");
    if (baseline && baseline->size() != n) throw InvalidArgument("baseline column length differs from truth");
    if (!n_rungs.empty() && n_rungs.size() != n) throw InvalidArgument("n_rungs column length differs from truth");
    if (!dropout_samples.empty()) {
        if (dropout_samples.size() != n) throw InvalidArgument("dropout sample rows differ from truth");
        const std::size_t k = dropout_samples.front().size();
        if (k < 2) throw InvalidArgument("need at least two dropout samples per record");
        for (const auto &row : dropout_samples)
            if (row.size() != k) throw InvalidArgument("dropout sample count varies within the file");
    }
}

namespace {

// Raw percentiles and mean per record; the T-scaled interval is
// mean + T * (raw - mean) because the percentile commutes with the affine map.
struct RawIntervals {
    std::vector<double> mean, lo, hi;

    explicit RawIntervals(const PredictionSet &ps) {
        const auto unit = apply_temperature(ps.dropout_samples, 1.0);
        for (std::size_t i = 0; i < unit.size(); ++i) {
            mean.push_back(anchored_mean(ps.dropout_samples[i]));
            lo.push_back(unit[i].lo);
            hi.push_back(unit[i].hi);
        }
    }

    [[nodiscard]] std::vector<Interval> at(double t) const {
        std::vector<Interval> out(mean.size());
        for (std::size_t i = 0; i < mean.size(); ++i)
            out[i] = {mean[i] + t * (lo[i] - mean[i]), mean[i] + t * (hi[i] - mean[i])};
        return out;
    }
};

} // namespace

CalibrationResult calibrate_temperature(const PredictionSet &predictions, const CalibrationOptions &options) {
    predictions.validate();
    if (!predictions.has_samples()) throw InvalidArgument("calibration needs dropout samples");
    if (!(options.t_min > 0.0) || !(options.t_max > options.t_min) || !(options.resolution > 0.0))
        throw InvalidArgument("invalid temperature search range");

    const RawIntervals raw(predictions);
    const auto cov = [&](double t) { return coverage(raw.at(t), predictions.truth); };

    CalibrationResult result;
    result.target = options.target_coverage;
    result.coverage_at_unit = cov(1.0);

    double lo = options.t_min;
    double hi = options.t_max;
    const double cov_lo = cov(lo);
    const double cov_hi = cov(hi);
    double chosen = 0.0;
    if (cov_hi < options.target_coverage) {
        chosen = hi;
    } else if (cov_lo >= options.target_coverage) {
        chosen = lo;
        result.converged = cov_lo == options.target_coverage;
    } else {
        while (hi - lo > options.resolution) {
            const double mid = 0.5 * (lo + hi);
            if (cov(mid) >= options.target_coverage) hi = mid;
            else lo = mid;
        }
        const double miss_lo = std::abs(cov(lo) - options.target_coverage);
        const double miss_hi = std::abs(cov(hi) - options.target_coverage);
        chosen = miss_lo < miss_hi ? lo : hi;
        result.converged = true;
    }
    const auto intervals = raw.at(chosen);
    result.temperature = chosen;
    result.coverage = coverage(intervals, predictions.truth);
    result.mean_width = mean_width(intervals);
    return result;
}

std::vector<double> coverage_curve(const PredictionSet &predictions, std::span<const double> temperatures) {
    predictions.validate();
    if (!predictions.has_samples()) throw InvalidArgument("coverage curve needs dropout samples");
    const RawIntervals raw(predictions);
    std::vector<double> out;
    for (double t : temperatures) {
        if (!(t > 0.0)) throw InvalidArgument("temperature must be positive");
        out.push_back(coverage(raw.at(t), predictions.truth));
    }
    return out;
}

PredictionSet read_predictions(std::istream &in, const std::string &baseline_field) {
    using nlohmann::json;
    PredictionSet ps;
    std::vector<double> baseline;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error &e) {
            throw ParseError(std::string("malformed record: ") + e.what(), number);
        }
        if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion)
            throw SchemaVersionError(j.at("schema_version").get<int>(), kSchemaVersion, number);
        try {
            ps.truth.push_back(j.at("s_vn").get<double>());
            std::vector<double> samples;
            if (j.contains("dropout_samples") && !j.at("dropout_samples").is_null())
                samples = j.at("dropout_samples").get<std::vector<double>>();
            if (j.contains("s_pred") && !j.at("s_pred").is_null()) ps.prediction.push_back(j.at("s_pred").get<double>());
            else if (!samples.empty()) ps.prediction.push_back(mean_of(samples));
            else throw ParseError("record has neither s_pred nor dropout_samples", number);
            if (!samples.empty()) ps.dropout_samples.push_back(std::move(samples));
            else if (!ps.dropout_samples.empty()) throw ParseError("dropout_samples missing on some records", number);
            if (!baseline_field.empty()) {
                if (!j.contains(baseline_field) || j.at(baseline_field).is_null())
                    throw ParseError("record has no baseline field '" + baseline_field + "'", number);
                baseline.push_back(j.at(baseline_field).get<double>());
            }
            if (j.contains("n_rungs")) ps.n_rungs.push_back(j.at("n_rungs").get<std::size_t>());
        } catch (const json::exception &e) {
            throw ParseError(std::string("bad field: ") + e.what(), number);
        }
        if (!ps.dropout_samples.empty() && ps.dropout_samples.size() != ps.truth.size())
            throw ParseError("dropout_samples missing on some records", number);
    }
    if (!baseline_field.empty()) ps.baseline = std::move(baseline);
    if (ps.n_rungs.size() != ps.truth.size()) ps.n_rungs.clear();
    try {
        ps.validate();
    } catch (const InvalidArgument &e) {
        throw ParseError(e.what(), number);
    }
    return ps;
}

PredictionSet read_predictions(const std::filesystem::path &path, const std::string &baseline_field) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_predictions(in, baseline_field);
}

void write_predictions(std::ostream &out, const PredictionSet &ps, const std::string &baseline_field) {
    using nlohmann::json;
    ps.validate();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["s_vn"] = ps.truth[i];
        j["s_pred"] = ps.prediction[i];
        if (ps.has_samples()) j["dropout_samples"] = ps.dropout_samples[i];
        if (ps.baseline && !baseline_field.empty()) j[baseline_field] = (*ps.baseline)[i];
        if (!ps.n_rungs.empty()) j["n_rungs"] = ps.n_rungs[i];
        out << j.dump() << '\n';
    }
}

} // namespace rydberg::metrics
