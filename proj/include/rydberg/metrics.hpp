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

// Evaluation mathematics for entropy predictions. Works on plain columns so
// that prediction files from any model can be scored.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rydberg::metrics {

// mean ln cosh(pred - truth); switches to |d| - ln 2 beyond |d| = 20.
double log_cosh_loss(std::span<const double> preds, std::span<const double> truths);
double log_cosh(double d);
double mae(std::span<const double> preds, std::span<const double> truths);
double rmse(std::span<const double> preds, std::span<const double> truths);

inline constexpr double kMapeRelativeThreshold = 0.01;

// Mean absolute percentage error over records whose truth exceeds
// kMapeRelativeThreshold times the largest truth. Empty when none qualify.
std::optional<double> mape_thresholded(std::span<const double> preds, std::span<const double> truths);

enum class ErrorKind { absolute, squared };
ErrorKind parse_error_kind(const std::string &text);
std::vector<double> errors(std::span<const double> preds, std::span<const double> truths, ErrorKind kind);
std::vector<double> signed_errors(std::span<const double> preds, std::span<const double> truths);

struct PairedComparison {
    std::size_t n = 0;
    double mean_diff = 0.0; // mean(err_b - err_a)
    double sd_diff = 0.0;
    double t = 0.0;
    double p_two_sided = 1.0;
    double cohens_d = 0.0;
};

// Paired t-test on d_i = err_b[i] - err_a[i] with N - 1 degrees of freedom.
PairedComparison paired_comparison(std::span<const double> err_a, std::span<const double> err_b);

struct BiasTest {
    std::size_t n = 0;
    double mean_bias = 0.0;
    double t = 0.0;
    double p_two_sided = 1.0;
};

// One-sample t-test of the signed errors against zero.
BiasTest bias_test(std::span<const double> signed_errors);

// Two-sided p-value of Student's t with `dof` degrees of freedom.
double student_t_two_sided(double t, double dof);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] double width() const noexcept { return hi - lo; }
    [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

inline constexpr double kLowerQuantile = 0.025;
inline constexpr double kUpperQuantile = 0.975;

// Linear interpolation between order statistics at position q * (n - 1).
double percentile(std::span<const double> sorted, double q);

// Per record: the kLowerQuantile/kUpperQuantile percentiles of
// mean + T * (sample - mean).
std::vector<Interval> apply_temperature(const std::vector<std::vector<double>> &samples_per_record, double temperature);

double coverage(std::span<const Interval> intervals, std::span<const double> truths);
double mean_width(std::span<const Interval> intervals);

struct PredictionSet {
    std::vector<double> truth;
    std::vector<double> prediction;
    std::vector<std::vector<double>> dropout_samples; // empty, or one row of K per record
    std::optional<std::vector<double>> baseline;
    std::vector<std::size_t> n_rungs; // empty when unknown

    [[nodiscard]] std::size_t size() const noexcept { return truth.size(); }
    [[nodiscard]] bool has_samples() const noexcept { return !dropout_samples.empty(); }
    void validate() const;
};

struct CalibrationResult {
    double temperature = 1.0;
    double coverage = 0.0;
    double mean_width = 0.0;
    double coverage_at_unit = 0.0; // coverage before scaling (T = 1)
    double target = 0.95;
    bool converged = false;
};

struct CalibrationOptions {
    double target_coverage = 0.95;
    double t_min = 0.25;
    double t_max = 4.0;
    double resolution = 1e-3;
};

// Bisection on the temperature; coverage is nondecreasing in T.
CalibrationResult calibrate_temperature(const PredictionSet &predictions, const CalibrationOptions &options = {});

// Coverage at each temperature in `temperatures`.
std::vector<double> coverage_curve(const PredictionSet &predictions, std::span<const double> temperatures);

// Line records with `s_vn` (truth), `s_pred` and/or `dropout_samples`; the
// baseline column is read from `baseline_field` when non-empty.
PredictionSet read_predictions(const std::filesystem::path &path, const std::string &baseline_field = "half_mi");
PredictionSet read_predictions(std::istream &in, const std::string &baseline_field = "half_mi");
void write_predictions(std::ostream &out, const PredictionSet &predictions, const std::string &baseline_field = "half_mi");

} // namespace rydberg::metrics
