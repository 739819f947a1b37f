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

// Graph encoding of one (state, subsystem) sample and the line-oriented
// interchange format shared with the training side.
//
// Node features:   [x, y, p_i, mask_i]
// Edge features:   [distance / sqrt(n_sites), line angle in [0, pi), C_ij (, M_ij)]
// Global features: [n_A / n_sites, n_B / n_sites]
//
// Every included pair appears as two directed edges carrying identical
// features.

#include "rydberg/lattice.hpp"
#include "rydberg/sampler.hpp"
#include "rydberg/spectrum.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rydberg {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::size_t kNodeFeatureCount = 4;

struct FeatureOptions {
    std::optional<double> cutoff; // grid units; empty = fully connected
    bool fourth_moment = false;
    friend bool operator==(const FeatureOptions &, const FeatureOptions &) = default;
};

struct SampleSeeds {
    std::uint64_t master = 0;
    std::uint64_t index = 0;
    std::uint64_t sample = 0;
    friend bool operator==(const SampleSeeds &, const SampleSeeds &) = default;
};

struct Targets {
    double s_vn = 0.0;
    double mi = 0.0; // from the (possibly noisy) data the features were built from
    double half_mi = 0.0;
    std::optional<double> mi_exact; // present when the features are noisy
    std::optional<double> half_mi_exact;
    friend bool operator==(const Targets &, const Targets &) = default;
};

struct SampleMetadata {
    SystemParams params;
    PartitionMode partition = PartitionMode::random;
    std::vector<bool> target_mask; // subsystem A used for s_vn
    NoiseDescriptor noise;
    SampleSeeds seeds;
    bool degenerate = false;
    double energy = 0.0;
    std::optional<double> gap;
    std::string solver;
    friend bool operator==(const SampleMetadata &, const SampleMetadata &) = default;
};

struct GraphSample {
    std::vector<bool> mask; // subsystem A as seen by the features
    std::vector<std::array<double, kNodeFeatureCount>> node_features;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_index;
    std::vector<std::vector<double>> edge_features;
    std::array<double, 2> global_features{};
    FeatureOptions options;
    Targets targets;
    SampleMetadata metadata;
    friend bool operator==(const GraphSample &, const GraphSample &) = default;
};

// Everything needed to re-featurize a sample with different options.
struct RawSample {
    std::vector<bool> mask;
    std::vector<double> p;
    Eigen::MatrixXd correlations;
    Eigen::MatrixXd fourth_moment;
    Targets targets;
    SampleMetadata metadata;
};

// Ordered pairs (i, j), i != j, with distance <= cutoff.
std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list(const Lattice &lattice, std::optional<double> cutoff);

// Angle of the undirected line through two sites, folded to [0, pi).
double line_angle(const Position &from, const Position &to);

// Builds the feature part of a GraphSample; targets and metadata are left for
// the caller. `fourth_moment` is required when options.fourth_moment is set.
GraphSample featurize(const Lattice &lattice, const Bipartition &bipartition, const std::vector<double> &p,
                      const Eigen::MatrixXd &correlations, const FeatureOptions &options,
                      const Eigen::MatrixXd *fourth_moment = nullptr);

GraphSample featurize(const RawSample &raw, const FeatureOptions &options);

// One JSON object per line.
std::string to_line(const GraphSample &sample);
GraphSample graph_from_line(const std::string &line, std::size_t line_number = 1);
std::string to_line(const RawSample &sample);
RawSample raw_from_line(const std::string &line, std::size_t line_number = 1);

void write_samples(const std::filesystem::path &path, const std::vector<GraphSample> &samples);
std::vector<GraphSample> read_samples(const std::filesystem::path &path);
std::vector<GraphSample> read_samples(std::istream &in);
std::vector<RawSample> read_raw_samples(const std::filesystem::path &path);

} // namespace rydberg
