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

#include "rydberg/features.hpp"

#include "rydberg/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>

namespace rydberg {

using nlohmann::json;

std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list(const Lattice &lattice, std::optional<double> cutoff) {
    if (cutoff && !(*cutoff > 0.0)) throw InvalidArgument("edge cutoff must be positive");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    const std::size_t n = lattice.n_sites();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (cutoff && lattice.distance(i, j) > *cutoff + 1e-12) continue;
            edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        }
    return edges;
}

double line_angle(const Position &from, const Position &to) {
    double theta = std::atan2(to.y - from.y, to.x - from.x);
    if (theta < 0.0) theta += std::numbers::pi;
    if (theta >= std::numbers::pi) theta -= std::numbers::pi;
    return theta;
}

GraphSample featurize(const Lattice &lattice, const Bipartition &bipartition, const std::vector<double> &p,
                      const Eigen::MatrixXd &correlations, const FeatureOptions &options,
                      const Eigen::MatrixXd *fourth_moment) {
    const std::size_t n = lattice.n_sites();
    const auto ni = static_cast<Eigen::Index>(n);
    if (bipartition.n_sites() != n || p.size() != n || correlations.rows() != ni || correlations.cols() != ni)
        throw InvalidArgument("feature inputs do not match the lattice size");
    if (options.fourth_moment && (fourth_moment == nullptr || fourth_moment->rows() != ni || fourth_moment->cols() != ni))
        throw InvalidArgument("fourth-moment edge feature requested without a matching moment matrix");

    GraphSample g;
    g.options = options;
    g.mask = bipartition.flags();
    g.node_features.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto &pos = lattice.position(i);
        g.node_features.push_back({pos.x, pos.y, p[i], bipartition.in_a(i) ? 1.0 : 0.0});
    }

    const double norm = std::sqrt(static_cast<double>(n));
    g.edge_index = edge_list(lattice, options.cutoff);
    g.edge_features.reserve(g.edge_index.size());
    for (auto [i, j] : g.edge_index) {
        const auto ei = static_cast<Eigen::Index>(i);
        const auto ej = static_cast<Eigen::Index>(j);
        // symmetrize so both directions carry bit-identical values
        const double c = 0.5 * (correlations(ei, ej) + correlations(ej, ei));
        std::vector<double> f{lattice.distance(i, j) / norm, line_angle(lattice.position(i), lattice.position(j)), c};
        if (options.fourth_moment) f.push_back(0.5 * ((*fourth_moment)(ei, ej) + (*fourth_moment)(ej, ei)));
        g.edge_features.push_back(std::move(f));
    }

    const double nd = static_cast<double>(n);
    g.global_features = {static_cast<double>(bipartition.n_a()) / nd, static_cast<double>(bipartition.n_b()) / nd};
    return g;
}

GraphSample featurize(const RawSample &raw, const FeatureOptions &options) {
    const Lattice lattice(raw.metadata.params.n_rungs);
    GraphSample g = featurize(lattice, Bipartition::from_flags(raw.mask), raw.p, raw.correlations, options,
                              raw.fourth_moment.size() > 0 ? &raw.fourth_moment : nullptr);
    g.targets = raw.targets;
    g.metadata = raw.metadata;
    return g;
}

namespace {

json mask_json(const std::vector<bool> &mask) {
    json out = json::array();
    for (bool b : mask) out.push_back(b ? 1 : 0);
    return out;
}

std::vector<bool> mask_from(const json &j) {
    std::vector<bool> out;
    for (const auto &v : j) out.push_back(v.get<int>() != 0);
    return out;
}

template <class T> json optional_json(const std::optional<T> &v) { return v ? json(*v) : json(nullptr); }

template <class T> std::optional<T> optional_from(const json &j, const char *key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

json matrix_json(const Eigen::MatrixXd &m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

Eigen::MatrixXd matrix_from(const json &j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXd m(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto &row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != rows) throw InvalidArgument("matrix is not square");
        for (Eigen::Index k = 0; k < rows; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return m;
}

void put_common(json &j, const Targets &t, const SampleMetadata &m) {
    j["n_rungs"] = m.params.n_rungs;
    j["delta_over_omega"] = m.params.delta_over_omega;
    j["rb_over_a"] = m.params.rb_over_a;
    j["phi"] = m.params.phi;
    j["s_vn"] = t.s_vn;
    j["mi"] = t.mi;
    j["half_mi"] = t.half_mi;
    j["mi_exact"] = optional_json(t.mi_exact);
    j["half_mi_exact"] = optional_json(t.half_mi_exact);
    j["shots"] = optional_json(m.noise.shots);
    j["noise"] = {{"bitflip_p", m.noise.bitflip_p},
                  {"boundary_flip_p", m.noise.boundary_flip_p},
                  {"boundary_fallback", m.noise.boundary_fallback}};
    j["seeds"] = {{"master", m.seeds.master}, {"index", m.seeds.index}, {"sample", m.seeds.sample}};
    j["degenerate"] = m.degenerate;
    j["energy"] = m.energy;
    j["gap"] = optional_json(m.gap);
    j["solver"] = m.solver;
    j["partition"] = to_string(m.partition);
    j["partition_law"] = kRandomPartitionLaw;
    j["target_mask"] = mask_json(m.target_mask);
}

void get_common(const json &j, Targets &t, SampleMetadata &m) {
    m.params.n_rungs = j.at("n_rungs").get<std::size_t>();
    m.params.delta_over_omega = j.at("delta_over_omega").get<double>();
    m.params.rb_over_a = j.at("rb_over_a").get<double>();
    m.params.phi = j.value("phi", 0.0);
    t.s_vn = j.at("s_vn").get<double>();
    t.mi = j.at("mi").get<double>();
    t.half_mi = j.at("half_mi").get<double>();
    t.mi_exact = optional_from<double>(j, "mi_exact");
    t.half_mi_exact = optional_from<double>(j, "half_mi_exact");
    m.noise.shots = optional_from<std::size_t>(j, "shots");
    const auto &noise = j.at("noise");
    m.noise.bitflip_p = noise.at("bitflip_p").get<double>();
    m.noise.boundary_flip_p = noise.at("boundary_flip_p").get<double>();
    m.noise.boundary_fallback = noise.at("boundary_fallback").get<bool>();
    const auto &seeds = j.at("seeds");
    m.seeds = {seeds.at("master").get<std::uint64_t>(), seeds.at("index").get<std::uint64_t>(),
               seeds.at("sample").get<std::uint64_t>()};
    m.degenerate = j.at("degenerate").get<bool>();
    m.energy = j.at("energy").get<double>();
    m.gap = optional_from<double>(j, "gap");
    m.solver = j.at("solver").get<std::string>();
    m.partition = parse_partition_mode(j.at("partition").get<std::string>());
    m.target_mask = mask_from(j.at("target_mask"));
}

json parse_checked(const std::string &line, std::size_t line_number, const char *kind) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("malformed record: ") + e.what(), line_number);
    }
    if (!j.is_object()) throw ParseError("record is not an object", line_number);
    if (!j.contains("schema_version")) throw ParseError("record has no schema_version", line_number);
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion) throw SchemaVersionError(version, kSchemaVersion, line_number);
    if (j.value("kind", std::string{}) != kind)
        throw ParseError(std::string("expected a '") + kind + "' record", line_number);
    return j;
}

template <class F> auto wrap_field_errors(std::size_t line_number, F &&f) {
    try {
        return f();
    } catch (const json::exception &e) {
        throw ParseError(std::string("bad field: ") + e.what(), line_number);
    } catch (const InvalidArgument &e) {
        throw ParseError(e.what(), line_number);
    }
}

} // namespace

std::string to_line(const GraphSample &s) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "graph";
    j["mask"] = mask_json(s.mask);
    json nodes = json::array();
    for (const auto &f : s.node_features) nodes.push_back(f);
    j["node_features"] = std::move(nodes);
    json edges = json::array();
    for (auto [a, b] : s.edge_index) edges.push_back({a, b});
    j["edge_index"] = std::move(edges);
    j["edge_features"] = s.edge_features;
    j["global_features"] = s.global_features;
    j["cutoff"] = optional_json(s.options.cutoff);
    j["fourth_moment"] = s.options.fourth_moment;
    put_common(j, s.targets, s.metadata);
    return j.dump();
}

GraphSample graph_from_line(const std::string &line, std::size_t line_number) {
    const json j = parse_checked(line, line_number, "graph");
    return wrap_field_errors(line_number, [&] {
        GraphSample s;
        s.mask = mask_from(j.at("mask"));
        for (const auto &f : j.at("node_features")) {
            if (f.size() != kNodeFeatureCount) throw InvalidArgument("node feature vector must have 4 entries");
            s.node_features.push_back(f.get<std::array<double, kNodeFeatureCount>>());
        }
        for (const auto &e : j.at("edge_index")) s.edge_index.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>());
        s.edge_features = j.at("edge_features").get<std::vector<std::vector<double>>>();
        if (s.edge_features.size() != s.edge_index.size()) throw InvalidArgument("edge_features and edge_index differ in length");
        s.global_features = j.at("global_features").get<std::array<double, 2>>();
        s.options.cutoff = optional_from<double>(j, "cutoff");
        s.options.fourth_moment = j.at("fourth_moment").get<bool>();
        get_common(j, s.targets, s.metadata);
        return s;
    });
}

std::string to_line(const RawSample &s) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "raw";
    j["mask"] = mask_json(s.mask);
    j["p"] = s.p;
    j["correlations"] = matrix_json(s.correlations);
    j["fourth_moment"] = matrix_json(s.fourth_moment);
    put_common(j, s.targets, s.metadata);
    return j.dump();
}

RawSample raw_from_line(const std::string &line, std::size_t line_number) {
    const json j = parse_checked(line, line_number, "raw");
    return wrap_field_errors(line_number, [&] {
        RawSample s;
        s.mask = mask_from(j.at("mask"));
        s.p = j.at("p").get<std::vector<double>>();
        s.correlations = matrix_from(j.at("correlations"));
        s.fourth_moment = matrix_from(j.at("fourth_moment"));
        get_common(j, s.targets, s.metadata);
        return s;
    });
}

void write_samples(const std::filesystem::path &path, const std::vector<GraphSample> &samples) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (const auto &s : samples) out << to_line(s) << '\n';
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

std::vector<GraphSample> read_samples(std::istream &in) {
    std::vector<GraphSample> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        out.push_back(graph_from_line(line, number));
    }
    return out;
}

std::vector<GraphSample> read_samples(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_samples(in);
}

std::vector<RawSample> read_raw_samples(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<RawSample> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        out.push_back(raw_from_line(line, number));
    }
    return out;
}

} // namespace rydberg
