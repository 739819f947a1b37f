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

#include "rydberg/sampler.hpp"

#include "rydberg/errors.hpp"
#include "rydberg/seeding.hpp"

#include <algorithm>
#include <numeric>
#include <istream>
#include <ostream>
#include <sstream>

namespace rydberg {

namespace {

void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(std::string(what) + " must lie in [0, 1]");
}

} // namespace

ShotSet sample_bitstrings(const BasisDistribution &distribution, std::size_t n_shots, std::uint64_t seed) {
    distribution.validate(1e-8);
    if (n_shots == 0) throw InvalidArgument("need at least one shot");

    const auto &probs = distribution.probabilities;
    std::vector<double> cdf(probs.size());
    std::partial_sum(probs.begin(), probs.end(), cdf.begin());
    const double total = cdf.back();

    ShotSet out;
    out.n_sites = distribution.n_sites;
    out.provenance.shots = n_shots;
    out.shots.reserve(n_shots);
    Rng rng(seed);
    for (std::size_t k = 0; k < n_shots; ++k) {
        const double u = uniform_unit(rng) * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        auto index = static_cast<std::size_t>(it - cdf.begin());
        index = std::min(index, cdf.size() - 1);
        // never land on a zero-probability outcome through rounding at the top
        while (probs[index] == 0.0 && index > 0) --index;
        out.shots.push_back(index);
    }
    return out;
}

ShotSet apply_bitflip_noise(const ShotSet &shot_set, double p_flip, std::uint64_t seed) {
    check_probability(p_flip, "bit-flip probability");
    ShotSet out = shot_set;
    out.provenance.bitflip_p = p_flip;
    if (p_flip == 0.0) return out;
    Rng rng(seed);
    for (auto &shot : out.shots) {
        for (std::size_t i = 0; i < out.n_sites; ++i)
            if (uniform_unit(rng) < p_flip) shot ^= std::uint64_t{1} << i;
    }
    return out;
}

BoundaryPerturbation perturb_bipartition_boundary(const Bipartition &bipartition, const Lattice &lattice, double p_flip,
                                                  std::uint64_t seed) {
    check_probability(p_flip, "boundary flip probability");
    const auto boundary = boundary_sites(lattice, bipartition);
    if (p_flip == 0.0 || boundary.empty()) return {bipartition, false};

    const std::uint64_t all = (std::uint64_t{1} << bipartition.n_sites()) - 1;
    Rng rng(seed);
    for (int attempt = 0; attempt < kBoundaryResampleLimit; ++attempt) {
        std::uint64_t mask = bipartition.a_mask();
        for (auto site : boundary)
            if (uniform_unit(rng) < p_flip) mask ^= std::uint64_t{1} << site;
        if (mask != 0 && mask != all) return {Bipartition(bipartition.n_sites(), mask), false};
    }
    return {bipartition, true};
}

BasisDistribution empirical_distribution(const ShotSet &shot_set) {
    if (shot_set.shots.empty()) throw InvalidArgument("empirical distribution of an empty shot set");
    BasisDistribution d;
    d.n_sites = shot_set.n_sites;
    d.probabilities.assign(std::size_t{1} << shot_set.n_sites, 0.0);
    for (auto s : shot_set.shots) d.probabilities.at(s) += 1.0;
    const double inv = 1.0 / static_cast<double>(shot_set.shots.size());
    for (auto &p : d.probabilities) p *= inv;
    return d;
}

std::string format_bitstring(std::uint64_t shot, std::size_t n_sites) {
    std::string s(n_sites, '0');
    for (std::size_t i = 0; i < n_sites; ++i)
        if ((shot >> i) & 1U) s[i] = '1';
    return s;
}

void write_shots(std::ostream &out, const ShotSet &shot_set) {
    out << "# rydberg-shots v1 n_sites=" << shot_set.n_sites << " n_shots=" << shot_set.n_shots()
        << " order=site0-first site(2i)=(x=i,y=0) site(2i+1)=(x=i,y=2)";
    if (shot_set.provenance.bitflip_p > 0.0) out << " bitflip_p=" << shot_set.provenance.bitflip_p;
    out << '\n';
    for (auto shot : shot_set.shots) out << format_bitstring(shot, shot_set.n_sites) << '\n';
}

ShotSet read_shots(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# rydberg-shots v1", 0) != 0)
        throw ParseError("missing shots header", 1);
    ShotSet out;
    {
        std::istringstream header(line);
        std::string token;
        while (header >> token) {
            if (token.rfind("n_sites=", 0) == 0) out.n_sites = std::stoul(token.substr(8));
            if (token.rfind("bitflip_p=", 0) == 0) out.provenance.bitflip_p = std::stod(token.substr(10));
        }
    }
    if (out.n_sites == 0 || out.n_sites > kMaxSites) throw ParseError("header has no valid n_sites", 1);
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        if (line.size() != out.n_sites) throw ParseError("bitstring has " + std::to_string(line.size()) + " bits", number);
        std::uint64_t shot = 0;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '1') shot |= std::uint64_t{1} << i;
            else if (line[i] != '0') throw ParseError("invalid character in bitstring", number);
        }
        out.shots.push_back(shot);
    }
    out.provenance.shots = out.shots.size();
    return out;
}

} // namespace rydberg
