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

#include "rydberg/lattice.hpp"

#include "rydberg/errors.hpp"
#include "rydberg/seeding.hpp"

#include <bit>
#include <cmath>
#include <numeric>

namespace rydberg {

Lattice::Lattice(std::size_t n_rungs) : n_rungs_(n_rungs) {
    if (n_rungs == 0) throw InvalidArgument("ladder needs at least one rung");
    if (2 * n_rungs > kMaxSites) throw InvalidArgument("ladder too long: " + std::to_string(n_rungs) + " rungs");
    positions_.reserve(2 * n_rungs);
    for (std::size_t i = 0; i < n_rungs; ++i) {
        const double x = kRungSpacing * static_cast<double>(i);
        positions_.push_back({x, 0.0});
        positions_.push_back({x, kLegSpacing});
    }
}

double Lattice::distance(std::size_t i, std::size_t j) const {
    const auto &a = positions_.at(i);
    const auto &b = positions_.at(j);
    return std::hypot(a.x - b.x, a.y - b.y);
}

Lattice build_ladder(std::size_t n_rungs) { return Lattice(n_rungs); }

Bipartition::Bipartition(std::size_t n_sites, std::uint64_t a_mask) : n_sites_(n_sites), a_mask_(a_mask) {
    if (n_sites < 2 || n_sites > kMaxSites) throw InvalidArgument("bipartition needs 2.." + std::to_string(kMaxSites) + " sites");
    if ((a_mask >> n_sites) != 0) throw InvalidArgument("bipartition mask has bits beyond n_sites");
    const auto k = static_cast<std::size_t>(std::popcount(a_mask));
    if (k == 0 || k == n_sites) throw InvalidArgument("both subsystems must be non-empty");
}

Bipartition Bipartition::from_sites(std::size_t n_sites, const std::vector<std::size_t> &a_sites) {
    std::uint64_t mask = 0;
    for (auto s : a_sites) {
        if (s >= n_sites) throw InvalidArgument("site " + std::to_string(s) + " out of range");
        mask |= std::uint64_t{1} << s;
    }
    return {n_sites, mask};
}

Bipartition Bipartition::from_flags(const std::vector<bool> &in_a) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < in_a.size(); ++i)
        if (in_a[i]) mask |= std::uint64_t{1} << i;
    return {in_a.size(), mask};
}

std::uint64_t Bipartition::b_mask() const noexcept {
    const std::uint64_t all = (std::uint64_t{1} << n_sites_) - 1;
    return all & ~a_mask_;
}

std::size_t Bipartition::n_a() const noexcept { return static_cast<std::size_t>(std::popcount(a_mask_)); }

std::vector<bool> Bipartition::flags() const {
    std::vector<bool> out(n_sites_);
    for (std::size_t i = 0; i < n_sites_; ++i) out[i] = in_a(i);
    return out;
}

std::vector<std::size_t> Bipartition::a_sites() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_sites_; ++i)
        if (in_a(i)) out.push_back(i);
    return out;
}

std::vector<std::size_t> Bipartition::b_sites() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_sites_; ++i)
        if (!in_a(i)) out.push_back(i);
    return out;
}

Bipartition random_bipartition(const Lattice &lattice, std::uint64_t seed) {
    const std::size_t n = lattice.n_sites();
    if (n < 2) throw InvalidArgument("random bipartition needs at least two sites");
    Rng rng(seed);
    const std::size_t size = 1 + uniform_index(rng, n - 1);
    std::vector<std::size_t> sites(n);
    std::iota(sites.begin(), sites.end(), std::size_t{0});
    // partial Fisher-Yates
    for (std::size_t i = 0; i < size; ++i) {
        const std::size_t j = i + uniform_index(rng, n - i);
        std::swap(sites[i], sites[j]);
    }
    sites.resize(size);
    return Bipartition::from_sites(n, sites);
}

Bipartition symmetric_bipartition(const Lattice &lattice) {
    if (lattice.n_rungs() % 2 != 0)
        throw InvalidArgument("symmetric bipartition needs an even number of rungs, got " + std::to_string(lattice.n_rungs()));
    const double half = static_cast<double>(lattice.n_rungs()) / 2.0;
    std::vector<std::size_t> a;
    for (std::size_t i = 0; i < lattice.n_sites(); ++i)
        if (lattice.position(i).x < half) a.push_back(i);
    return Bipartition::from_sites(lattice.n_sites(), a);
}

std::vector<std::size_t> boundary_sites(const Lattice &lattice, const Bipartition &bipartition) {
    if (bipartition.n_sites() != lattice.n_sites()) throw InvalidArgument("bipartition does not match lattice");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < lattice.n_sites(); ++i) {
        for (std::size_t j = 0; j < lattice.n_sites(); ++j) {
            if (bipartition.in_a(i) == bipartition.in_a(j)) continue;
            if (lattice.distance(i, j) <= kBoundaryRadius + 1e-12) {
                out.push_back(i);
                break;
            }
        }
    }
    return out;
}

std::string to_string(PartitionMode mode) { return mode == PartitionMode::random ? "random" : "symmetric"; }

PartitionMode parse_partition_mode(const std::string &text) {
    if (text == "random") return PartitionMode::random;
    if (text == "symmetric") return PartitionMode::symmetric;
    throw InvalidArgument("unknown partition mode '" + text + "' (expected random or symmetric)");
}

} // namespace rydberg
