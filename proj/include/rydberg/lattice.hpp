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

// Two-leg ladder geometry and subsystem selection.
//
// Site ordering is frozen: the atom of rung i on the lower leg (y = 0) has
// index 2*i, its partner on the upper leg (y = 2) has index 2*i + 1. Bit i of
// every basis-state index and every bitstring refers to site i.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rydberg {

struct Position {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Position &, const Position &) = default;
};

inline constexpr double kRungSpacing = 1.0; // x
inline constexpr double kLegSpacing = 2.0;  // y

// Hilbert spaces are indexed by 64-bit words, one bit per site.
inline constexpr std::size_t kMaxSites = 62;

class Lattice {
  public:
    explicit Lattice(std::size_t n_rungs);

    [[nodiscard]] std::size_t n_rungs() const noexcept { return n_rungs_; }
    [[nodiscard]] std::size_t n_sites() const noexcept { return positions_.size(); }
    [[nodiscard]] const std::vector<Position> &positions() const noexcept { return positions_; }
    [[nodiscard]] const Position &position(std::size_t site) const { return positions_.at(site); }
    [[nodiscard]] double distance(std::size_t i, std::size_t j) const;

    static constexpr std::size_t site_index(std::size_t rung, std::size_t leg) noexcept { return 2 * rung + leg; }

  private:
    std::size_t n_rungs_;
    std::vector<Position> positions_;
};

Lattice build_ladder(std::size_t n_rungs);

// Split of the sites into subsystems A (mask bit set) and B.
class Bipartition {
  public:
    // Both subsystems must be non-empty.
    Bipartition(std::size_t n_sites, std::uint64_t a_mask);
    static Bipartition from_sites(std::size_t n_sites, const std::vector<std::size_t> &a_sites);
    static Bipartition from_flags(const std::vector<bool> &in_a);

    [[nodiscard]] std::size_t n_sites() const noexcept { return n_sites_; }
    [[nodiscard]] std::uint64_t a_mask() const noexcept { return a_mask_; }
    [[nodiscard]] std::uint64_t b_mask() const noexcept;
    [[nodiscard]] std::size_t n_a() const noexcept;
    [[nodiscard]] std::size_t n_b() const noexcept { return n_sites_ - n_a(); }
    [[nodiscard]] bool in_a(std::size_t site) const noexcept { return ((a_mask_ >> site) & 1U) != 0; }
    [[nodiscard]] std::vector<bool> flags() const;
    [[nodiscard]] std::vector<std::size_t> a_sites() const;
    [[nodiscard]] std::vector<std::size_t> b_sites() const;
    [[nodiscard]] Bipartition complement() const { return {n_sites_, b_mask()}; }

    friend bool operator==(const Bipartition &, const Bipartition &) = default;

  private:
    std::size_t n_sites_;
    std::uint64_t a_mask_;
};

// Subsystem size uniform in {1, ..., n_sites - 1}, then a uniform subset of
// that size.
Bipartition random_bipartition(const Lattice &lattice, std::uint64_t seed);

// Left half of the rungs in A. Requires an even number of rungs.
Bipartition symmetric_bipartition(const Lattice &lattice);

inline constexpr double kBoundaryRadius = 2.0;

// Sites with at least one site of the other subsystem within kBoundaryRadius.
std::vector<std::size_t> boundary_sites(const Lattice &lattice, const Bipartition &bipartition);

enum class PartitionMode { random, symmetric };

std::string to_string(PartitionMode mode);
PartitionMode parse_partition_mode(const std::string &text);

// Identifier written into dataset metadata for the random-subsystem law.
inline constexpr const char *kRandomPartitionLaw = "uniform-size-then-uniform-subset";

} // namespace rydberg
