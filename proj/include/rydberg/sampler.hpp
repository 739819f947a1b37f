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

// Finite-shot measurement and the readout error channels.

#include "rydberg/lattice.hpp"
#include "rydberg/quantum_info.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rydberg {

inline constexpr std::size_t kDefaultShots = 10000;

// What was done to the data before features were computed. `shots` empty
// means exact probabilities.
struct NoiseDescriptor {
    std::optional<std::size_t> shots;
    double bitflip_p = 0.0;
    double boundary_flip_p = 0.0;
    bool boundary_fallback = false; // perturbation emptied a subsystem; original kept

    [[nodiscard]] bool exact() const noexcept { return !shots.has_value() && bitflip_p == 0.0 && boundary_flip_p == 0.0; }
    friend bool operator==(const NoiseDescriptor &, const NoiseDescriptor &) = default;
};

struct ShotSet {
    std::size_t n_sites = 0;
    std::vector<std::uint64_t> shots; // bit i = site i
    NoiseDescriptor provenance;

    [[nodiscard]] std::size_t n_shots() const noexcept { return shots.size(); }
};

ShotSet sample_bitstrings(const BasisDistribution &distribution, std::size_t n_shots, std::uint64_t seed);

// Flips every bit independently with probability p_flip.
ShotSet apply_bitflip_noise(const ShotSet &shot_set, double p_flip, std::uint64_t seed);

struct BoundaryPerturbation {
    Bipartition bipartition;
    bool fallback = false;
};

inline constexpr int kBoundaryResampleLimit = 100;

// Misassigns boundary sites to the other subsystem with probability p_flip
// each. Draws that would empty a subsystem are redrawn; after
// kBoundaryResampleLimit failures the original is returned with `fallback`.
BoundaryPerturbation perturb_bipartition_boundary(const Bipartition &bipartition, const Lattice &lattice, double p_flip,
                                                  std::uint64_t seed);

BasisDistribution empirical_distribution(const ShotSet &shot_set);

// Text export: a header line, then one bitstring per line with site 0 as the
// leftmost character.
void write_shots(std::ostream &out, const ShotSet &shot_set);
ShotSet read_shots(std::istream &in);
std::string format_bitstring(std::uint64_t shot, std::size_t n_sites);

} // namespace rydberg
