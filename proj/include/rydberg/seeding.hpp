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

// Reproducible random streams. Everything that draws random numbers in this
// project goes through these helpers so that datasets are identical across
// standard libraries and worker schedules.

#include <cstdint>
#include <random>

namespace rydberg {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for stream `index` under `master`; independent of evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Named sub-streams of a per-sample seed.
enum class Stream : std::uint64_t {
    bipartition = 1,
    lanczos = 2,
    shots = 3,
    bitflip = 4,
    boundary = 5,
    parameters = 6,
};

constexpr std::uint64_t derive_seed(std::uint64_t sample_seed, Stream stream) noexcept {
    return derive_seed(sample_seed, static_cast<std::uint64_t>(stream) * 0x100000001b3ULL);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, n) without modulo bias (Lemire). n must be > 0.
inline std::uint64_t uniform_index(Rng &rng, std::uint64_t n) {
    auto product = static_cast<unsigned __int128>(rng()) * n;
    auto low = static_cast<std::uint64_t>(product);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            product = static_cast<unsigned __int128>(rng()) * n;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

} // namespace rydberg
