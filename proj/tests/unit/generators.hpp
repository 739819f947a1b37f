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

// Small random-input generators for the property tests.

#include "rydberg/lattice.hpp"
#include "rydberg/seeding.hpp"
#include "rydberg/spectrum.hpp"

#include <cmath>
#include <vector>

namespace gen {

struct Source {
    rydberg::Rng rng;
    explicit Source(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * rydberg::uniform_unit(rng); }
    std::size_t index(std::size_t lo, std::size_t hi) { return lo + rydberg::uniform_index(rng, hi - lo + 1); }

    rydberg::SystemParams params(std::size_t max_rungs) {
        return {uniform(0.0, 6.0), uniform(0.1, 5.0), 0.0, index(1, max_rungs)};
    }

    std::vector<double> unit_vector(std::size_t dim) {
        std::vector<double> v(dim);
        double n = 0;
        for (auto &x : v) {
            x = uniform(-1.0, 1.0);
            n += x * x;
        }
        for (auto &x : v) x /= std::sqrt(n);
        return v;
    }

    rydberg::Bipartition bipartition(std::size_t n_sites) {
        const std::uint64_t full = (std::uint64_t{1} << n_sites) - 1;
        return {n_sites, 1 + rydberg::uniform_index(rng, full - 1)};
    }

    std::vector<double> reals(std::size_t n, double lo, double hi) {
        std::vector<double> v(n);
        for (auto &x : v) x = uniform(lo, hi);
        return v;
    }
};

} // namespace gen
