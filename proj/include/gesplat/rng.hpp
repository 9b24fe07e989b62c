// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/vec_math.hpp"

#include <cstdint>
#include <random>

namespace gesplat {

/// Seeded RNG used everywhere randomness is needed. One master instance per
/// run keeps results reproducible for a fixed seed and worker count.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : engine_(seed) {}

    double uniform() { return uniform_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() { return normal_(engine_); }
    Vec3 normal3() { return {normal(), normal(), normal()}; }

    /// Integer in [0, n).
    uint64_t next_index(uint64_t n) {
        return std::uniform_int_distribution<uint64_t>(0, n - 1)(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

    /// Derive an independent stream (e.g. one per view) from this one.
    Rng fork() { return Rng(engine_()); }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace gesplat
