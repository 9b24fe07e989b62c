// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/vec_math.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace gesplat {

/// Allowed range of the per-splat shape exponent. epsilon = 2 is a pure
/// Gaussian; the optimizer moves it through a bounded sigmoid latent so it
/// can never leave (lo, hi).
struct EpsilonBounds {
    double lo = 0.3;
    double hi = 8.0;
};

inline double latent_to_epsilon(double u, const EpsilonBounds& b) {
    return b.lo + (b.hi - b.lo) * sigmoid(u);
}

inline double epsilon_to_latent(double eps, const EpsilonBounds& b) {
    const double t = clamp((eps - b.lo) / (b.hi - b.lo), 1e-12, 1.0 - 1e-12);
    return logit(t);
}

/// d(epsilon)/d(latent) evaluated at the latent that maps to eps.
inline double epsilon_latent_grad(double eps, const EpsilonBounds& b) {
    const double t = clamp((eps - b.lo) / (b.hi - b.lo), 1e-12, 1.0 - 1e-12);
    return (b.hi - b.lo) * t * (1.0 - t);
}

/// One generalized exponential primitive.
///
/// Scales and opacity are stored in their unconstrained (log / logit) form:
/// that is what the optimizer updates and what the PLY schema carries, so
/// persistence round-trips bit-exactly. epsilon is stored as the plain shape
/// value; its sigmoid latent exists only transiently inside the optimizer.
struct SplatCore {
    Vec3 position{0.0, 0.0, 0.0};
    Quat rotation = Quat::identity();      // unit length after every update
    Vec3 log_scale{0.0, 0.0, 0.0};         // scale = exp(log_scale), > 0
    double opacity_logit = 0.0;            // opacity = sigmoid(opacity_logit)
    double epsilon = 2.0;                  // shape exponent, in EpsilonBounds
    Vec3 color{0.5, 0.5, 0.5};             // base RGB in [0, 1]
    std::array<double, 9> sh1{};           // degree-1 SH, layout [channel*3 + basis]

    Vec3 scale() const {
        return {std::exp(log_scale.x), std::exp(log_scale.y), std::exp(log_scale.z)};
    }
    double opacity() const { return sigmoid(opacity_logit); }

    void set_scale(const Vec3& s) {
        log_scale = {std::log(s.x), std::log(s.y), std::log(s.z)};
    }
    void set_opacity(double alpha) {
        opacity_logit = logit(clamp(alpha, 1e-12, 1.0 - 1e-12));
    }

    /// Index (0..2) of the smallest scale axis; ties go to the lower index.
    int min_scale_axis() const {
        int axis = 0;
        if (log_scale.y < log_scale[axis]) axis = 1;
        if (log_scale.z < log_scale[axis]) axis = 2;
        return axis;
    }
    double min_scale() const { return std::exp(log_scale[min_scale_axis()]); }

    bool all_finite() const {
        return position.all_finite() && rotation.all_finite() &&
               log_scale.all_finite() && std::isfinite(opacity_logit) &&
               std::isfinite(epsilon) && color.all_finite() &&
               [this] {
                   for (double v : sh1)
                       if (!std::isfinite(v)) return false;
                   return true;
               }();
    }
};

/// Ordered splat population. The generation counter bumps on every
/// structural edit so spatial indices know when they are stale.
struct SplatCloud {
    std::vector<SplatCore> splats;
    std::uint64_t generation = 0;

    std::size_t size() const { return splats.size(); }
    bool empty() const { return splats.empty(); }
    SplatCore& operator[](std::size_t i) { return splats[i]; }
    const SplatCore& operator[](std::size_t i) const { return splats[i]; }

    bool all_finite() const {
        for (const auto& s : splats)
            if (!s.all_finite()) return false;
        return true;
    }
};

} // namespace gesplat
