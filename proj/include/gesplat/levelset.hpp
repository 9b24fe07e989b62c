// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/field.hpp"
#include "gesplat/poisson.hpp"
#include "gesplat/renderer.hpp"
#include "gesplat/rng.hpp"

#include <vector>

namespace gesplat {

struct LevelSetConfig {
    double iso = 0.3;          // density level alpha
    int rays_per_view = 10000; // random valid depth-map pixels per camera
    int steps = 32;            // uniform density samples along each ray
    double span_sigmas = 3.0;  // ray extent around the seed, in sigma_g(v)
    double residual_tol = 1e-2;
    int refine_bisections = 8; // polish after linear interpolation
};

struct LevelSetStats {
    long rays = 0;            // rays actually cast (valid pixels sampled)
    long crossings = 0;       // rays with a rising iso crossing
    long emitted = 0;         // points surviving the residual check
    long residual_rejected = 0;
    long degenerate_normals = 0;
    double coverage() const { return rays ? double(crossings) / rays : 0.0; }
};

/// Fraction of the step [d0, d1) at which a rising crossing of `iso` sits.
inline double interpolate_crossing(double d0, double d1, double iso) {
    return (iso - d0) / (d1 - d0);
}

/// Seeds rays at backprojected expected-depth pixels, walks the density
/// along each ray over +-span_sigmas of the pixel's dominant splat, locates
/// the first rising crossing of the iso level (closest to the camera),
/// polishes it, and emits the point with the normalized density-gradient
/// normal oriented toward the camera.
std::vector<LevelSetPoint> sample_level_set(const SplatCloud& cloud,
                                            const DensityField& field,
                                            const std::vector<Camera>& cameras,
                                            const RenderParams& render_params,
                                            const LevelSetConfig& config, Rng& rng,
                                            LevelSetStats* stats = nullptr);

} // namespace gesplat
