// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/camera.hpp"
#include "gesplat/image.hpp"
#include "gesplat/splat.hpp"

#include <cstdint>
#include <vector>

namespace gesplat {

/// One splat after projection into a camera.
struct ProjectedSplat {
    Vec2 mean;           // pixel coords
    double cov2[3];      // projected covariance (A, B, C), floored
    double conic[3];     // inverse covariance (a, b, c)
    double depth = 0.0;  // view-space z
    Vec3 color;          // per-view color (SH already evaluated, clamped)
    double alpha = 0.0;
    double radius = 0.0; // 3-sigma footprint radius in pixels
    int id = -1;         // index into the source cloud
};

struct RenderParams {
    Vec3 background{0.0, 0.0, 0.0};
    double rho = 0.1;          // shape-modulation strength
    bool gaussian_only = false; // plain Gaussian path: shape modulation skipped
    bool sh_enabled = true;
    double guard_band = 1.3;   // frustum cull margin
    double transmittance_floor = 1e-4;
    double alpha_skip = 1.0 / 255.0;
};

inline constexpr int kTileSize = 16;

/// Culls against the near plane and the guard-band frustum, builds the
/// effective (shape-modulated) covariance, projects it, and returns the
/// survivors sorted by ascending view depth (ties by id).
std::vector<ProjectedSplat> project_splats(const SplatCloud& cloud,
                                           const Camera& camera,
                                           const RenderParams& params);

/// Front-to-back alpha compositing over 16x16 tiles. Fills rgb, alpha and
/// expected-depth planes (depth = far where nothing accumulated). When
/// `dominant` is given it receives the per-pixel id of the largest-weight
/// contributor (-1 where none). Deterministic for a fixed input order
/// regardless of worker count.
void rasterize(const std::vector<ProjectedSplat>& projected, const Camera& camera,
               const RenderParams& params, ImageBuffer& out,
               std::vector<int>* dominant = nullptr);

/// Convenience: project + rasterize.
ImageBuffer render(const SplatCloud& cloud, const Camera& camera,
                   const RenderParams& params);

struct DepthRender {
    std::vector<double> depth;      // expected depth, far where invalid
    std::vector<std::uint8_t> valid; // accumulated alpha >= 0.5
    std::vector<int> dominant;      // largest-weight splat per pixel, -1 none
    int width = 0, height = 0;
};

/// Expected-depth pass for the mesher: per-pixel alpha-weighted depth with
/// a validity mask and the dominant splat per pixel.
DepthRender render_depth(const std::vector<ProjectedSplat>& projected,
                         const Camera& camera, const RenderParams& params);

} // namespace gesplat
