// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

// Naive per-pixel reference renderer: iterates every projected splat for
// every pixel with no tiling and no SIMD kernels. Shares only the
// ProjectedSplat inputs with the library path.

#pragma once

#include "gesplat/renderer.hpp"

#include <cmath>
#include <vector>

namespace gesplat::test {

inline ImageBuffer render_naive(const std::vector<ProjectedSplat>& projected,
                                const Camera& camera, const RenderParams& params) {
    ImageBuffer out(camera.width, camera.height);
    out.ensure_depth();
    out.ensure_alpha();
    for (int py = 0; py < camera.height; ++py) {
        for (int px = 0; px < camera.width; ++px) {
            double t = 1.0;
            double acc[3] = {0, 0, 0};
            double zsum = 0.0, wsum = 0.0;
            for (const ProjectedSplat& p : projected) {
                if (t < params.transmittance_floor) break;
                const int bx0 = int(std::floor(p.mean.x - p.radius));
                const int bx1 = int(std::floor(p.mean.x + p.radius));
                const int by0 = int(std::floor(p.mean.y - p.radius));
                const int by1 = int(std::floor(p.mean.y + p.radius));
                if (px < bx0 || px > bx1 || py < by0 || py > by1) continue;
                const double dx = (px + 0.5) - p.mean.x;
                const double dy = (py + 0.5) - p.mean.y;
                // Evaluation order pinned by the kernel contract (simd.hpp).
                double power = -0.5 * (p.conic[0] * dx * dx + p.conic[2] * dy * dy) -
                               (p.conic[1] * dy) * dx;
                if (power > 0.0) power = 0.0;
                const double a = p.alpha * std::exp(power);
                if (a < params.alpha_skip) continue;
                const double w = a * t;
                acc[0] += w * p.color.x;
                acc[1] += w * p.color.y;
                acc[2] += w * p.color.z;
                zsum += w * p.depth;
                wsum += w;
                t *= (1.0 - a);
            }
            const std::size_t pix = std::size_t(py) * camera.width + px;
            out.rgb[3 * pix + 0] = acc[0] + t * params.background.x;
            out.rgb[3 * pix + 1] = acc[1] + t * params.background.y;
            out.rgb[3 * pix + 2] = acc[2] + t * params.background.z;
            out.alpha[pix] = 1.0 - t;
            out.depth[pix] = wsum > 0.0 ? zsum / wsum : camera.far;
        }
    }
    return out;
}

} // namespace gesplat::test
