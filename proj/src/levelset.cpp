// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/levelset.hpp"

#include "gesplat/covariance.hpp"

#include <algorithm>
#include <cmath>

namespace gesplat {

std::vector<LevelSetPoint> sample_level_set(const SplatCloud& cloud,
                                            const DensityField& field,
                                            const std::vector<Camera>& cameras,
                                            const RenderParams& render_params,
                                            const LevelSetConfig& config, Rng& rng,
                                            LevelSetStats* stats) {
    std::vector<LevelSetPoint> out;
    LevelSetStats local;

    const auto density_at = [&](const Vec3& x) {
        const auto ids = field.neighbors(x);
        return field.density(x, ids);
    };

    for (std::size_t cam_id = 0; cam_id < cameras.size(); ++cam_id) {
        const Camera& cam = cameras[cam_id];
        const auto projected = project_splats(cloud, cam, render_params);
        const DepthRender depth = render_depth(projected, cam, render_params);

        std::vector<int> valid_pixels;
        valid_pixels.reserve(depth.valid.size());
        for (std::size_t i = 0; i < depth.valid.size(); ++i)
            if (depth.valid[i] && depth.dominant[i] >= 0)
                valid_pixels.push_back(int(i));
        if (valid_pixels.empty()) continue;

        const Vec3 cam_pos = cam.position();
        for (int ray = 0; ray < config.rays_per_view; ++ray) {
            const int pix = valid_pixels[rng.next_index(valid_pixels.size())];
            const int px = pix % cam.width;
            const int py = pix / cam.width;
            ++local.rays;

            const Vec3 seed = cam.unproject(px + 0.5, py + 0.5, depth.depth[pix]);
            const Vec3 dir = (seed - cam_pos).normalized();

            // Ray extent from the dominant splat's directional deviation.
            const SplatCore& g = cloud.splats[depth.dominant[pix]];
            const Cov3 cov = build_covariance(g.rotation, g.scale());
            const double sigma = std::sqrt(std::max(dir.dot(cov * dir), 1e-12));
            const double span = config.span_sigmas * sigma;

            const int steps = std::max(config.steps, 2);
            const double dt = 2.0 * span / double(steps - 1);
            double t_prev = -span;
            double d_prev = density_at(seed + dir * t_prev);
            double t_cross = 0.0;
            bool found = false;
            for (int k = 1; k < steps; ++k) {
                const double t_k = -span + k * dt;
                const double d_k = density_at(seed + dir * t_k);
                if (d_prev < config.iso && d_k >= config.iso) {
                    const double frac = interpolate_crossing(d_prev, d_k, config.iso);
                    t_cross = t_prev + frac * dt;
                    // Bisection polish inside the bracket.
                    double lo = t_prev, hi = t_k;
                    for (int b = 0; b < config.refine_bisections; ++b) {
                        const double mid = 0.5 * (lo + hi);
                        const double dm = density_at(seed + dir * mid);
                        if (std::abs(dm - config.iso) <= 0.5 * config.residual_tol) {
                            t_cross = mid;
                            break;
                        }
                        if (dm < config.iso) lo = mid;
                        else hi = mid;
                        t_cross = 0.5 * (lo + hi);
                    }
                    found = true;
                    break;
                }
                t_prev = t_k;
                d_prev = d_k;
            }
            if (!found) continue;
            ++local.crossings;

            const Vec3 x_hat = seed + dir * t_cross;
            const auto ids = field.neighbors(x_hat);
            if (std::abs(field.density(x_hat, ids) - config.iso) >
                config.residual_tol) {
                ++local.residual_rejected;
                continue;
            }
            Vec3 normal = field.density_grad(x_hat, ids);
            const double norm = normal.norm();
            if (norm < 1e-12) {
                ++local.degenerate_normals;
                continue;
            }
            normal = normal / norm;
            if (normal.dot(cam_pos - x_hat) < 0.0) normal = -normal;

            LevelSetPoint p;
            p.position = x_hat;
            p.normal = normal;
            p.camera_id = int(cam_id);
            p.px = px;
            p.py = py;
            out.push_back(p);
            ++local.emitted;
        }
    }

    if (stats) *stats = local;
    return out;
}

} // namespace gesplat
