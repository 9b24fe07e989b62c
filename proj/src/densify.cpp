// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/densify.hpp"

#include "gesplat/gef.hpp"

#include <algorithm>
#include <cmath>

namespace gesplat {
namespace {

/// Offset drawn from the splat's own (Gaussian) footprint, rejected until it
/// falls inside the 3-sigma ellipsoid.
Vec3 sample_inside_footprint(const SplatCore& parent, Rng& rng) {
    const Mat3 rot = quat_to_rotation(parent.rotation);
    const Vec3 s = parent.scale();
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Vec3 n = rng.normal3();
        if (n.squared_norm() <= 9.0) return rot * n.cwise_mul(s);
    }
    return {0.0, 0.0, 0.0};
}

} // namespace

EditSummary densify_and_prune(SplatCloud& cloud, const std::vector<double>& mean_grads,
                              const DensifyConfig& cfg, int iteration,
                              double scene_extent, Rng& rng,
                              std::vector<int>* old_of_new) {
    EditSummary summary;
    const std::size_t n = cloud.size();
    std::vector<int> origin(n);
    for (std::size_t i = 0; i < n; ++i) origin[i] = static_cast<int>(i);

    const bool densify_due = cfg.densify_enabled && iteration >= cfg.densify_start &&
                             cfg.densify_interval > 0 &&
                             iteration % cfg.densify_interval == 0 &&
                             mean_grads.size() == n;
    const bool opacity_reset_due = cfg.densify_enabled && iteration > 0 &&
                                   cfg.opacity_reset_interval > 0 &&
                                   iteration % cfg.opacity_reset_interval == 0;
    const bool shape_due = cfg.shape_edits_enabled && iteration > 0 &&
                           cfg.shape_reset_interval > 0 &&
                           iteration % cfg.shape_reset_interval == 0;

    if (densify_due) {
        const double size_limit = cfg.clone_size_fraction * scene_extent;
        std::vector<SplatCore> next;
        std::vector<int> next_origin;
        next.reserve(n + n / 4);
        next_origin.reserve(n + n / 4);

        for (std::size_t i = 0; i < n; ++i) {
            const SplatCore& s = cloud.splats[i];
            const bool hot = mean_grads[i] > cfg.grad_threshold;
            const double max_scale = s.scale().max_coeff();

            if (hot && max_scale > size_limit) {
                // Split: two children at 1/divisor scale, sampled inside the
                // parent footprint; the parent is dropped.
                for (int child = 0; child < 2; ++child) {
                    SplatCore c = s;
                    c.position = s.position + sample_inside_footprint(s, rng);
                    const double shrink = std::log(cfg.split_scale_divisor);
                    c.log_scale = {s.log_scale.x - shrink, s.log_scale.y - shrink,
                                   s.log_scale.z - shrink};
                    next.push_back(c);
                    next_origin.push_back(-1);
                }
                ++summary.split;
            } else if (hot) {
                next.push_back(s);
                next_origin.push_back(static_cast<int>(i));
                next.push_back(s);
                next_origin.push_back(-1);
                ++summary.cloned;
            } else {
                next.push_back(s);
                next_origin.push_back(static_cast<int>(i));
            }
        }
        cloud.splats = std::move(next);
        origin = std::move(next_origin);
    }

    // Opacity pruning runs with every densification pass.
    if (densify_due || shape_due) {
        std::vector<SplatCore> kept;
        std::vector<int> kept_origin;
        kept.reserve(cloud.size());
        kept_origin.reserve(cloud.size());
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const SplatCore& s = cloud.splats[i];
            bool drop = false;
            if (densify_due && s.opacity() < cfg.opacity_prune_threshold) {
                drop = true;
                ++summary.pruned;
            } else if (shape_due && s.opacity() < cfg.shape_prune_threshold &&
                       shape_modulation(s.epsilon, cfg.rho) < cfg.shape_prune_threshold) {
                drop = true;
                ++summary.shape_pruned;
            }
            if (!drop) {
                kept.push_back(s);
                kept_origin.push_back(origin[i]);
            }
        }
        cloud.splats = std::move(kept);
        origin = std::move(kept_origin);
    }

    if (opacity_reset_due) {
        const double ceiling_logit = logit(cfg.opacity_reset_ceiling);
        for (auto& s : cloud.splats)
            s.opacity_logit = std::min(s.opacity_logit, ceiling_logit);
        summary.opacity_reset = true;
    }

    if (shape_due) {
        for (auto& s : cloud.splats) s.epsilon = 2.0;
        summary.shape_reset = true;
    }

    if (summary.any_edit()) ++cloud.generation;
    summary.resulting_count = cloud.size();
    if (old_of_new) *old_of_new = std::move(origin);
    return summary;
}

} // namespace gesplat
