// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/rng.hpp"
#include "gesplat/splat.hpp"

#include <vector>

namespace gesplat {

/// Clone/split/prune protocol constants. The gradient threshold, intervals
/// and size split follow common 3DGS practice; the shape reset/prune knobs
/// govern the GEF exponent lifecycle.
struct DensifyConfig {
    double grad_threshold = 2e-4;       // mean image-space gradient, NDC units
    int densify_interval = 100;
    int densify_start = 500;
    int opacity_reset_interval = 3000;
    double opacity_prune_threshold = 0.005;
    double opacity_reset_ceiling = 0.05;
    int shape_reset_interval = 1000;
    double shape_prune_threshold = 0.5; // on opacity AND phi(shape)
    double clone_size_fraction = 0.01;  // of scene extent; clone below, split above
    double split_scale_divisor = 1.6;
    double rho = 0.1;                   // shape-modulation strength for phi

    bool densify_enabled = true;
    bool shape_edits_enabled = true;    // resets/prunes only pre-regularization
};

struct EditSummary {
    int cloned = 0;
    int split = 0;
    int pruned = 0;
    int shape_pruned = 0;
    bool opacity_reset = false;
    bool shape_reset = false;
    std::size_t resulting_count = 0;

    bool any_edit() const {
        return cloned || split || pruned || shape_pruned || opacity_reset || shape_reset;
    }
    bool structural() const { return cloned || split || pruned || shape_pruned; }
};

/// Runs whichever lifecycle actions are due at `iteration`: densification
/// (clone small / split large high-gradient splats), opacity pruning,
/// opacity clamp-down resets, and shape resets/pruning. `mean_grads` holds
/// the per-splat mean image-space position-gradient magnitude accumulated
/// since the last call (empty = no densification pass due).
///
/// `old_of_new`, when given, receives for every splat in the edited cloud
/// the index it had before the call, or -1 for freshly created splats, so
/// optimizer state can be remapped.
EditSummary densify_and_prune(SplatCloud& cloud, const std::vector<double>& mean_grads,
                              const DensifyConfig& cfg, int iteration,
                              double scene_extent, Rng& rng,
                              std::vector<int>* old_of_new = nullptr);

} // namespace gesplat
