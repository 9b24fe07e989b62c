// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/backward.hpp"
#include "gesplat/splat.hpp"

#include <vector>

namespace gesplat {

/// Per-parameter-group learning rates. Position is additionally scaled by
/// the scene extent at step time; SH coefficients run at color/20.
struct LearningRates {
    double position = 1.6e-4;
    double rotation = 1e-3;
    double scale = 5e-3;
    double opacity = 5e-2;
    double color = 2.5e-3;
    double sh = 2.5e-3 / 20.0;
    double epsilon = 1.5e-3;
};

/// Adaptive-moment updates over all splat parameters. Rotation updates are
/// renormalized, base colors clamped to [0,1], and the shape exponent is
/// stepped through its bounded sigmoid latent.
class Adam {
public:
    struct Params {
        double beta1 = 0.9;
        double beta2 = 0.999;
        double eps = 1e-15;
    };

    Adam() = default;
    explicit Adam(Params p) : params_(p) {}

    void reset(std::size_t splat_count);

    /// Remap state after structural edits: old_of_new[i] is the previous
    /// index of splat i, or -1 for new splats (zero moments).
    void remap(const std::vector<int>& old_of_new);

    /// Zero the moments of a single parameter group (used after opacity or
    /// shape resets so momentum does not undo the reset).
    void reset_opacity_moments();
    void reset_epsilon_moments();

    void step(SplatCloud& cloud, const std::vector<SplatGrads>& grads,
              const LearningRates& lr, double scene_extent,
              const EpsilonBounds& bounds, bool freeze_epsilon);

    std::size_t size() const { return m_.size(); }
    long long step_count() const { return step_; }

private:
    Params params_;
    // Moments reuse the gradient layout; epsilon moments live in latent units.
    std::vector<SplatGrads> m_;
    std::vector<SplatGrads> v_;
    long long step_ = 0;
};

} // namespace gesplat
