// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/backward.hpp"
#include "gesplat/field.hpp"
#include "gesplat/sampler.hpp"
#include "gesplat/splat.hpp"

#include <vector>

namespace gesplat {

struct GsrLosses {
    double sdf = 0.0;     // mean |ideal - actual| SDF over the batch
    double normal = 0.0;  // mean || grad f / |grad f| - n ||^2 (non-degenerate)
    int degenerate = 0;   // samples excluded from the normal term
};

/// Surface-regularization losses with gradients. Per sample the SDF and its
/// spatial gradient are rebuilt on an autodiff tape over the neighbor
/// splats' parameters, so gradients (including through the normalized SDF
/// gradient) are exact. Loss values are reported unweighted; gradients are
/// accumulated into `grads` scaled by w_sdf / w_normal.
///
/// The per-sample normal term uses whichever orientation of n_g* minimizes
/// it, making the loss invariant to the sign of the minimal axis.
GsrLosses gsr_losses(const SplatCloud& cloud, const DensityField& field,
                     const std::vector<SamplePoint>& samples, double w_sdf,
                     double w_normal, std::vector<SplatGrads>* grads = nullptr);

} // namespace gesplat
