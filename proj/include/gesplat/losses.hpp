// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/splat.hpp"

#include <vector>

namespace gesplat {

/// One row of the per-100-iteration metrics log. rgb = 0.8 L1 + 0.2 (1-SSIM);
/// total adds the phase-active regularizers.
struct LossReport {
    double l1 = 0.0;
    double ssim = 0.0; // similarity value, not the loss term
    double rgb = 0.0;
    double sdf = 0.0;
    double normal = 0.0;
    double entropy = 0.0;
    double total = 0.0;
};

/// Mean binary entropy of splat opacities, pushing them toward 0 or 1.
/// Opacities are clamped to [1e-6, 1 - 1e-6] inside the logs. When
/// `d_opacity_logit` is given, the gradient (already chained through the
/// sigmoid) is accumulated into it scaled by `weight`.
double opacity_entropy_loss(const SplatCloud& cloud,
                            std::vector<double>* d_opacity_logit = nullptr,
                            double weight = 1.0);

} // namespace gesplat
