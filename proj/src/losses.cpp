// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/losses.hpp"

#include "gesplat/vec_math.hpp"

#include <cmath>

namespace gesplat {

double opacity_entropy_loss(const SplatCloud& cloud,
                            std::vector<double>* d_opacity_logit, double weight) {
    if (cloud.empty()) return 0.0;
    const double lo = 1e-6, hi = 1.0 - 1e-6;
    const double inv_n = 1.0 / double(cloud.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double alpha = cloud.splats[i].opacity();
        const double a = clamp(alpha, lo, hi);
        sum += -(a * std::log(a) + (1.0 - a) * std::log(1.0 - a));
        if (d_opacity_logit) {
            double de_da = 0.0;
            if (alpha > lo && alpha < hi) de_da = std::log((1.0 - a) / a);
            (*d_opacity_logit)[i] +=
                weight * inv_n * de_da * alpha * (1.0 - alpha);
        }
    }
    return sum * inv_n;
}

} // namespace gesplat
