// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/simd.hpp"

#include <cmath>

namespace gesplat::simd {
namespace {

void exp_batch_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void splat_alpha_row_scalar(double mean_x, double mean_y, double a, double b,
                            double c, double opacity, int px0, int py, int n,
                            double* out) {
    const double dy = (py + 0.5) - mean_y;
    const double cy2 = c * dy * dy;
    const double bdy = b * dy;
    for (int i = 0; i < n; ++i) {
        const double dx = (px0 + i + 0.5) - mean_x;
        double power = -0.5 * (a * dx * dx + cy2) - bdy * dx;
        if (power > 0.0) power = 0.0;
        out[i] = opacity * std::exp(power);
    }
}

} // namespace

namespace detail {

const KernelTable& scalar_table() {
    static const KernelTable table{exp_batch_scalar, splat_alpha_row_scalar};
    return table;
}

} // namespace detail
} // namespace gesplat::simd
