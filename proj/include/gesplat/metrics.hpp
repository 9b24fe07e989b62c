// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/image.hpp"

#include <vector>

namespace gesplat {

/// 10 log10(1 / MSE) over [0,1] floats, all channels pooled; capped at
/// 100 dB for identical inputs. Symmetric in its arguments.
double psnr(const ImageBuffer& a, const ImageBuffer& b);

/// Mean SSIM over pixels and channels. 11x11 Gaussian window (sigma 1.5),
/// C1 = 0.01^2, C2 = 0.03^2, zero-padded filtering (3DGS convention).
double ssim(const ImageBuffer& a, const ImageBuffer& b);

/// SSIM plus d(mean SSIM)/d(a) laid out like a.rgb.
double ssim_with_grad(const ImageBuffer& a, const ImageBuffer& b,
                      std::vector<double>& grad_a);

/// Mean absolute error plus d/d(a).
double l1_with_grad(const ImageBuffer& a, const ImageBuffer& b,
                    std::vector<double>& grad_a);

struct RgbLoss {
    double value = 0.0; // (1-lambda) L1 + lambda (1 - SSIM)
    double l1 = 0.0;
    double ssim = 0.0;
    std::vector<double> grad; // d value / d rendered
};

/// Photometric loss of a rendered image against its target.
RgbLoss rgb_loss(const ImageBuffer& rendered, const ImageBuffer& target,
                 double lambda = 0.2, bool with_grad = true);

} // namespace gesplat
