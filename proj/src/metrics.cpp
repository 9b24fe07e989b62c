// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/metrics.hpp"

#include "gesplat/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gesplat {
namespace {

constexpr int kWindowRadius = 5; // 11x11
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

const std::vector<double>& gaussian_taps() {
    static const std::vector<double> taps = [] {
        std::vector<double> t(2 * kWindowRadius + 1);
        double sum = 0.0;
        for (int i = -kWindowRadius; i <= kWindowRadius; ++i) {
            const double v = std::exp(-(i * i) / (2.0 * 1.5 * 1.5));
            t[i + kWindowRadius] = v;
            sum += v;
        }
        for (double& v : t) v /= sum;
        return t;
    }();
    return taps;
}

/// Separable zero-padded Gaussian filter over one channel plane.
void filter_plane(const double* src, double* dst, int w, int h) {
    const auto& taps = gaussian_taps();
    std::vector<double> tmp(std::size_t(w) * h, 0.0);
    for (int y = 0; y < h; ++y) {
        const double* row = src + std::size_t(y) * w;
        double* out = tmp.data() + std::size_t(y) * w;
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            const int lo = std::max(-kWindowRadius, -x);
            const int hi = std::min(kWindowRadius, w - 1 - x);
            for (int k = lo; k <= hi; ++k) acc += taps[k + kWindowRadius] * row[x + k];
            out[x] = acc;
        }
    }
    for (int y = 0; y < h; ++y) {
        const int lo = std::max(-kWindowRadius, -y);
        const int hi = std::min(kWindowRadius, h - 1 - y);
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = lo; k <= hi; ++k)
                acc += taps[k + kWindowRadius] * tmp[std::size_t(y + k) * w + x];
            dst[std::size_t(y) * w + x] = acc;
        }
    }
}

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b) {
    if (!a.same_shape(b))
        throw ValidationError("image metric: dimension mismatch (" +
                              std::to_string(a.width) + "x" + std::to_string(a.height) +
                              " vs " + std::to_string(b.width) + "x" +
                              std::to_string(b.height) + ")");
}

struct SsimPlanes {
    std::vector<double> mu_x, mu_y, r_xx, r_yy, r_xy;
};

double ssim_impl(const ImageBuffer& a, const ImageBuffer& b,
                 std::vector<double>* grad_a) {
    require_same_shape(a, b);
    const int w = a.width, h = a.height;
    const std::size_t n = std::size_t(w) * h;

    if (grad_a) grad_a->assign(n * 3, 0.0);

    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    SsimPlanes f;
    f.mu_x.resize(n);
    f.mu_y.resize(n);
    f.r_xx.resize(n);
    f.r_yy.resize(n);
    f.r_xy.resize(n);
    std::vector<double> d_mu(n), d_rxx(n), d_rxy(n), conv(n);

    double total = 0.0;
    const double inv_count = 1.0 / double(n * 3);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = a.rgb[3 * i + c];
            y[i] = b.rgb[3 * i + c];
            xx[i] = x[i] * x[i];
            yy[i] = y[i] * y[i];
            xy[i] = x[i] * y[i];
        }
        filter_plane(x.data(), f.mu_x.data(), w, h);
        filter_plane(y.data(), f.mu_y.data(), w, h);
        filter_plane(xx.data(), f.r_xx.data(), w, h);
        filter_plane(yy.data(), f.r_yy.data(), w, h);
        filter_plane(xy.data(), f.r_xy.data(), w, h);

        for (std::size_t i = 0; i < n; ++i) {
            const double mx = f.mu_x[i], my = f.mu_y[i];
            const double a1 = 2.0 * mx * my + kC1;
            const double b1 = mx * mx + my * my + kC1;
            const double a2 = 2.0 * (f.r_xy[i] - mx * my) + kC2;
            const double b2 = (f.r_xx[i] - mx * mx) + (f.r_yy[i] - my * my) + kC2;
            const double s = (a1 * a2) / (b1 * b2);
            total += s;
            if (grad_a) {
                d_mu[i] = 2.0 * my * (a2 - a1) / (b1 * b2) -
                          2.0 * mx * s * (1.0 / b1 - 1.0 / b2);
                d_rxx[i] = -s / b2;
                d_rxy[i] = 2.0 * a1 / (b1 * b2);
            }
        }

        if (grad_a) {
            // Adjoint of the zero-padded symmetric filter is the same filter.
            filter_plane(d_mu.data(), conv.data(), w, h);
            for (std::size_t i = 0; i < n; ++i)
                (*grad_a)[3 * i + c] += inv_count * conv[i];
            filter_plane(d_rxx.data(), conv.data(), w, h);
            for (std::size_t i = 0; i < n; ++i)
                (*grad_a)[3 * i + c] += inv_count * 2.0 * x[i] * conv[i];
            filter_plane(d_rxy.data(), conv.data(), w, h);
            for (std::size_t i = 0; i < n; ++i)
                (*grad_a)[3 * i + c] += inv_count * y[i] * conv[i];
        }
    }
    return total * inv_count;
}

} // namespace

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
    require_same_shape(a, b);
    double se = 0.0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) {
        const double d = a.rgb[i] - b.rgb[i];
        se += d * d;
    }
    const double mse = se / double(a.rgb.size());
    if (mse <= 0.0) return 100.0;
    return std::min(100.0, 10.0 * std::log10(1.0 / mse));
}

double ssim(const ImageBuffer& a, const ImageBuffer& b) {
    return ssim_impl(a, b, nullptr);
}

double ssim_with_grad(const ImageBuffer& a, const ImageBuffer& b,
                      std::vector<double>& grad_a) {
    return ssim_impl(a, b, &grad_a);
}

double l1_with_grad(const ImageBuffer& a, const ImageBuffer& b,
                    std::vector<double>& grad_a) {
    require_same_shape(a, b);
    grad_a.assign(a.rgb.size(), 0.0);
    double sum = 0.0;
    const double inv = 1.0 / double(a.rgb.size());
    for (std::size_t i = 0; i < a.rgb.size(); ++i) {
        const double d = a.rgb[i] - b.rgb[i];
        sum += std::abs(d);
        grad_a[i] = (d > 0.0 ? inv : (d < 0.0 ? -inv : 0.0));
    }
    return sum * inv;
}

RgbLoss rgb_loss(const ImageBuffer& rendered, const ImageBuffer& target, double lambda,
                 bool with_grad) {
    RgbLoss out;
    std::vector<double> l1_grad;
    std::vector<double> ssim_grad;
    out.l1 = l1_with_grad(rendered, target, l1_grad);
    out.ssim = with_grad ? ssim_with_grad(rendered, target, ssim_grad)
                         : ssim(rendered, target);
    out.value = (1.0 - lambda) * out.l1 + lambda * (1.0 - out.ssim);
    if (with_grad) {
        out.grad.resize(l1_grad.size());
        for (std::size_t i = 0; i < l1_grad.size(); ++i)
            out.grad[i] = (1.0 - lambda) * l1_grad[i] - lambda * ssim_grad[i];
    }
    return out;
}

} // namespace gesplat
