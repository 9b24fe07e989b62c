// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/metrics.hpp"

#include "gesplat/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace gesplat;

namespace {

// Direct per-window SSIM, independently coded: explicit nested loops over
// the 11x11 window with zero padding, no separable filtering or shared code
// with the library path.
double ssim_reference(const ImageBuffer& a, const ImageBuffer& b) {
    const int radius = 5;
    std::vector<double> taps(11);
    double tap_sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        taps[i + radius] = std::exp(-(i * i) / (2.0 * 1.5 * 1.5));
        tap_sum += taps[i + radius];
    }
    for (auto& t : taps) t /= tap_sum;

    const double c1 = 1e-4, c2 = 9e-4;
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < a.height; ++y) {
            for (int x = 0; x < a.width; ++x) {
                double mx = 0, my = 0, rxx = 0, ryy = 0, rxy = 0;
                for (int dy = -radius; dy <= radius; ++dy) {
                    for (int dx = -radius; dx <= radius; ++dx) {
                        const int px = x + dx, py = y + dy;
                        double va = 0.0, vb = 0.0;
                        if (px >= 0 && px < a.width && py >= 0 && py < a.height) {
                            va = a.at(px, py, c);
                            vb = b.at(px, py, c);
                        }
                        const double w = taps[dx + radius] * taps[dy + radius];
                        mx += w * va;
                        my += w * vb;
                        rxx += w * va * va;
                        ryy += w * vb * vb;
                        rxy += w * va * vb;
                    }
                }
                const double sx = rxx - mx * mx;
                const double sy = ryy - my * my;
                const double sxy = rxy - mx * my;
                total += ((2 * mx * my + c1) * (2 * sxy + c2)) /
                         ((mx * mx + my * my + c1) * (sx + sy + c2));
            }
        }
    }
    return total / double(a.width * a.height * 3);
}

ImageBuffer random_image(Rng& rng, int w, int h) {
    ImageBuffer img(w, h);
    for (auto& v : img.rgb) v = rng.uniform();
    return img;
}

} // namespace

TEST_CASE("ssim of an image with itself is 1") {
    Rng rng(31);
    const ImageBuffer img = random_image(rng, 16, 12);
    CHECK(ssim(img, img) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ssim matches the direct window oracle") {
    Rng rng(33);
    for (int trial = 0; trial < 4; ++trial) {
        const int w = 8 + int(rng.uniform(0.0, 20.0));
        const int h = 8 + int(rng.uniform(0.0, 16.0));
        const ImageBuffer a = random_image(rng, w, h);
        const ImageBuffer b = random_image(rng, w, h);
        CHECK(ssim(a, b) == doctest::Approx(ssim_reference(a, b)).epsilon(1e-10));
    }

    // Constant images (the all-ones vs all-zeros case ends up C-stabilized).
    const ImageBuffer ones = ImageBuffer::constant(16, 16, {1, 1, 1});
    const ImageBuffer zeros = ImageBuffer::constant(16, 16, {0, 0, 0});
    CHECK(ssim(ones, zeros) ==
          doctest::Approx(ssim_reference(ones, zeros)).epsilon(1e-10));
}

TEST_CASE("ssim is symmetric") {
    Rng rng(35);
    const ImageBuffer a = random_image(rng, 14, 10);
    const ImageBuffer b = random_image(rng, 14, 10);
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
}

TEST_CASE("rgb_loss fixed points") {
    Rng rng(37);
    const ImageBuffer img = random_image(rng, 12, 12);
    const RgbLoss same = rgb_loss(img, img);
    CHECK(same.value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(same.l1 == 0.0);
    CHECK(same.ssim == doctest::Approx(1.0).epsilon(1e-12));

    const ImageBuffer ones = ImageBuffer::constant(16, 16, {1, 1, 1});
    const ImageBuffer zeros = ImageBuffer::constant(16, 16, {0, 0, 0});
    const RgbLoss far = rgb_loss(ones, zeros);
    CHECK(far.l1 == doctest::Approx(1.0));
    const double want = 0.8 * 1.0 + 0.2 * (1.0 - ssim_reference(ones, zeros));
    CHECK(far.value == doctest::Approx(want).epsilon(1e-10));
    CHECK(far.value >= 0.0);
}

TEST_CASE("ssim gradient matches central differences") {
    Rng rng(41);
    ImageBuffer a = random_image(rng, 10, 9);
    const ImageBuffer b = random_image(rng, 10, 9);
    std::vector<double> grad;
    ssim_with_grad(a, b, grad);

    const double h = 1e-5;
    for (int probe = 0; probe < 60; ++probe) {
        const std::size_t i = rng.next_index(a.rgb.size());
        const double saved = a.rgb[i];
        a.rgb[i] = saved + h;
        const double up = ssim(a, b);
        a.rgb[i] = saved - h;
        const double dn = ssim(a, b);
        a.rgb[i] = saved;
        const double fd = (up - dn) / (2 * h);
        CHECK(grad[i] == doctest::Approx(fd).epsilon(2e-4));
    }
}

TEST_CASE("rgb_loss gradient matches central differences") {
    Rng rng(43);
    ImageBuffer a = random_image(rng, 9, 8);
    const ImageBuffer b = random_image(rng, 9, 8);
    const RgbLoss base = rgb_loss(a, b);

    const double h = 1e-4;
    int checked = 0;
    for (int probe = 0; probe < 120 && checked < 100; ++probe) {
        const std::size_t i = rng.next_index(a.rgb.size());
        // Stay away from the L1 kink.
        if (std::abs(a.rgb[i] - b.rgb[i]) < 3 * h) continue;
        ++checked;
        const double saved = a.rgb[i];
        a.rgb[i] = saved + h;
        const double up = rgb_loss(a, b, 0.2, false).value;
        a.rgb[i] = saved - h;
        const double dn = rgb_loss(a, b, 0.2, false).value;
        a.rgb[i] = saved;
        const double fd = (up - dn) / (2 * h);
        const double tol = std::max(1e-6, std::abs(fd) * 1e-3);
        CHECK(std::abs(base.grad[i] - fd) <= tol);
    }
    CHECK(checked >= 100);
}
