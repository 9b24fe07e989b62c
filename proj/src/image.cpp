// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/image.hpp"

#include "gesplat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gesplat {
namespace {

/// 1D area-average weights: for each output index, the source index range
/// [begin, begin + weights.size()) and fractional coverage weights that sum
/// to 1.
struct ResampleRow {
    int begin = 0;
    std::vector<double> weights;
};

std::vector<ResampleRow> area_weights(int src, int dst) {
    std::vector<ResampleRow> rows(dst);
    const double ratio = double(src) / double(dst);
    for (int j = 0; j < dst; ++j) {
        const double lo = j * ratio;
        const double hi = (j + 1) * ratio;
        const int first = static_cast<int>(std::floor(lo));
        const int last = std::min(src - 1, static_cast<int>(std::ceil(hi)) - 1);
        rows[j].begin = first;
        rows[j].weights.resize(last - first + 1);
        for (int i = first; i <= last; ++i) {
            const double overlap =
                std::min<double>(hi, i + 1.0) - std::max<double>(lo, double(i));
            rows[j].weights[i - first] = std::max(overlap, 0.0) / ratio;
        }
    }
    return rows;
}

} // namespace

ImageBuffer resample_area(const ImageBuffer& image, int out_w, int out_h) {
    if (out_w == image.width && out_h == image.height) return image;
    const auto wx = area_weights(image.width, out_w);
    const auto wy = area_weights(image.height, out_h);

    // Horizontal pass.
    std::vector<double> tmp(std::size_t(out_w) * image.height * 3, 0.0);
    for (int y = 0; y < image.height; ++y) {
        for (int j = 0; j < out_w; ++j) {
            double acc[3] = {0, 0, 0};
            const auto& r = wx[j];
            for (std::size_t t = 0; t < r.weights.size(); ++t) {
                const double w = r.weights[t];
                const int x = r.begin + static_cast<int>(t);
                for (int c = 0; c < 3; ++c) acc[c] += w * image.at(x, y, c);
            }
            for (int c = 0; c < 3; ++c)
                tmp[3 * (std::size_t(y) * out_w + j) + c] = acc[c];
        }
    }

    // Vertical pass.
    ImageBuffer out(out_w, out_h);
    for (int j = 0; j < out_h; ++j) {
        const auto& r = wy[j];
        for (int x = 0; x < out_w; ++x) {
            double acc[3] = {0, 0, 0};
            for (std::size_t t = 0; t < r.weights.size(); ++t) {
                const double w = r.weights[t];
                const int y = r.begin + static_cast<int>(t);
                for (int c = 0; c < 3; ++c)
                    acc[c] += w * tmp[3 * (std::size_t(y) * out_w + x) + c];
            }
            for (int c = 0; c < 3; ++c) out.at(x, j, c) = acc[c];
        }
    }
    return out;
}

ImageBuffer downsample_target(const ImageBuffer& image, double factor) {
    if (!(factor > 0.0 && factor <= 1.0))
        throw ValidationError("downsample factor must be in (0, 1]");
    if (factor == 1.0) return image;
    int out_w = static_cast<int>(std::lround(image.width * factor));
    int out_h = static_cast<int>(std::lround(image.height * factor));
    if (out_w < 8 || out_h < 8) {
        std::fprintf(stderr,
                     "warning: downsample target %dx%d clamped to the 8 px floor\n",
                     out_w, out_h);
        out_w = std::max(out_w, std::min(8, image.width));
        out_h = std::max(out_h, std::min(8, image.height));
    }
    return resample_area(image, out_w, out_h);
}

} // namespace gesplat
