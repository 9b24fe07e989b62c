// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/vec_math.hpp"

#include <vector>

namespace gesplat {

/// H x W x 3 radiance in [0,1], row-major, with optional per-pixel depth
/// (world units) and accumulated alpha planes.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    std::vector<double> rgb;   // size W*H*3
    std::vector<double> depth; // size W*H when present, else empty
    std::vector<double> alpha; // size W*H when present, else empty

    ImageBuffer() = default;
    ImageBuffer(int w, int h) : width(w), height(h), rgb(std::size_t(w) * h * 3, 0.0) {}

    static ImageBuffer constant(int w, int h, const Vec3& color) {
        ImageBuffer img(w, h);
        for (int i = 0; i < w * h; ++i) {
            img.rgb[3 * i + 0] = color.x;
            img.rgb[3 * i + 1] = color.y;
            img.rgb[3 * i + 2] = color.z;
        }
        return img;
    }

    std::size_t pixel_count() const { return std::size_t(width) * height; }

    double& at(int x, int y, int c) { return rgb[3 * (std::size_t(y) * width + x) + c]; }
    double at(int x, int y, int c) const {
        return rgb[3 * (std::size_t(y) * width + x) + c];
    }
    Vec3 pixel(int x, int y) const {
        const std::size_t i = 3 * (std::size_t(y) * width + x);
        return {rgb[i], rgb[i + 1], rgb[i + 2]};
    }
    void set_pixel(int x, int y, const Vec3& v) {
        const std::size_t i = 3 * (std::size_t(y) * width + x);
        rgb[i] = v.x;
        rgb[i + 1] = v.y;
        rgb[i + 2] = v.z;
    }

    void ensure_depth() {
        if (depth.size() != pixel_count()) depth.assign(pixel_count(), 0.0);
    }
    void ensure_alpha() {
        if (alpha.size() != pixel_count()) alpha.assign(pixel_count(), 0.0);
    }

    bool same_shape(const ImageBuffer& o) const {
        return width == o.width && height == o.height;
    }
};

/// Exact area-average resample to round(full * factor), clamped to >= 8 px
/// per side (with a warning). factor = 1 returns the input unchanged.
ImageBuffer downsample_target(const ImageBuffer& image, double factor);

/// Area-average resample to an explicit size.
ImageBuffer resample_area(const ImageBuffer& image, int out_w, int out_h);

} // namespace gesplat
