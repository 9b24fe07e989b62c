// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/image.hpp"

#include <string>
#include <vector>

namespace gesplat {

/// 8-bit RGB PNG. Values are clamped to [0,1] and quantized.
void write_png(const ImageBuffer& image, const std::string& path);
ImageBuffer read_png(const std::string& path);

/// Float PFM, color ("PF") for radiance. Row order follows the PFM
/// bottom-up convention with a negative scale (little-endian).
void write_pfm(const ImageBuffer& image, const std::string& path);
ImageBuffer read_pfm(const std::string& path);

/// Grayscale PFM ("Pf") for depth maps and other scalar planes.
void write_pfm_gray(const std::vector<double>& plane, int width, int height,
                    const std::string& path);
std::vector<double> read_pfm_gray(const std::string& path, int* width, int* height);

/// Reads either PNG or PFM based on the file extension.
ImageBuffer read_image(const std::string& path);

} // namespace gesplat
