// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/splat.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gesplat {

/// Splat clouds persist as binary little-endian PLY with 3DGS-style vertex
/// properties (x y z, rot_0..3, log scales, opacity logit, f_dc color,
/// f_rest degree-1 SH) plus one extra property "shape" carrying the GEF
/// exponent. Properties are written as float64 so save/load round-trips
/// bit-exactly; the reader also accepts float32 files and files without
/// "shape" (imported as Gaussians with a warning).

struct PlyLoadResult {
    SplatCloud cloud;
    std::vector<std::string> warnings;
};

void save_ply(const SplatCloud& cloud, std::ostream& out);
std::vector<std::uint8_t> save_ply_bytes(const SplatCloud& cloud);
void save_ply_file(const SplatCloud& cloud, const std::string& path);

/// Throws IoError naming the offending element on malformed input.
PlyLoadResult load_ply(std::istream& in);
PlyLoadResult load_ply_bytes(const std::vector<std::uint8_t>& bytes);
PlyLoadResult load_ply_file(const std::string& path);

} // namespace gesplat
