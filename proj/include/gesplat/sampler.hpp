// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/field.hpp"
#include "gesplat/rng.hpp"
#include "gesplat/splat.hpp"

#include <vector>

namespace gesplat {

/// One regularizer evaluation point with its cached neighborhood.
struct SamplePoint {
    Vec3 position;
    int source_splat = -1;    // the splat the offset was drawn from
    std::vector<int> nn;      // k nearest splats, ascending; nn[0] is g*
    int gstar() const { return nn.empty() ? -1 : nn[0]; }
};

/// Draws `batch` points: a splat is picked with probability proportional to
/// its volume proxy s1*s2*s3, then an offset from its (Gaussian) ellipsoid
/// distribution. Neighbor lists come from the field's index. Positions are
/// treated as constants by the loss gradients (detached sampling).
std::vector<SamplePoint> sample_points(const SplatCloud& cloud,
                                       const DensityField& field, int batch,
                                       Rng& rng);

} // namespace gesplat
