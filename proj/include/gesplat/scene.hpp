// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/splat.hpp"
#include "gesplat/vec_math.hpp"

#include <utility>
#include <vector>

namespace gesplat {

/// Seeds one splat per input point. Scales start isotropic at the mean
/// distance to the 3 nearest input points, shape at 2 (pure Gaussian),
/// opacity at 0.1, rotation at identity.
/// Throws ValidationError on an empty or non-finite input.
SplatCloud init_from_points(const std::vector<std::pair<Vec3, Vec3>>& points_rgb);

/// Scene extent: diagonal of the bounding box of the splat centers.
/// Used to scale position learning rates, densify size thresholds and
/// regularizer floors.
double scene_extent(const SplatCloud& cloud);

} // namespace gesplat
