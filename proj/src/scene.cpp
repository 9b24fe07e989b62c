// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/scene.hpp"

#include "gesplat/errors.hpp"
#include "gesplat/kdtree.hpp"

#include <algorithm>
#include <cmath>

namespace gesplat {

SplatCloud init_from_points(const std::vector<std::pair<Vec3, Vec3>>& points_rgb) {
    if (points_rgb.empty())
        throw ValidationError("init_from_points: empty point cloud is unusable");
    for (const auto& [p, c] : points_rgb) {
        if (!p.all_finite() || !c.all_finite())
            throw ValidationError("init_from_points: non-finite input point");
    }

    std::vector<Vec3> positions;
    positions.reserve(points_rgb.size());
    for (const auto& [p, c] : points_rgb) positions.push_back(p);

    KnnIndex index;
    index.build(positions);

    SplatCloud cloud;
    cloud.splats.reserve(points_rgb.size());
    for (std::size_t i = 0; i < points_rgb.size(); ++i) {
        SplatCore s;
        s.position = points_rgb[i].first;
        s.rotation = Quat::identity();
        s.epsilon = 2.0;
        s.set_opacity(0.1);
        s.color = {clamp(points_rgb[i].second.x, 0.0, 1.0),
                   clamp(points_rgb[i].second.y, 0.0, 1.0),
                   clamp(points_rgb[i].second.z, 0.0, 1.0)};

        const auto nn = index.query(s.position, 3, static_cast<int>(i));
        double mean_dist = 0.0;
        if (nn.empty()) {
            mean_dist = 0.1; // single-point cloud has no neighbor statistics
        } else {
            for (int id : nn) mean_dist += (positions[id] - s.position).norm();
            mean_dist /= static_cast<double>(nn.size());
            mean_dist = std::max(mean_dist, 1e-7);
        }
        s.set_scale({mean_dist, mean_dist, mean_dist});
        cloud.splats.push_back(s);
    }
    cloud.generation = 1;
    return cloud;
}

double scene_extent(const SplatCloud& cloud) {
    if (cloud.empty()) return 0.0;
    Vec3 lo = cloud.splats.front().position;
    Vec3 hi = lo;
    for (const auto& s : cloud.splats) {
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], s.position[a]);
            hi[a] = std::max(hi[a], s.position[a]);
        }
    }
    const double d = (hi - lo).norm();
    return d > 0.0 ? d : 1.0;
}

} // namespace gesplat
