// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace gesplat {

std::vector<SamplePoint> sample_points(const SplatCloud& cloud,
                                       const DensityField& field, int batch,
                                       Rng& rng) {
    std::vector<SamplePoint> out;
    if (batch <= 0 || cloud.empty()) return out;
    out.reserve(batch);

    std::vector<double> cumulative(cloud.size());
    double total = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3 s = cloud.splats[i].scale();
        total += s.x * s.y * s.z;
        cumulative[i] = total;
    }

    for (int k = 0; k < batch; ++k) {
        std::size_t idx = 0;
        if (total > 0.0) {
            const double u = rng.uniform() * total;
            idx = std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                  cumulative.begin();
            idx = std::min(idx, cloud.size() - 1);
        } else {
            idx = rng.next_index(cloud.size());
        }
        const SplatCore& s = cloud.splats[idx];
        const Mat3 rot = quat_to_rotation(s.rotation);
        const Vec3 offset = rot * rng.normal3().cwise_mul(s.scale());

        SamplePoint p;
        p.position = s.position + offset;
        p.source_splat = static_cast<int>(idx);
        p.nn = field.neighbors(p.position);
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace gesplat
