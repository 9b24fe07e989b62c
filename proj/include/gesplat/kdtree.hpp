// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/splat.hpp"
#include "gesplat/vec_math.hpp"

#include <cstdint>
#include <vector>

namespace gesplat {

/// Exact k-nearest-neighbor index over splat centers (median-split kd-tree).
/// Results always match a linear scan: ascending distance, ties broken by
/// lower id. Rebuilds are cheap at desk scale, so freshness is tracked with
/// a simple iteration counter instead of incremental updates.
class KnnIndex {
public:
    static constexpr int kDefaultNeighbors = 16;
    static constexpr int kMaxStaleness = 500;

    KnnIndex() = default;

    void build(const std::vector<Vec3>& points);
    void build(const SplatCloud& cloud);

    /// Ids of the k nearest points, ascending by distance then id.
    /// exclude >= 0 drops that id from candidates (self-exclusion).
    /// k larger than the candidate count returns everything available.
    std::vector<int> query(const Vec3& x, int k, int exclude = -1) const;

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    std::uint64_t built_generation() const { return built_generation_; }
    void set_built_generation(std::uint64_t g) { built_generation_ = g; }

    int staleness() const { return staleness_; }
    void tick() { ++staleness_; }
    bool fresh() const { return staleness_ <= kMaxStaleness; }

private:
    struct Node {
        int left = -1;
        int right = -1;
        int point = -1; // leaf payload or split point
        int axis = 0;
        double split = 0.0;
    };

    int build_range(std::vector<int>& ids, int begin, int end);

    std::vector<Vec3> points_;
    std::vector<Node> nodes_;
    int root_ = -1;
    int staleness_ = 0;
    std::uint64_t built_generation_ = 0;
};

} // namespace gesplat
