// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace gesplat {
namespace {

struct Candidate {
    double dist2;
    int id;
    // Max-heap ordering on (dist2, id): the heap top is the current worst.
    bool operator<(const Candidate& o) const {
        return dist2 != o.dist2 ? dist2 < o.dist2 : id < o.id;
    }
};

} // namespace

void KnnIndex::build(const std::vector<Vec3>& points) {
    points_ = points;
    nodes_.clear();
    nodes_.reserve(points.size());
    staleness_ = 0;
    root_ = -1;
    if (points_.empty()) return;
    std::vector<int> ids(points_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    root_ = build_range(ids, 0, static_cast<int>(ids.size()));
}

void KnnIndex::build(const SplatCloud& cloud) {
    std::vector<Vec3> pts;
    pts.reserve(cloud.size());
    for (const auto& s : cloud.splats) pts.push_back(s.position);
    build(pts);
    built_generation_ = cloud.generation;
}

int KnnIndex::build_range(std::vector<int>& ids, int begin, int end) {
    if (begin >= end) return -1;
    const int node_index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (end - begin == 1) {
        nodes_[node_index].point = ids[begin];
        return node_index;
    }

    // Split along the axis with the widest spread.
    Vec3 lo = points_[ids[begin]];
    Vec3 hi = lo;
    for (int i = begin + 1; i < end; ++i) {
        const Vec3& p = points_[ids[i]];
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;

    const int mid = begin + (end - begin) / 2;
    std::nth_element(ids.begin() + begin, ids.begin() + mid, ids.begin() + end,
                     [&](int a, int b) {
                         const double pa = points_[a][axis], pb = points_[b][axis];
                         return pa != pb ? pa < pb : a < b;
                     });

    Node& node = nodes_[node_index];
    node.point = ids[mid];
    node.axis = axis;
    node.split = points_[ids[mid]][axis];
    const int left = build_range(ids, begin, mid);
    const int right = build_range(ids, mid + 1, end);
    nodes_[node_index].left = left;
    nodes_[node_index].right = right;
    return node_index;
}

std::vector<int> KnnIndex::query(const Vec3& x, int k, int exclude) const {
    std::vector<int> result;
    if (k <= 0 || points_.empty()) return result;

    std::priority_queue<Candidate> heap;
    const auto consider = [&](int id) {
        if (id == exclude) return;
        const double d2 = (points_[id] - x).squared_norm();
        const Candidate c{d2, id};
        if (static_cast<int>(heap.size()) < k) {
            heap.push(c);
        } else if (c < heap.top()) {
            heap.pop();
            heap.push(c);
        }
    };

    // Depth-first with plane-distance pruning. Pruning is strict (>) so
    // equal-distance candidates with lower ids are still reachable.
    const std::function<void(int)> visit = [&](int ni) {
        if (ni < 0) return;
        const Node& node = nodes_[ni];
        consider(node.point);
        if (node.left < 0 && node.right < 0) return;
        const double delta = x[node.axis] - node.split;
        const int first = delta < 0.0 ? node.left : node.right;
        const int second = delta < 0.0 ? node.right : node.left;
        visit(first);
        if (static_cast<int>(heap.size()) < k || delta * delta <= heap.top().dist2)
            visit(second);
    };
    visit(root_);

    std::vector<Candidate> sorted;
    sorted.reserve(heap.size());
    while (!heap.empty()) {
        sorted.push_back(heap.top());
        heap.pop();
    }
    std::sort(sorted.begin(), sorted.end());
    result.reserve(sorted.size());
    for (const auto& c : sorted) result.push_back(c.id);
    return result;
}

} // namespace gesplat
