// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/kdtree.hpp"
#include "gesplat/splat.hpp"
#include "gesplat/vec_math.hpp"

#include <span>
#include <vector>

namespace gesplat {

struct FieldParams {
    int knn = 16;
    double scale_floor_rel = 1e-6; // of scene extent; conditions kernel inverses
    double smin_floor_rel = 1e-4;  // of scene extent; floors s_min in the SDF
    double density_clamp_lo = 1e-12;
    double density_clamp_hi = 1.0 - 1e-7;
};

/// Queryable view over a splat population: opacity-weighted generalized
/// exponential density, the derived SDF f = sign * s_min sqrt(-2 ln d), and
/// their spatial gradients, all restricted to the k nearest splats.
/// Snapshot semantics: build() caches per-splat quantities; the cloud must
/// not be edited while queries run.
class DensityField {
public:
    DensityField() = default;
    DensityField(const SplatCloud& cloud, double scene_extent,
                 FieldParams params = {}) {
        build(cloud, scene_extent, params);
    }

    void build(const SplatCloud& cloud, double scene_extent, FieldParams params = {});

    std::size_t size() const { return cache_.size(); }
    const FieldParams& params() const { return params_; }
    double extent() const { return extent_; }
    const KnnIndex& index() const { return index_; }

    /// k nearest splat ids to x (no self-exclusion semantics here).
    std::vector<int> neighbors(const Vec3& x) const {
        return index_.query(x, params_.knn);
    }

    /// Density over an explicit neighbor list (Eq. density sum).
    double density(const Vec3& x, std::span<const int> neighbor_ids) const;
    double density(const Vec3& x) const;

    /// Spatial gradient of the density.
    Vec3 density_grad(const Vec3& x, std::span<const int> neighbor_ids) const;

    /// Signed distance via the nearest splat g*: sign from g*'s minimal-axis
    /// half-space, magnitude s_min sqrt(-2 ln clamp(d)).
    double sdf(const Vec3& x, std::span<const int> neighbor_ids, int gstar) const;

    /// Ideal SDF of the flattened configuration:
    /// sign(<x-c, n>) |<x-c, n>|^(eps/2).
    double ideal_sdf(const Vec3& x, int gstar) const;

    /// Analytic SDF gradient; degenerate (flagged=false) when the density
    /// clamp zeroes it or its norm is below 1e-12.
    Vec3 sdf_grad(const Vec3& x, std::span<const int> neighbor_ids, int gstar,
                  bool* ok = nullptr) const;

    /// Minimal-axis unit normal of a splat (cached rotation column).
    Vec3 min_axis_normal(int splat_id) const { return cache_[splat_id].normal; }
    double s_min_floored(int splat_id) const { return cache_[splat_id].s_min; }
    int min_axis(int splat_id) const { return cache_[splat_id].axis; }

private:
    struct SplatCache {
        Vec3 position;
        Mat3 rot;
        Vec3 inv_s2;   // 1 / floored scale^2, per local axis
        double alpha;
        double eps;
        Vec3 normal;   // rotation column of the smallest scale axis
        double s_min;  // floored
        int axis;
    };

    double kernel(const SplatCache& c, const Vec3& x) const;
    Vec3 kernel_grad_factor(const SplatCache& c, const Vec3& x, double* kernel_out) const;

    std::vector<SplatCache> cache_;
    KnnIndex index_;
    FieldParams params_;
    double extent_ = 1.0;
};

} // namespace gesplat
