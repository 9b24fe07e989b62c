// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/field.hpp"

#include <algorithm>
#include <cmath>

namespace gesplat {

void DensityField::build(const SplatCloud& cloud, double scene_extent,
                         FieldParams params) {
    params_ = params;
    extent_ = scene_extent > 0.0 ? scene_extent : 1.0;
    const double scale_floor = params_.scale_floor_rel * extent_;
    const double smin_floor = params_.smin_floor_rel * extent_;

    cache_.clear();
    cache_.reserve(cloud.size());
    for (const auto& s : cloud.splats) {
        SplatCache c;
        c.position = s.position;
        c.rot = quat_to_rotation(s.rotation);
        const Vec3 sc = s.scale();
        const Vec3 floored{std::max(sc.x, scale_floor), std::max(sc.y, scale_floor),
                           std::max(sc.z, scale_floor)};
        c.inv_s2 = {1.0 / (floored.x * floored.x), 1.0 / (floored.y * floored.y),
                    1.0 / (floored.z * floored.z)};
        c.alpha = s.opacity();
        c.eps = s.epsilon;
        c.axis = s.min_scale_axis();
        c.normal = c.rot.col(c.axis);
        c.s_min = std::max(sc[c.axis], smin_floor);
        cache_.push_back(c);
    }
    index_.build(cloud);
}

double DensityField::kernel(const SplatCache& c, const Vec3& x) const {
    const Vec3 local = c.rot.transposed_times(x - c.position);
    const double m = local.x * local.x * c.inv_s2.x + local.y * local.y * c.inv_s2.y +
                     local.z * local.z * c.inv_s2.z;
    const double power = c.eps == 2.0 ? -0.5 * m : -0.5 * std::pow(m, 0.5 * c.eps);
    return std::exp(power);
}

Vec3 DensityField::kernel_grad_factor(const SplatCache& c, const Vec3& x,
                                      double* kernel_out) const {
    const Vec3 local = c.rot.transposed_times(x - c.position);
    const double m = local.x * local.x * c.inv_s2.x + local.y * local.y * c.inv_s2.y +
                     local.z * local.z * c.inv_s2.z;
    const double power = c.eps == 2.0 ? -0.5 * m : -0.5 * std::pow(m, 0.5 * c.eps);
    const double k = std::exp(power);
    if (kernel_out) *kernel_out = k;
    // d power / d m, with the tiny floor guarding m^(eps/2 - 1) at the center.
    const double m_eff = std::max(m, 1e-18);
    const double dpower_dm =
        c.eps == 2.0 ? -0.5 : -0.25 * c.eps * std::pow(m_eff, 0.5 * c.eps - 1.0);
    // grad m = 2 R diag(inv_s2) R^T (x - p)
    const Vec3 scaled{local.x * c.inv_s2.x, local.y * c.inv_s2.y,
                      local.z * c.inv_s2.z};
    const Vec3 grad_m = (c.rot * scaled) * 2.0;
    return grad_m * (k * dpower_dm);
}

double DensityField::density(const Vec3& x, std::span<const int> ids) const {
    double sum = 0.0;
    for (int id : ids) sum += cache_[id].alpha * kernel(cache_[id], x);
    return sum;
}

double DensityField::density(const Vec3& x) const {
    const auto ids = neighbors(x);
    return density(x, ids);
}

Vec3 DensityField::density_grad(const Vec3& x, std::span<const int> ids) const {
    Vec3 g{0, 0, 0};
    for (int id : ids) g += kernel_grad_factor(cache_[id], x, nullptr) * cache_[id].alpha;
    return g;
}

double DensityField::sdf(const Vec3& x, std::span<const int> ids, int gstar) const {
    const SplatCache& g = cache_[gstar];
    const double d = clamp(density(x, ids), params_.density_clamp_lo,
                           params_.density_clamp_hi);
    const double side = (x - g.position).dot(g.normal) >= 0.0 ? 1.0 : -1.0;
    return side * g.s_min * std::sqrt(-2.0 * std::log(d));
}

double DensityField::ideal_sdf(const Vec3& x, int gstar) const {
    const SplatCache& g = cache_[gstar];
    const double dplane = (x - g.position).dot(g.normal);
    const double mag = std::abs(dplane);
    const double side = dplane >= 0.0 ? 1.0 : -1.0;
    if (g.eps == 2.0) return side * mag; // exact plane distance in the Gaussian case
    return side * std::pow(mag, 0.5 * g.eps);
}

Vec3 DensityField::sdf_grad(const Vec3& x, std::span<const int> ids, int gstar,
                            bool* ok) const {
    const SplatCache& g = cache_[gstar];
    const double d_raw = density(x, ids);
    if (ok) *ok = true;
    if (d_raw <= params_.density_clamp_lo || d_raw >= params_.density_clamp_hi) {
        // Clamped density: f is locally constant in d.
        if (ok) *ok = false;
        return {0, 0, 0};
    }
    const Vec3 grad_d = density_grad(x, ids);
    const double side = (x - g.position).dot(g.normal) >= 0.0 ? 1.0 : -1.0;
    // df/dd = -side s_min / (d sqrt(-2 ln d))
    const double root = std::sqrt(-2.0 * std::log(d_raw));
    const Vec3 grad = grad_d * (-side * g.s_min / (d_raw * root));
    if (grad.norm() < 1e-12 && ok) *ok = false;
    return grad;
}

} // namespace gesplat
