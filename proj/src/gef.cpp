// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/gef.hpp"

#include "gesplat/errors.hpp"

#include <cmath>
#include <string>

namespace gesplat {

double gef_1d(const Gef1dParams& p, double x) {
    const double t = std::abs(x - p.position) / p.scale;
    return p.amplitude * std::exp(-std::pow(t, p.shape));
}

double splat_density_3d(const SplatCore& splat, const Vec3& x, double cond_cap) {
    const Vec3 s = splat.scale();
    const double smin = s.min_coeff();
    const double smax = s.max_coeff();
    const double cond = (smax / smin) * (smax / smin);
    if (!(cond <= cond_cap)) {
        throw DegenerateSplatError("degenerate splat: covariance condition " +
                                   std::to_string(cond) + " exceeds cap");
    }
    const Mat3 r = quat_to_rotation(splat.rotation);
    const Vec3 local = r.transposed_times(x - splat.position);
    const double m = (local.x / s.x) * (local.x / s.x) +
                     (local.y / s.y) * (local.y / s.y) +
                     (local.z / s.z) * (local.z / s.z);
    return std::exp(gef_power(m, splat.epsilon));
}

double shape_modulation(double eps, double rho) {
    return 2.0 * sigmoid(rho * (eps - 2.0));
}

double shape_modulation_grad(double eps, double rho) {
    const double s = sigmoid(rho * (eps - 2.0));
    return 2.0 * rho * s * (1.0 - s);
}

Vec3 effective_scale(const Vec3& scale, double eps, double rho) {
    const double phi = shape_modulation(eps, rho);
    return scale * phi;
}

} // namespace gesplat
