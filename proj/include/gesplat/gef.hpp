// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/splat.hpp"
#include "gesplat/vec_math.hpp"

namespace gesplat {

/// 1D generalized exponential: A * exp(-(|x - position| / scale)^shape).
struct Gef1dParams {
    double position = 0.0;  // peak location
    double scale = 1.0;     // > 0
    double shape = 2.0;     // > 0; 2 = Gaussian, 1 = Laplacian
    double amplitude = 1.0; // >= 0
};

double gef_1d(const Gef1dParams& p, double x);

/// Exponent of the 3D kernel: -1/2 * m^(shape/2) for Mahalanobis^2 = m.
/// shape == 2 takes the plain Gaussian branch so Gaussian-mode renders are
/// bit-identical to the generalized path with the shape frozen at 2.
inline double gef_power(double mahalanobis_sq, double shape) {
    if (shape == 2.0) return -0.5 * mahalanobis_sq;
    return -0.5 * std::pow(mahalanobis_sq, 0.5 * shape);
}

/// Unit-amplitude 3D kernel value exp(gef_power(m, shape)).
/// Throws DegenerateSplatError when the splat's scale anisotropy exceeds
/// cond_cap (the covariance would be numerically singular).
double splat_density_3d(const SplatCore& splat, const Vec3& x,
                        double cond_cap = 1e12);

/// Effective-variance modulation phi(eps) = 2 / (1 + exp(-rho (eps - 2))).
/// phi(2) == 1 exactly; strictly increasing in eps; range (0, 2).
double shape_modulation(double eps, double rho);

/// d phi / d eps.
double shape_modulation_grad(double eps, double rho);

/// Componentwise phi(eps) * scale; identity when eps == 2.
Vec3 effective_scale(const Vec3& scale, double eps, double rho);

} // namespace gesplat
