// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/vec_math.hpp"

#include <limits>

namespace gesplat {

/// Symmetric PSD 3x3 world-space covariance.
using Cov3 = Mat3;
/// Symmetric PSD 2x2 image-space covariance (pixel^2).
using Cov2 = Mat2;

/// R * S * S^T * R^T for unit quaternion q and positive scales s.
/// Eigenvalues are exactly the squared scale entries.
Cov3 build_covariance(const Quat& q, const Vec3& s);

/// Isotropic floor added to the projected covariance diagonal (pixel^2).
/// Keeps sub-pixel splats invertible and acts as an anti-aliasing guard.
inline constexpr double kCov2DiagonalFloor = 0.3;

/// Projects a world covariance into the image plane of a camera via the
/// first-order (affine) Jacobian of the pinhole projection evaluated at
/// cam_point, i.e. the upper-left 2x2 block of J W Sigma W^T J^T, plus the
/// isotropic diagonal floor.
///
/// tan_limit_x/y clamp the linearization point to the guard-band frustum
/// (pass infinity to disable). cam_point must be in front of near_z; callers
/// are expected to cull first, and a violation throws ContractViolation.
Cov2 project_covariance(const Cov3& cov, const RigidTransform& world_to_cam,
                        const Vec2& focal, const Vec3& cam_point,
                        double near_z = 0.01,
                        double tan_limit_x = std::numeric_limits<double>::infinity(),
                        double tan_limit_y = std::numeric_limits<double>::infinity(),
                        double diag_floor = kCov2DiagonalFloor);

} // namespace gesplat
