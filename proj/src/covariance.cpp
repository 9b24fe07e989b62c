// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/covariance.hpp"

#include "gesplat/errors.hpp"

#include <cmath>

namespace gesplat {

Cov3 build_covariance(const Quat& q, const Vec3& s) {
    const Mat3 r = quat_to_rotation(q);
    // R * diag(s^2) * R^T, formed directly to stay symmetric.
    Cov3 cov;
    const Vec3 s2{s.x * s.x, s.y * s.y, s.z * s.z};
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            const double v = r.m[i][0] * s2.x * r.m[j][0] +
                             r.m[i][1] * s2.y * r.m[j][1] +
                             r.m[i][2] * s2.z * r.m[j][2];
            cov.m[i][j] = v;
            cov.m[j][i] = v;
        }
    }
    return cov;
}

Cov2 project_covariance(const Cov3& cov, const RigidTransform& world_to_cam,
                        const Vec2& focal, const Vec3& cam_point, double near_z,
                        double tan_limit_x, double tan_limit_y,
                        double diag_floor) {
    const double tz = cam_point.z;
    if (!(tz > near_z)) {
        throw ContractViolation("project_covariance: point at or behind the near "
                                "plane; cull before projecting");
    }
    // Linearization point clamped to the guard-band frustum.
    const double tx = clamp(cam_point.x / tz, -tan_limit_x, tan_limit_x) * tz;
    const double ty = clamp(cam_point.y / tz, -tan_limit_y, tan_limit_y) * tz;

    // J is the 2x3 Jacobian of (fx X/Z, fy Y/Z); M = J * R_w2c.
    const double inv_z = 1.0 / tz;
    const double inv_z2 = inv_z * inv_z;
    double jac[2][3] = {{focal.x * inv_z, 0.0, -focal.x * tx * inv_z2},
                        {0.0, focal.y * inv_z, -focal.y * ty * inv_z2}};

    const Mat3& rot = world_to_cam.rotation;
    double m2x3[2][3];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            m2x3[i][j] = jac[i][0] * rot.m[0][j] + jac[i][1] * rot.m[1][j] +
                         jac[i][2] * rot.m[2][j];

    // M * Sigma * M^T.
    double tmp[2][3];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            tmp[i][j] = m2x3[i][0] * cov.m[0][j] + m2x3[i][1] * cov.m[1][j] +
                        m2x3[i][2] * cov.m[2][j];

    Cov2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.m[i][j] = tmp[i][0] * m2x3[j][0] + tmp[i][1] * m2x3[j][1] +
                          tmp[i][2] * m2x3[j][2];

    // Exact symmetry, then the anti-aliasing floor.
    const double off = 0.5 * (out.m[0][1] + out.m[1][0]);
    out.m[0][1] = out.m[1][0] = off;
    out.m[0][0] += diag_floor;
    out.m[1][1] += diag_floor;
    return out;
}

} // namespace gesplat
