// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/vec_math.hpp"

#include <string>

namespace gesplat {

/// Pinhole camera: intrinsics in pixels, world-to-camera rigid transform,
/// camera looks along +z in its own frame. Pixel (i, j) is sampled at its
/// center (i + 0.5, j + 0.5).
struct Camera {
    int width = 0;
    int height = 0;
    double fx = 0.0, fy = 0.0;
    double cx = 0.0, cy = 0.0;
    RigidTransform world_to_cam;
    double near = 0.01;
    double far = 100.0;
    std::string image_path; // optional dataset binding

    void validate() const;

    Vec3 position() const { return world_to_cam.apply_inverse({0.0, 0.0, 0.0}); }
    Vec3 to_camera(const Vec3& world) const { return world_to_cam.apply(world); }

    Vec2 project(const Vec3& cam_point) const {
        return {fx * cam_point.x / cam_point.z + cx,
                fy * cam_point.y / cam_point.z + cy};
    }

    /// World-space point of (pixel coords, view depth z).
    Vec3 unproject(double px, double py, double z) const {
        const Vec3 cam{(px - cx) / fx * z, (py - cy) / fy * z, z};
        return world_to_cam.apply_inverse(cam);
    }

    /// Unit world-space direction of the ray through a pixel center.
    Vec3 ray_direction(int px, int py) const {
        const Vec3 p = unproject(px + 0.5, py + 0.5, 1.0);
        return (p - position()).normalized();
    }

    double tan_half_fov_x() const { return 0.5 * width / fx; }
    double tan_half_fov_y() const { return 0.5 * height / fy; }

    /// Camera for a resolution-schedule factor: dimensions rounded (floored
    /// at 8 px), intrinsics scaled by the realized ratio.
    Camera scaled_to(int new_w, int new_h) const {
        Camera out = *this;
        const double rx = double(new_w) / width;
        const double ry = double(new_h) / height;
        out.width = new_w;
        out.height = new_h;
        out.fx = fx * rx;
        out.fy = fy * ry;
        out.cx = cx * rx;
        out.cy = cy * ry;
        return out;
    }
};

} // namespace gesplat
