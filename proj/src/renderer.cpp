// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/renderer.hpp"

#include "gesplat/covariance.hpp"
#include "gesplat/errors.hpp"
#include "gesplat/gef.hpp"
#include "gesplat/parallel.hpp"
#include "gesplat/simd.hpp"

#include <algorithm>
#include <cmath>

namespace gesplat {

void Camera::validate() const {
    if (width < 1 || height < 1)
        throw ValidationError("camera: resolution must be at least 1x1");
    if (!(fx > 0.0) || !(fy > 0.0))
        throw ValidationError("camera: focal lengths must be positive");
    if (!(near < far)) throw ValidationError("camera: near must be below far");
    const Mat3& r = world_to_cam.rotation;
    const Mat3 rrt = r * r.transposed();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (std::abs(rrt.m[i][j] - (i == j ? 1.0 : 0.0)) > 1e-6)
                throw ValidationError("camera: rotation is not orthonormal");
}

namespace {

constexpr double kShC1 = 0.4886025119029199;

Vec3 view_color(const SplatCore& s, const Vec3& cam_pos, bool sh_enabled) {
    Vec3 c = s.color;
    if (sh_enabled) {
        const Vec3 dir = (s.position - cam_pos).normalized();
        const double y0 = -kShC1 * dir.y;
        const double y1 = kShC1 * dir.z;
        const double y2 = -kShC1 * dir.x;
        c.x += s.sh1[0] * y0 + s.sh1[1] * y1 + s.sh1[2] * y2;
        c.y += s.sh1[3] * y0 + s.sh1[4] * y1 + s.sh1[5] * y2;
        c.z += s.sh1[6] * y0 + s.sh1[7] * y1 + s.sh1[8] * y2;
    }
    return {clamp(c.x, 0.0, 1.0), clamp(c.y, 0.0, 1.0), clamp(c.z, 0.0, 1.0)};
}

} // namespace

std::vector<ProjectedSplat> project_splats(const SplatCloud& cloud,
                                           const Camera& camera,
                                           const RenderParams& params) {
    camera.validate();
    const double lim_x = params.guard_band * camera.tan_half_fov_x();
    const double lim_y = params.guard_band * camera.tan_half_fov_y();
    const Vec3 cam_pos = camera.position();

    std::vector<ProjectedSplat> out;
    out.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const SplatCore& s = cloud.splats[i];
        const Vec3 t = camera.to_camera(s.position);
        if (!(t.z > camera.near)) continue;
        if (std::abs(t.x / t.z) > lim_x || std::abs(t.y / t.z) > lim_y) continue;

        const Vec3 scale = s.scale();
        const Vec3 eff = params.gaussian_only
                             ? scale
                             : effective_scale(scale, s.epsilon, params.rho);
        const Cov3 cov3 = build_covariance(s.rotation, eff);
        const Cov2 cov2 = project_covariance(cov3, camera.world_to_cam,
                                             {camera.fx, camera.fy}, t, camera.near,
                                             lim_x, lim_y);
        const double det = cov2.det();
        if (!(det > 0.0)) continue; // floored covariance should never trip this

        ProjectedSplat p;
        p.mean = camera.project(t);
        p.cov2[0] = cov2.m[0][0];
        p.cov2[1] = cov2.m[0][1];
        p.cov2[2] = cov2.m[1][1];
        const double inv_det = 1.0 / det;
        p.conic[0] = cov2.m[1][1] * inv_det;
        p.conic[1] = -cov2.m[0][1] * inv_det;
        p.conic[2] = cov2.m[0][0] * inv_det;
        p.depth = t.z;
        p.color = view_color(s, cam_pos, params.sh_enabled);
        p.alpha = s.opacity();
        p.radius = std::ceil(3.0 * std::sqrt(cov2.max_eigenvalue_sym()));
        p.id = static_cast<int>(i);
        out.push_back(p);
    }

    std::sort(out.begin(), out.end(), [](const ProjectedSplat& a, const ProjectedSplat& b) {
        return a.depth != b.depth ? a.depth < b.depth : a.id < b.id;
    });
    return out;
}

namespace {

struct TileGrid {
    int tiles_x = 0, tiles_y = 0;
    std::vector<std::vector<int>> bins; // projected-splat indices, depth order

    TileGrid(const std::vector<ProjectedSplat>& projected, int width, int height) {
        tiles_x = (width + kTileSize - 1) / kTileSize;
        tiles_y = (height + kTileSize - 1) / kTileSize;
        bins.resize(std::size_t(tiles_x) * tiles_y);
        for (std::size_t pi = 0; pi < projected.size(); ++pi) {
            const ProjectedSplat& p = projected[pi];
            const int x0 = std::max(0, int(std::floor((p.mean.x - p.radius) / kTileSize)));
            const int x1 = std::min(tiles_x - 1,
                                    int(std::floor((p.mean.x + p.radius) / kTileSize)));
            const int y0 = std::max(0, int(std::floor((p.mean.y - p.radius) / kTileSize)));
            const int y1 = std::min(tiles_y - 1,
                                    int(std::floor((p.mean.y + p.radius) / kTileSize)));
            for (int ty = y0; ty <= y1; ++ty)
                for (int tx = x0; tx <= x1; ++tx)
                    bins[std::size_t(ty) * tiles_x + tx].push_back(int(pi));
        }
    }
};

} // namespace

void rasterize(const std::vector<ProjectedSplat>& projected, const Camera& camera,
               const RenderParams& params, ImageBuffer& out,
               std::vector<int>* dominant) {
    const int w = camera.width, h = camera.height;
    out = ImageBuffer(w, h);
    out.ensure_depth();
    out.ensure_alpha();
    if (dominant) dominant->assign(std::size_t(w) * h, -1);

    const TileGrid grid(projected, w, h);
    const std::size_t tile_count = grid.bins.size();
    const auto& kern = simd::kernels();

    parallel_for(tile_count, [&](std::size_t tile) {
        const int tx = int(tile) % grid.tiles_x;
        const int ty = int(tile) / grid.tiles_x;
        const int px0 = tx * kTileSize;
        const int py0 = ty * kTileSize;
        const int tw = std::min(kTileSize, w - px0);
        const int th = std::min(kTileSize, h - py0);

        double transmittance[kTileSize * kTileSize];
        double accum[kTileSize * kTileSize * 3];
        double depth_sum[kTileSize * kTileSize];
        double weight_sum[kTileSize * kTileSize];
        double best_w[kTileSize * kTileSize];
        int best_id[kTileSize * kTileSize];
        for (int i = 0; i < tw * th; ++i) {
            transmittance[i] = 1.0;
            depth_sum[i] = weight_sum[i] = best_w[i] = 0.0;
            best_id[i] = -1;
        }
        for (int i = 0; i < tw * th * 3; ++i) accum[i] = 0.0;

        double alphas[kTileSize];
        for (const int pi : grid.bins[tile]) {
            const ProjectedSplat& p = projected[pi];
            const int bx0 = std::max(px0, int(std::floor(p.mean.x - p.radius)));
            const int bx1 = std::min(px0 + tw - 1, int(std::floor(p.mean.x + p.radius)));
            const int by0 = std::max(py0, int(std::floor(p.mean.y - p.radius)));
            const int by1 = std::min(py0 + th - 1, int(std::floor(p.mean.y + p.radius)));
            if (bx0 > bx1 || by0 > by1) continue;

            for (int y = by0; y <= by1; ++y) {
                const int n = bx1 - bx0 + 1;
                kern.splat_alpha_row(p.mean.x, p.mean.y, p.conic[0], p.conic[1],
                                     p.conic[2], p.alpha, bx0, y, n, alphas);
                const int row = (y - py0) * tw;
                for (int i = 0; i < n; ++i) {
                    const int px = bx0 + i - px0;
                    const int cell = row + px;
                    const double t = transmittance[cell];
                    if (t < params.transmittance_floor) continue;
                    const double a = alphas[i];
                    if (a < params.alpha_skip) continue;
                    const double weight = a * t;
                    accum[3 * cell + 0] += weight * p.color.x;
                    accum[3 * cell + 1] += weight * p.color.y;
                    accum[3 * cell + 2] += weight * p.color.z;
                    depth_sum[cell] += weight * p.depth;
                    weight_sum[cell] += weight;
                    if (weight > best_w[cell]) {
                        best_w[cell] = weight;
                        best_id[cell] = p.id;
                    }
                    transmittance[cell] = t * (1.0 - a);
                }
            }
        }

        for (int y = 0; y < th; ++y) {
            for (int x = 0; x < tw; ++x) {
                const int cell = y * tw + x;
                const std::size_t pix = std::size_t(py0 + y) * w + (px0 + x);
                const double t = transmittance[cell];
                out.rgb[3 * pix + 0] = accum[3 * cell + 0] + t * params.background.x;
                out.rgb[3 * pix + 1] = accum[3 * cell + 1] + t * params.background.y;
                out.rgb[3 * pix + 2] = accum[3 * cell + 2] + t * params.background.z;
                out.alpha[pix] = 1.0 - t;
                out.depth[pix] = weight_sum[cell] > 0.0
                                     ? depth_sum[cell] / weight_sum[cell]
                                     : camera.far;
                if (dominant) (*dominant)[pix] = best_id[cell];
            }
        }
    });
}

ImageBuffer render(const SplatCloud& cloud, const Camera& camera,
                   const RenderParams& params) {
    ImageBuffer out;
    rasterize(project_splats(cloud, camera, params), camera, params, out);
    return out;
}

DepthRender render_depth(const std::vector<ProjectedSplat>& projected,
                         const Camera& camera, const RenderParams& params) {
    ImageBuffer img;
    DepthRender dr;
    rasterize(projected, camera, params, img, &dr.dominant);
    dr.width = camera.width;
    dr.height = camera.height;
    dr.depth = img.depth;
    dr.valid.resize(img.pixel_count());
    for (std::size_t i = 0; i < img.pixel_count(); ++i)
        dr.valid[i] = img.alpha[i] >= 0.5 ? 1 : 0;
    return dr;
}

} // namespace gesplat
