// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/backward.hpp"

#include "gesplat/covariance.hpp"
#include "gesplat/errors.hpp"
#include "gesplat/gef.hpp"
#include "gesplat/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

namespace gesplat {

bool SplatGrads::finite() const {
    if (!d_position.all_finite() || !d_log_scale.all_finite() ||
        !d_color.all_finite())
        return false;
    for (double v : d_rotation)
        if (!std::isfinite(v)) return false;
    for (double v : d_sh1)
        if (!std::isfinite(v)) return false;
    return std::isfinite(d_opacity_logit) && std::isfinite(d_epsilon);
}

namespace {

constexpr double kShC1 = 0.4886025119029199;

/// Per projected splat, per view: gradients w.r.t. the image-space
/// quantities, accumulated over pixels before the (once per splat) chain
/// into world-space parameters.
struct ViewAccum {
    double d_color[3] = {0, 0, 0};
    double d_conic[3] = {0, 0, 0}; // a, b, c
    double d_mean[2] = {0, 0};
    double d_alpha = 0.0;
};

struct PixelEntry {
    int pi;         // projected splat index
    double a;       // composited alpha'
    double t;       // transmittance in front of this entry
    double color[3];
};

} // namespace

void render_backward(const SplatCloud& cloud, const Camera& camera,
                     const RenderParams& params,
                     const std::vector<ProjectedSplat>& projected,
                     const std::vector<double>& loss_grad_pixels, GradAccum& accum) {
    const int w = camera.width, h = camera.height;
    const std::size_t pcount = projected.size();
    if (accum.size() != cloud.size())
        throw ContractViolation("render_backward: accumulator not sized to cloud");
    if (loss_grad_pixels.size() != std::size_t(w) * h * 3)
        throw ContractViolation("render_backward: pixel gradient size mismatch");

    const int tiles_x = (w + kTileSize - 1) / kTileSize;
    const int tiles_y = (h + kTileSize - 1) / kTileSize;
    const std::size_t tile_count = std::size_t(tiles_x) * tiles_y;

    // Tile bins, identical to the forward pass.
    std::vector<std::vector<int>> bins(tile_count);
    for (std::size_t pi = 0; pi < pcount; ++pi) {
        const ProjectedSplat& p = projected[pi];
        const int x0 = std::max(0, int(std::floor((p.mean.x - p.radius) / kTileSize)));
        const int x1 =
            std::min(tiles_x - 1, int(std::floor((p.mean.x + p.radius) / kTileSize)));
        const int y0 = std::max(0, int(std::floor((p.mean.y - p.radius) / kTileSize)));
        const int y1 =
            std::min(tiles_y - 1, int(std::floor((p.mean.y + p.radius) / kTileSize)));
        for (int ty = y0; ty <= y1; ++ty)
            for (int tx = x0; tx <= x1; ++tx)
                bins[std::size_t(ty) * tiles_x + tx].push_back(int(pi));
    }

    const int workers = worker_count();
    std::vector<std::vector<ViewAccum>> per_worker(workers);

    parallel_for_chunks(tile_count, [&](std::size_t begin, std::size_t end, int worker) {
        auto& view = per_worker[worker];
        if (view.empty()) view.resize(pcount);
        std::vector<PixelEntry> entries;
        entries.reserve(64);

        for (std::size_t tile = begin; tile < end; ++tile) {
            const auto& bin = bins[tile];
            if (bin.empty()) continue;
            const int tx = int(tile) % tiles_x;
            const int ty = int(tile) / tiles_x;
            const int px0 = tx * kTileSize, py0 = ty * kTileSize;
            const int tw = std::min(kTileSize, w - px0);
            const int th = std::min(kTileSize, h - py0);

            for (int yy = 0; yy < th; ++yy) {
                const int py = py0 + yy;
                const double cy = py + 0.5;
                for (int xx = 0; xx < tw; ++xx) {
                    const int px = px0 + xx;
                    const double cx = px + 0.5;
                    const std::size_t pix = std::size_t(py) * w + px;
                    const double* g = &loss_grad_pixels[3 * pix];
                    if (g[0] == 0.0 && g[1] == 0.0 && g[2] == 0.0) continue;

                    // Replay the forward compositing for this pixel.
                    entries.clear();
                    double t = 1.0;
                    for (const int pi : bin) {
                        if (t < params.transmittance_floor) break;
                        const ProjectedSplat& p = projected[pi];
                        // Replicate the forward bbox cut exactly.
                        const int bx0 = int(std::floor(p.mean.x - p.radius));
                        const int bx1 = int(std::floor(p.mean.x + p.radius));
                        const int by0 = int(std::floor(p.mean.y - p.radius));
                        const int by1 = int(std::floor(p.mean.y + p.radius));
                        if (px < bx0 || px > bx1 || py < by0 || py > by1) continue;
                        const double dx = cx - p.mean.x;
                        const double dy = cy - p.mean.y;
                        double power = -0.5 * (p.conic[0] * dx * dx + p.conic[2] * dy * dy) -
                                       (p.conic[1] * dy) * dx;
                        if (power > 0.0) power = 0.0;
                        const double a = p.alpha * std::exp(power);
                        if (a < params.alpha_skip) continue;
                        entries.push_back(
                            {pi, a, t, {p.color.x, p.color.y, p.color.z}});
                        t *= (1.0 - a);
                    }
                    if (entries.empty()) continue;

                    // Reverse walk: rec carries the contribution from behind.
                    double rec[3] = {params.background.x, params.background.y,
                                     params.background.z};
                    for (int e = int(entries.size()) - 1; e >= 0; --e) {
                        const PixelEntry& ent = entries[e];
                        const ProjectedSplat& p = projected[ent.pi];
                        ViewAccum& va = view[ent.pi];
                        const double weight = ent.a * ent.t;
                        double d_a = 0.0;
                        for (int c = 0; c < 3; ++c) {
                            va.d_color[c] += weight * g[c];
                            d_a += g[c] * ent.t * (ent.color[c] - rec[c]);
                        }
                        // alpha' = opacity * exp(power)
                        va.d_alpha += (ent.a / p.alpha) * d_a;
                        const double d_power = ent.a * d_a;
                        const double dx = cx - p.mean.x;
                        const double dy = cy - p.mean.y;
                        va.d_conic[0] += -0.5 * dx * dx * d_power;
                        va.d_conic[1] += -dx * dy * d_power;
                        va.d_conic[2] += -0.5 * dy * dy * d_power;
                        const double gx = (p.conic[0] * dx + p.conic[1] * dy) * d_power;
                        const double gy = (p.conic[1] * dx + p.conic[2] * dy) * d_power;
                        va.d_mean[0] += gx;
                        va.d_mean[1] += gy;
                        for (int c = 0; c < 3; ++c)
                            rec[c] = ent.a * ent.color[c] + (1.0 - ent.a) * rec[c];
                    }
                }
            }
        }
    });

    // Deterministic merge of worker accumulators.
    std::vector<ViewAccum> merged(pcount);
    for (int wk = 0; wk < workers; ++wk) {
        if (per_worker[wk].empty()) continue;
        for (std::size_t pi = 0; pi < pcount; ++pi) {
            const ViewAccum& s = per_worker[wk][pi];
            ViewAccum& d = merged[pi];
            for (int k = 0; k < 3; ++k) d.d_color[k] += s.d_color[k];
            for (int k = 0; k < 3; ++k) d.d_conic[k] += s.d_conic[k];
            d.d_mean[0] += s.d_mean[0];
            d.d_mean[1] += s.d_mean[1];
            d.d_alpha += s.d_alpha;
        }
    }

    // Chain each projected splat's image-space gradients into parameters.
    const double lim_x = params.guard_band * camera.tan_half_fov_x();
    const double lim_y = params.guard_band * camera.tan_half_fov_y();
    const Vec3 cam_pos = camera.position();
    const Mat3& rot_w2c = camera.world_to_cam.rotation;

    for (std::size_t pi = 0; pi < pcount; ++pi) {
        const ProjectedSplat& p = projected[pi];
        const ViewAccum& va = merged[pi];
        const SplatCore& s = cloud.splats[p.id];
        SplatGrads out;

        // --- color path: view color = clamp(base + Y . sh) ---
        const Vec3 to_splat = s.position - cam_pos;
        const double dist = to_splat.norm();
        const Vec3 dir = dist > 0.0 ? to_splat / dist : Vec3{0, 0, 0};
        double ybasis[3] = {-kShC1 * dir.y, kShC1 * dir.z, -kShC1 * dir.x};
        Vec3 d_dir{0, 0, 0};
        for (int c = 0; c < 3; ++c) {
            double pre = s.color[c];
            if (params.sh_enabled)
                pre += s.sh1[c * 3 + 0] * ybasis[0] + s.sh1[c * 3 + 1] * ybasis[1] +
                       s.sh1[c * 3 + 2] * ybasis[2];
            const bool open = pre > 0.0 && pre < 1.0; // clamp gradient mask
            if (!open) continue;
            const double gc = va.d_color[c];
            out.d_color[c] += gc;
            if (params.sh_enabled) {
                out.d_sh1[c * 3 + 0] += gc * ybasis[0];
                out.d_sh1[c * 3 + 1] += gc * ybasis[1];
                out.d_sh1[c * 3 + 2] += gc * ybasis[2];
                d_dir.x += gc * (-kShC1 * s.sh1[c * 3 + 2]);
                d_dir.y += gc * (-kShC1 * s.sh1[c * 3 + 0]);
                d_dir.z += gc * (kShC1 * s.sh1[c * 3 + 1]);
            }
        }
        if (params.sh_enabled && dist > 0.0) {
            // d dir / d position = (I - dir dir^T) / dist
            const double proj = dir.dot(d_dir);
            out.d_position += (d_dir - dir * proj) / dist;
        }

        // --- opacity ---
        const double alpha = s.opacity();
        out.d_opacity_logit = va.d_alpha * alpha * (1.0 - alpha);

        // --- conic -> cov2 (2x2 inverse) ---
        const double na = p.conic[0], nb = p.conic[1], nc = p.conic[2];
        const double ga = va.d_conic[0], gb = va.d_conic[1], gc2 = va.d_conic[2];
        // dSigma' = -N Ghat N with Ghat = [[ga, gb/2], [gb/2, gc]]
        const double h00 = na * ga + nb * (gb * 0.5);
        const double h01 = na * (gb * 0.5) + nb * gc2;
        const double h10 = nb * ga + nc * (gb * 0.5);
        const double h11 = nb * (gb * 0.5) + nc * gc2;
        const double dS00 = -(h00 * na + h01 * nb);
        const double dS01 = -(h00 * nb + h01 * nc);
        const double dS10 = -(h10 * na + h11 * nb);
        const double dS11 = -(h10 * nb + h11 * nc);
        const double dA = dS00;
        const double dB = dS01 + dS10;
        const double dC = dS11;

        // --- cov2 = M Sigma_eff M^T + floor ---
        const Vec3 t = camera.to_camera(s.position);
        const double tz = t.z;
        const double tx_ratio = t.x / tz;
        const double ty_ratio = t.y / tz;
        const bool clamped_x = std::abs(tx_ratio) > lim_x;
        const bool clamped_y = std::abs(ty_ratio) > lim_y;
        const double txc = clamp(tx_ratio, -lim_x, lim_x) * tz;
        const double tyc = clamp(ty_ratio, -lim_y, lim_y) * tz;
        const double inv_z = 1.0 / tz;
        const double inv_z2 = inv_z * inv_z;
        const double jac[2][3] = {{camera.fx * inv_z, 0.0, -camera.fx * txc * inv_z2},
                                  {0.0, camera.fy * inv_z, -camera.fy * tyc * inv_z2}};
        double m2x3[2][3];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j)
                m2x3[i][j] = jac[i][0] * rot_w2c.m[0][j] + jac[i][1] * rot_w2c.m[1][j] +
                             jac[i][2] * rot_w2c.m[2][j];

        const Vec3 scale = s.scale();
        const double phi =
            params.gaussian_only ? 1.0 : shape_modulation(s.epsilon, params.rho);
        const Vec3 eff = scale * phi;
        const Mat3 sigma_eff = build_covariance(s.rotation, eff);

        // dSigma_eff = M^T Ghat2 M, Ghat2 = [[dA, dB/2], [dB/2, dC]]
        const double g2[2][2] = {{dA, 0.5 * dB}, {0.5 * dB, dC}};
        Mat3 d_sigma;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double acc = 0.0;
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c)
                        acc += m2x3[r][i] * g2[r][c] * m2x3[c][j];
                d_sigma.m[i][j] = acc;
            }

        // dM = 2 Ghat2 M Sigma_eff
        double msig[2][3];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j)
                msig[i][j] = m2x3[i][0] * sigma_eff.m[0][j] +
                             m2x3[i][1] * sigma_eff.m[1][j] +
                             m2x3[i][2] * sigma_eff.m[2][j];
        double d_m[2][3];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j)
                d_m[i][j] = 2.0 * (g2[i][0] * msig[0][j] + g2[i][1] * msig[1][j]);

        // dJ = dM R^T
        double d_jac[2][3];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j)
                d_jac[i][j] = d_m[i][0] * rot_w2c.m[j][0] + d_m[i][1] * rot_w2c.m[j][1] +
                              d_m[i][2] * rot_w2c.m[j][2];

        // J entries -> camera-space point.
        Vec3 d_t{0, 0, 0};
        d_t.z += d_jac[0][0] * (-camera.fx * inv_z2);
        d_t.z += d_jac[1][1] * (-camera.fy * inv_z2);
        if (clamped_x) {
            // J02 = -fx * (+-lim) / tz
            const double sign = tx_ratio > 0.0 ? 1.0 : -1.0;
            d_t.z += d_jac[0][2] * (camera.fx * sign * lim_x * inv_z2);
        } else {
            d_t.x += d_jac[0][2] * (-camera.fx * inv_z2);
            d_t.z += d_jac[0][2] * (2.0 * camera.fx * t.x * inv_z2 * inv_z);
        }
        if (clamped_y) {
            const double sign = ty_ratio > 0.0 ? 1.0 : -1.0;
            d_t.z += d_jac[1][2] * (camera.fy * sign * lim_y * inv_z2);
        } else {
            d_t.y += d_jac[1][2] * (-camera.fy * inv_z2);
            d_t.z += d_jac[1][2] * (2.0 * camera.fy * t.y * inv_z2 * inv_z);
        }

        // Mean (uses the unclamped projection).
        d_t.x += va.d_mean[0] * camera.fx * inv_z;
        d_t.z += va.d_mean[0] * (-camera.fx * t.x * inv_z2);
        d_t.y += va.d_mean[1] * camera.fy * inv_z;
        d_t.z += va.d_mean[1] * (-camera.fy * t.y * inv_z2);

        out.d_position += rot_w2c.transposed_times(d_t);

        // --- Sigma_eff = R diag(eff^2) R^T -> rotation, scales, shape ---
        const Mat3 rot = quat_to_rotation(s.rotation);
        const Mat3 d_sym = d_sigma; // already symmetric by construction
        // dR = 2 G R D
        Mat3 rd; // R * D
        for (int i = 0; i < 3; ++i) {
            rd.m[i][0] = rot.m[i][0] * eff.x * eff.x;
            rd.m[i][1] = rot.m[i][1] * eff.y * eff.y;
            rd.m[i][2] = rot.m[i][2] * eff.z * eff.z;
        }
        Mat3 d_rot_m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                d_rot_m.m[i][j] = 2.0 * (d_sym.m[i][0] * rd.m[0][j] +
                                         d_sym.m[i][1] * rd.m[1][j] +
                                         d_sym.m[i][2] * rd.m[2][j]);

        // d eff_k = 2 eff_k (R^T G R)_kk
        Vec3 d_eff;
        for (int k = 0; k < 3; ++k) {
            const Vec3 rcol = rot.col(k);
            d_eff[k] = 2.0 * eff[k] * rcol.dot(d_sym * rcol);
        }
        // eff = phi * exp(log_scale)
        out.d_log_scale += Vec3{d_eff.x * phi * scale.x, d_eff.y * phi * scale.y,
                                d_eff.z * phi * scale.z};
        if (!params.gaussian_only) {
            const double dphi = shape_modulation_grad(s.epsilon, params.rho);
            out.d_epsilon +=
                (d_eff.x * scale.x + d_eff.y * scale.y + d_eff.z * scale.z) * dphi;
        }

        // --- rotation matrix -> quaternion (unit), with tangent projection ---
        const Quat q = s.rotation.normalized();
        const double qw = q.w, qx = q.x, qy = q.y, qz = q.z;
        const auto ip = [&](const double dr[3][3]) {
            double acc = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) acc += d_rot_m.m[i][j] * dr[i][j];
            return acc;
        };
        const double drw[3][3] = {{0, -2 * qz, 2 * qy}, {2 * qz, 0, -2 * qx},
                                  {-2 * qy, 2 * qx, 0}};
        const double drx[3][3] = {{0, 2 * qy, 2 * qz}, {2 * qy, -4 * qx, -2 * qw},
                                  {2 * qz, 2 * qw, -4 * qx}};
        const double dry[3][3] = {{-4 * qy, 2 * qx, 2 * qw}, {2 * qx, 0, 2 * qz},
                                  {-2 * qw, 2 * qz, -4 * qy}};
        const double drz[3][3] = {{-4 * qz, -2 * qw, 2 * qx}, {2 * qw, -4 * qz, 2 * qy},
                                  {2 * qx, 2 * qy, 0}};
        double dq[4] = {ip(drw), ip(drx), ip(dry), ip(drz)};
        const double qdot = qw * dq[0] + qx * dq[1] + qy * dq[2] + qz * dq[3];
        out.d_rotation[0] = dq[0] - qw * qdot;
        out.d_rotation[1] = dq[1] - qx * qdot;
        out.d_rotation[2] = dq[2] - qy * qdot;
        out.d_rotation[3] = dq[3] - qz * qdot;

        if (!out.finite())
            throw DivergenceError("non-finite gradient for splat " +
                                  std::to_string(p.id));

        accum.grads[p.id].add(out);
        const double gx_ndc = va.d_mean[0] * (0.5 * w);
        const double gy_ndc = va.d_mean[1] * (0.5 * h);
        accum.mean2d_grad_norm[p.id] += std::sqrt(gx_ndc * gx_ndc + gy_ndc * gy_ndc);
        accum.touched[p.id] += 1;
    }
}

} // namespace gesplat
