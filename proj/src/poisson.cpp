// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/poisson.hpp"

#include "gesplat/errors.hpp"
#include "gesplat/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gesplat {
namespace {

/// Negated 7-point Neumann Laplacian (mirrored boundaries), anisotropic
/// spacing. The negation makes the operator positive semi-definite so plain
/// conjugate gradients applies on the zero-mean subspace.
void apply_neg_laplacian(const VoxelGrid& g, const std::vector<double>& x,
                         std::vector<double>& out) {
    const double wx = 1.0 / (g.spacing.x * g.spacing.x);
    const double wy = 1.0 / (g.spacing.y * g.spacing.y);
    const double wz = 1.0 / (g.spacing.z * g.spacing.z);
    parallel_for_chunks(std::size_t(g.nz), [&](std::size_t zb, std::size_t ze, int) {
        for (std::size_t z = zb; z < ze; ++z) {
            for (int y = 0; y < g.ny; ++y) {
                for (int xx = 0; xx < g.nx; ++xx) {
                    const std::size_t i = g.index(xx, int(y), int(z));
                    const double c = x[i];
                    const double xp = xx + 1 < g.nx ? x[i + 1] : x[i - 1];
                    const double xm = xx > 0 ? x[i - 1] : x[i + 1];
                    const double yp = y + 1 < g.ny ? x[i + g.nx] : x[i - g.nx];
                    const double ym = y > 0 ? x[i - g.nx] : x[i + g.nx];
                    const std::size_t stride_z = std::size_t(g.nx) * g.ny;
                    const double zp = int(z) + 1 < g.nz ? x[i + stride_z] : x[i - stride_z];
                    const double zm = z > 0 ? x[i - stride_z] : x[i + stride_z];
                    out[i] = -(wx * (xp - 2.0 * c + xm) + wy * (yp - 2.0 * c + ym) +
                               wz * (zp - 2.0 * c + zm));
                }
            }
        }
    });
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void subtract_mean(std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= double(v.size());
    for (double& x : v) x -= mean;
}

} // namespace

TriangleMesh poisson_reconstruct(const std::vector<LevelSetPoint>& points,
                                 const PoissonParams& params, PoissonDebug* debug) {
    if (points.size() < 100)
        throw ValidationError("poisson: need at least 100 oriented points, got " +
                              std::to_string(points.size()));

    Vec3 lo = points[0].position, hi = lo;
    for (const auto& p : points) {
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p.position[a]);
            hi[a] = std::max(hi[a], p.position[a]);
        }
    }
    const Vec3 size = hi - lo;
    const double pad_base = std::max({size.x, size.y, size.z, 1e-6});
    VoxelGrid grid;
    grid.nx = grid.ny = grid.nz = std::max(params.resolution, 16);
    for (int a = 0; a < 3; ++a) {
        const double pad = params.margin * pad_base;
        grid.origin[a] = lo[a] - pad;
        grid.spacing[a] = (size[a] + 2.0 * pad) / double(grid.nx - 1);
    }
    const std::size_t n = grid.node_count();

    // Trilinear splat of the normals into a node vector field.
    std::vector<double> vfield[3];
    for (auto& v : vfield) v.assign(n, 0.0);
    for (const auto& p : points) {
        const double fx =
            clamp((p.position.x - grid.origin.x) / grid.spacing.x, 0.0, grid.nx - 1.0);
        const double fy =
            clamp((p.position.y - grid.origin.y) / grid.spacing.y, 0.0, grid.ny - 1.0);
        const double fz =
            clamp((p.position.z - grid.origin.z) / grid.spacing.z, 0.0, grid.nz - 1.0);
        const int x0 = std::min(int(fx), grid.nx - 2);
        const int y0 = std::min(int(fy), grid.ny - 2);
        const int z0 = std::min(int(fz), grid.nz - 2);
        const double tx = fx - x0, ty = fy - y0, tz = fz - z0;
        for (int dz = 0; dz < 2; ++dz)
            for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx) {
                    const double w = (dx ? tx : 1 - tx) * (dy ? ty : 1 - ty) *
                                     (dz ? tz : 1 - tz);
                    const std::size_t i = grid.index(x0 + dx, y0 + dy, z0 + dz);
                    vfield[0][i] += w * p.normal.x;
                    vfield[1][i] += w * p.normal.y;
                    vfield[2][i] += w * p.normal.z;
                }
    }

    // Solve (-lap) chi = div V, i.e. grad chi ~ -V: the indicator is high
    // inside (outward input normals). b = div V via central differences.
    std::vector<double> b(n, 0.0);
    const std::size_t stride[3] = {1, std::size_t(grid.nx),
                                   std::size_t(grid.nx) * grid.ny};
    const int dims[3] = {grid.nx, grid.ny, grid.nz};
    for (int z = 0; z < grid.nz; ++z)
        for (int y = 0; y < grid.ny; ++y)
            for (int x = 0; x < grid.nx; ++x) {
                const std::size_t i = grid.index(x, y, z);
                const int coord[3] = {x, y, z};
                double div = 0.0;
                for (int a = 0; a < 3; ++a) {
                    const double vp = coord[a] + 1 < dims[a]
                                          ? vfield[a][i + stride[a]]
                                          : vfield[a][i - stride[a]];
                    const double vm = coord[a] > 0 ? vfield[a][i - stride[a]]
                                                   : vfield[a][i + stride[a]];
                    div += (vp - vm) / (2.0 * grid.spacing[a]);
                }
                b[i] = div;
            }
    subtract_mean(b); // Neumann compatibility / zero-mean gauge

    std::vector<double> chi(n, 0.0), r = b, p = b, ap(n);
    const double b_norm = std::sqrt(dot(b, b));
    const int max_iters = params.max_iters_per_dim * grid.nx;
    double rr = dot(r, r);
    int iters = 0;
    if (b_norm > 0.0) {
        for (; iters < max_iters; ++iters) {
            if (std::sqrt(rr) <= params.cg_tolerance * b_norm) break;
            apply_laplacian(grid, p, ap);
            const double pap = dot(p, ap);
            if (pap == 0.0) break;
            const double alpha = rr / pap;
            for (std::size_t i = 0; i < n; ++i) {
                chi[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            const double rr_new = dot(r, r);
            const double beta = rr_new / rr;
            rr = rr_new;
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        }
        if (std::sqrt(rr) > params.cg_tolerance * b_norm) {
            throw DivergenceError(
                "poisson: CG failed to converge in " + std::to_string(max_iters) +
                " iterations (relative residual " +
                std::to_string(std::sqrt(rr) / b_norm) + ")");
        }
    }

    grid.values = std::move(chi);

    // Iso level: mean indicator value at the input samples.
    double iso = 0.0;
    for (const auto& pt : points) iso += grid.sample(pt.position);
    iso /= double(points.size());

    TriangleMesh mesh = marching_cubes(grid, iso);

    // Orientation flag: a closed mesh is canonically outward (positive
    // signed volume); flipping every input normal flips the winding and
    // the sign. Open surfaces have no volume, so fall back to "false".
    if (mesh.watertight) {
        double signed_volume = 0.0;
        for (const auto& t : mesh.triangles) {
            const Vec3 &a = mesh.vertices[t[0]], &b2 = mesh.vertices[t[1]],
                       &c = mesh.vertices[t[2]];
            signed_volume += a.dot(b2.cross(c)) / 6.0;
        }
        mesh.orientation_flipped = signed_volume < 0.0;
    }

    if (debug) {
        debug->chi = grid;
        debug->iso = iso;
        debug->cg_iterations = iters;
        debug->residual = b_norm > 0.0 ? std::sqrt(rr) / b_norm : 0.0;
    }
    return mesh;
}

TriangleMesh poisson_reconstruct(const std::vector<LevelSetPoint>& points,
                                 const PoissonParams& params) {
    return poisson_reconstruct(points, params, nullptr);
}

} // namespace gesplat
