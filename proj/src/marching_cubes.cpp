// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/marching_cubes.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gesplat {

double VoxelGrid::sample(const Vec3& p) const {
    const double fx = clamp((p.x - origin.x) / spacing.x, 0.0, double(nx - 1));
    const double fy = clamp((p.y - origin.y) / spacing.y, 0.0, double(ny - 1));
    const double fz = clamp((p.z - origin.z) / spacing.z, 0.0, double(nz - 1));
    const int x0 = std::min(int(fx), nx - 2), y0 = std::min(int(fy), ny - 2),
              z0 = std::min(int(fz), nz - 2);
    const double tx = fx - x0, ty = fy - y0, tz = fz - z0;
    double acc = 0.0;
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                const double w = (dx ? tx : 1 - tx) * (dy ? ty : 1 - ty) *
                                 (dz ? tz : 1 - tz);
                acc += w * at(x0 + dx, y0 + dy, z0 + dz);
            }
    return acc;
}

Vec3 VoxelGrid::sample_gradient(const Vec3& p) const {
    Vec3 g;
    for (int axis = 0; axis < 3; ++axis) {
        Vec3 hp = p, hm = p;
        const double h = 0.5 * spacing[axis];
        hp[axis] += h;
        hm[axis] -= h;
        g[axis] = (sample(hp) - sample(hm)) / (2.0 * h);
    }
    return g;
}

namespace {

// Corner offsets in the Bourke numbering.
constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
// Edge -> (corner a, corner b).
constexpr int kEdgeCorner[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0},
                                    {4, 5}, {5, 6}, {6, 7}, {7, 4},
                                    {0, 4}, {1, 5}, {2, 6}, {3, 7}};
// Edge -> (node offset, axis) of the global grid edge it lies on.
struct GlobalEdge {
    int dx, dy, dz, axis;
};
constexpr GlobalEdge kGlobalEdge[12] = {
    {0, 0, 0, 0}, {1, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 0, 1},
    {0, 0, 1, 0}, {1, 0, 1, 1}, {0, 1, 1, 0}, {0, 0, 1, 1},
    {0, 0, 0, 2}, {1, 0, 0, 2}, {1, 1, 0, 2}, {0, 1, 0, 2}};

} // namespace

TriangleMesh marching_cubes(const VoxelGrid& grid, double iso) {
    TriangleMesh mesh;
    if (grid.nx < 2 || grid.ny < 2 || grid.nz < 2) return mesh;

    // Welded vertex ids per global grid edge, axis-major.
    const std::size_t nodes = grid.node_count();
    std::vector<int> edge_vertex(3 * nodes, -1);
    const auto edge_slot = [&](int x, int y, int z, int axis) {
        return std::size_t(axis) * nodes + grid.index(x, y, z);
    };

    double val[8];
    int vert_of_edge[12];
    for (int z = 0; z + 1 < grid.nz; ++z) {
        for (int y = 0; y + 1 < grid.ny; ++y) {
            for (int x = 0; x + 1 < grid.nx; ++x) {
                int cube = 0;
                for (int c = 0; c < 8; ++c) {
                    val[c] = grid.at(x + kCorner[c][0], y + kCorner[c][1],
                                     z + kCorner[c][2]);
                    if (val[c] < iso) cube |= (1 << c);
                }
                const int edges = mc::kEdgeTable[cube];
                if (edges == 0) continue;

                for (int e = 0; e < 12; ++e) {
                    if (!(edges & (1 << e))) continue;
                    const GlobalEdge ge = kGlobalEdge[e];
                    const std::size_t slot =
                        edge_slot(x + ge.dx, y + ge.dy, z + ge.dz, ge.axis);
                    if (edge_vertex[slot] < 0) {
                        const int a = kEdgeCorner[e][0], b = kEdgeCorner[e][1];
                        const double va = val[a], vb = val[b];
                        double t = 0.5;
                        if (std::abs(vb - va) > 1e-300) t = (iso - va) / (vb - va);
                        t = clamp(t, 0.0, 1.0);
                        const Vec3 pa = grid.node_position(
                            x + kCorner[a][0], y + kCorner[a][1], z + kCorner[a][2]);
                        const Vec3 pb = grid.node_position(
                            x + kCorner[b][0], y + kCorner[b][1], z + kCorner[b][2]);
                        edge_vertex[slot] = int(mesh.vertices.size());
                        mesh.vertices.push_back(pa + (pb - pa) * t);
                    }
                    vert_of_edge[e] = edge_vertex[slot];
                }

                const int* tri = mc::kTriTable[cube];
                for (int k = 0; tri[k] != -1; k += 3) {
                    mesh.triangles.push_back({vert_of_edge[tri[k]],
                                              vert_of_edge[tri[k + 1]],
                                              vert_of_edge[tri[k + 2]]});
                }
            }
        }
    }

    // Normals from the field gradient; winding fixed globally so geometric
    // normals run from high field values to low.
    mesh.normals.resize(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3 g = grid.sample_gradient(mesh.vertices[i]);
        const double n = g.norm();
        mesh.normals[i] = n > 0.0 ? g * (-1.0 / n) : Vec3{0, 0, 1};
    }
    double agreement = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
        const Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
        const Vec3 n = e1.cross(e2);
        const Vec3 want = mesh.normals[t[0]] + mesh.normals[t[1]] + mesh.normals[t[2]];
        agreement += n.dot(want);
    }
    if (agreement < 0.0)
        for (auto& t : mesh.triangles) std::swap(t[1], t[2]);

    clean_mesh(mesh);
    return mesh;
}

} // namespace gesplat
