// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/mesh.hpp"
#include "gesplat/vec_math.hpp"

#include <vector>

namespace gesplat {

/// Node-centered scalar field over a regular grid. resolution counts nodes
/// per axis (cells are resolution - 1); spacing may differ per axis so the
/// grid fits an arbitrary bounding box.
struct VoxelGrid {
    int nx = 0, ny = 0, nz = 0; // node counts
    Vec3 origin{0, 0, 0};
    Vec3 spacing{1, 1, 1};
    std::vector<double> values; // nx*ny*nz, x fastest

    std::size_t node_count() const { return std::size_t(nx) * ny * nz; }
    std::size_t index(int x, int y, int z) const {
        return (std::size_t(z) * ny + y) * nx + x;
    }
    double& at(int x, int y, int z) { return values[index(x, y, z)]; }
    double at(int x, int y, int z) const { return values[index(x, y, z)]; }
    Vec3 node_position(int x, int y, int z) const {
        return {origin.x + x * spacing.x, origin.y + y * spacing.y,
                origin.z + z * spacing.z};
    }

    /// Trilinear interpolation; clamps to the grid bounds.
    double sample(const Vec3& p) const;
    /// Central-difference gradient of the trilinear field.
    Vec3 sample_gradient(const Vec3& p) const;
};

namespace mc {
extern const int kEdgeTable[256];
extern const int kTriTable[256][16];
} // namespace mc

/// Extracts the iso surface with welded vertices (edge-keyed, so shared
/// edges share vertices and the mesh is closed wherever the surface does
/// not hit the grid boundary). Triangles are wound so geometric normals
/// point from higher field values toward lower ones; per-vertex normals
/// come from the field gradient.
TriangleMesh marching_cubes(const VoxelGrid& grid, double iso);

} // namespace gesplat
