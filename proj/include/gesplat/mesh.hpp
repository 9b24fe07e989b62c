// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/field.hpp"
#include "gesplat/vec_math.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace gesplat {

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;          // per vertex, unit length
    std::vector<Vec3> colors;           // optional, per vertex
    std::vector<std::array<int, 3>> triangles;

    bool watertight = false;            // every edge shared by exactly 2 faces
    bool orientation_flipped = false;   // normals ended up anti-parallel to
                                        // the input point normals
    int boundary_edges = 0;

    bool has_colors() const { return colors.size() == vertices.size(); }
    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t triangle_count() const { return triangles.size(); }
};

/// Drops triangles with repeated indices or near-zero area; recomputes the
/// edge-sharing statistics (watertight flag / boundary edge count).
void clean_mesh(TriangleMesh& mesh);

/// Structural validity: indices in range, finite vertices, unit normals.
bool mesh_valid(const TriangleMesh& mesh, std::string* why = nullptr);

/// Per-vertex colors from the density-weighted blend of the 16 nearest
/// splats' base colors.
void colorize_mesh(TriangleMesh& mesh, const SplatCloud& cloud,
                   const DensityField& field);

} // namespace gesplat
