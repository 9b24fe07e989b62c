// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/mesh.hpp"

#include "gesplat/gef.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace gesplat {

void clean_mesh(TriangleMesh& mesh) {
    std::vector<std::array<int, 3>> kept;
    kept.reserve(mesh.triangles.size());
    for (const auto& t : mesh.triangles) {
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
        const Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
        const Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
        if (e1.cross(e2).norm() < 1e-18) continue;
        kept.push_back(t);
    }
    mesh.triangles = std::move(kept);

    // Edge-sharing census for the watertight flag.
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            ++edge_count[{a, b}];
        }
    }
    mesh.boundary_edges = 0;
    bool closed = !mesh.triangles.empty();
    for (const auto& [edge, count] : edge_count) {
        if (count == 1) ++mesh.boundary_edges;
        if (count != 2) closed = false;
    }
    mesh.watertight = closed;
}

bool mesh_valid(const TriangleMesh& mesh, std::string* why) {
    const auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const int n = int(mesh.vertices.size());
    for (const auto& v : mesh.vertices)
        if (!v.all_finite()) return fail("non-finite vertex");
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k)
            if (t[k] < 0 || t[k] >= n) return fail("triangle index out of range");
    if (mesh.normals.size() != mesh.vertices.size())
        return fail("normal count mismatch");
    for (const auto& nrm : mesh.normals)
        if (std::abs(nrm.norm() - 1.0) > 1e-6) return fail("non-unit normal");
    return true;
}

void colorize_mesh(TriangleMesh& mesh, const SplatCloud& cloud,
                   const DensityField& field) {
    mesh.colors.resize(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        const auto ids = field.neighbors(v);
        Vec3 acc{0, 0, 0};
        double wsum = 0.0;
        for (int id : ids) {
            const SplatCore& s = cloud.splats[id];
            double w = 0.0;
            try {
                w = s.opacity() * splat_density_3d(s, v);
            } catch (...) {
                w = 0.0; // degenerate splat contributes nothing
            }
            acc += s.color * w;
            wsum += w;
        }
        if (wsum > 1e-30) {
            mesh.colors[i] = acc / wsum;
        } else if (!ids.empty()) {
            mesh.colors[i] = cloud.splats[ids[0]].color; // nearest fallback
        } else {
            mesh.colors[i] = {0.5, 0.5, 0.5};
        }
    }
}

} // namespace gesplat
