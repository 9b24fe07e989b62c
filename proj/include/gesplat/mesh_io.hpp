// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/mesh.hpp"
#include "gesplat/poisson.hpp"

#include <string>
#include <vector>

namespace gesplat {

/// OBJ: positions + normals (colors are dropped with a warning on stderr).
void save_obj(const TriangleMesh& mesh, const std::string& path);
TriangleMesh load_obj(const std::string& path);

/// Binary little-endian PLY: float32 positions/normals, float32 colors when
/// present, int32 triangle lists.
void save_mesh_ply(const TriangleMesh& mesh, const std::string& path);
TriangleMesh load_mesh_ply(const std::string& path);

/// Level-set point dump (positions, normals, density diagnostics) as
/// binary PLY for inspection.
void save_points_ply(const std::vector<LevelSetPoint>& points,
                     const std::vector<double>& f_actual,
                     const std::vector<double>& f_ideal,
                     const std::string& path);

} // namespace gesplat
