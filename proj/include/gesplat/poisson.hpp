// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/marching_cubes.hpp"
#include "gesplat/mesh.hpp"

#include <vector>

namespace gesplat {

/// Oriented surface sample for Poisson reconstruction.
struct LevelSetPoint {
    Vec3 position;
    Vec3 normal;      // unit, oriented toward the observing camera
    int camera_id = -1;
    int px = -1, py = -1;
};

struct PoissonParams {
    int resolution = 128;     // grid nodes per axis
    double margin = 0.05;     // bounding-box margin fraction
    double cg_tolerance = 1e-8;
    int max_iters_per_dim = 10; // CG cap = 10 * max axis resolution
};

/// Regular-grid Poisson reconstruction: splats the normals into a node
/// vector field V, solves the Neumann Laplace problem
/// div grad chi = -div V under a zero-mean gauge with conjugate gradients,
/// picks the iso level as the mean of chi at the input points, and runs
/// marching cubes. The output is closed when the points cover a closed
/// surface; the orientation_flipped flag reports anti-parallel input
/// normals (geometry is unaffected).
///
/// Throws ValidationError for fewer than 100 points and DivergenceError
/// (with the residual) if CG fails to converge.
TriangleMesh poisson_reconstruct(const std::vector<LevelSetPoint>& points,
                                 const PoissonParams& params = {});

/// The grid/chi intermediate, exposed for diagnostics and tests.
struct PoissonDebug {
    VoxelGrid chi;
    double iso = 0.0;
    int cg_iterations = 0;
    double residual = 0.0;
};

TriangleMesh poisson_reconstruct(const std::vector<LevelSetPoint>& points,
                                 const PoissonParams& params, PoissonDebug* debug);

} // namespace gesplat
