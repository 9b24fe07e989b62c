// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

namespace gesplat::simd {

enum class Isa { scalar, avx2 };

/// Hot inner-loop kernels. The scalar entries define the semantics; the
/// AVX2 entries are equivalence-tested against them (see test_simd_kernels).
struct KernelTable {
    /// out[i] = exp(x[i])
    void (*exp_batch)(const double* x, double* out, std::size_t n);

    /// Gaussian footprint weights for one pixel row.
    /// out[i] = opacity * exp(-0.5 * (a dx^2 + 2 b dx dy + c dy^2)) where
    /// dx = (px0 + i + 0.5) - mean_x, dy = (py + 0.5) - mean_y and (a, b, c)
    /// is the conic (inverse 2D covariance). The exponent is clamped to
    /// <= 0 so rounding can never produce weights above opacity.
    /// The scalar variant pins the evaluation order to
    ///   -0.5 * (a*dx*dx + c*dy*dy) - (b*dy)*dx
    /// which oracle comparisons rely on; SIMD variants may fuse operations
    /// and are held to a relative tolerance instead.
    void (*splat_alpha_row)(double mean_x, double mean_y, double a, double b,
                            double c, double opacity, int px0, int py, int n,
                            double* out);
};

/// Kernel table for the ISA selected at startup (GESPLAT_ISA=scalar|avx2|auto
/// overrides autodetection; avx2 silently falls back if unsupported).
const KernelTable& kernels();

Isa active_isa();
std::string isa_name(Isa isa);

/// Test hook: force a specific table. Returns false if the requested ISA is
/// unavailable on this machine.
bool force_isa(Isa isa);

/// True if the CPU supports the given ISA.
bool isa_supported(Isa isa);

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table(); // nullptr when compiled out / unsupported
} // namespace detail

} // namespace gesplat::simd
