// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gesplat/renderer.hpp"

#include <array>
#include <vector>

namespace gesplat {

/// Gradients of a scalar loss with respect to one splat's parameters, in
/// the optimizer's coordinates (raw quaternion, log scales, opacity logit).
/// d_epsilon is with respect to the shape value; the optimizer chains it
/// through the bounded latent.
struct SplatGrads {
    Vec3 d_position{0, 0, 0};
    std::array<double, 4> d_rotation{0, 0, 0, 0}; // w x y z, raw
    Vec3 d_log_scale{0, 0, 0};
    double d_opacity_logit = 0.0;
    double d_epsilon = 0.0;
    Vec3 d_color{0, 0, 0};
    std::array<double, 9> d_sh1{};

    void add(const SplatGrads& o) {
        d_position += o.d_position;
        for (int i = 0; i < 4; ++i) d_rotation[i] += o.d_rotation[i];
        d_log_scale += o.d_log_scale;
        d_opacity_logit += o.d_opacity_logit;
        d_epsilon += o.d_epsilon;
        d_color += o.d_color;
        for (int i = 0; i < 9; ++i) d_sh1[i] += o.d_sh1[i];
    }
    bool finite() const;
};

/// Accumulator across views/iterations.
struct GradAccum {
    std::vector<SplatGrads> grads;
    std::vector<double> mean2d_grad_norm; // NDC-units position gradient, summed
    std::vector<int> touched;             // number of views the splat projected in

    void reset(std::size_t n) {
        grads.assign(n, SplatGrads{});
        mean2d_grad_norm.assign(n, 0.0);
        touched.assign(n, 0);
    }
    std::size_t size() const { return grads.size(); }

    /// Mean image-space gradient magnitude per splat (densification signal).
    std::vector<double> densify_means() const {
        std::vector<double> out(grads.size(), 0.0);
        for (std::size_t i = 0; i < grads.size(); ++i)
            if (touched[i] > 0) out[i] = mean2d_grad_norm[i] / touched[i];
        return out;
    }
};

/// Backpropagates d(loss)/d(pixels) through the compositing, projection and
/// parameterization chain of one rendered view, accumulating into `accum`
/// (which must be sized to the cloud). `projected` must come from
/// project_splats on the same cloud/camera/params snapshot.
///
/// Throws DivergenceError naming the splat if a non-finite gradient appears.
void render_backward(const SplatCloud& cloud, const Camera& camera,
                     const RenderParams& params,
                     const std::vector<ProjectedSplat>& projected,
                     const std::vector<double>& loss_grad_pixels, GradAccum& accum);

} // namespace gesplat
