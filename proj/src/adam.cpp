// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/adam.hpp"

#include "gesplat/errors.hpp"

#include <cmath>

namespace gesplat {

void Adam::reset(std::size_t splat_count) {
    m_.assign(splat_count, SplatGrads{});
    v_.assign(splat_count, SplatGrads{});
    step_ = 0;
}

void Adam::remap(const std::vector<int>& old_of_new) {
    std::vector<SplatGrads> nm(old_of_new.size()), nv(old_of_new.size());
    for (std::size_t i = 0; i < old_of_new.size(); ++i) {
        const int src = old_of_new[i];
        if (src >= 0 && src < static_cast<int>(m_.size())) {
            nm[i] = m_[src];
            nv[i] = v_[src];
        }
    }
    m_ = std::move(nm);
    v_ = std::move(nv);
}

void Adam::reset_opacity_moments() {
    for (auto& g : m_) g.d_opacity_logit = 0.0;
    for (auto& g : v_) g.d_opacity_logit = 0.0;
}

void Adam::reset_epsilon_moments() {
    for (auto& g : m_) g.d_epsilon = 0.0;
    for (auto& g : v_) g.d_epsilon = 0.0;
}

void Adam::step(SplatCloud& cloud, const std::vector<SplatGrads>& grads,
                const LearningRates& lr, double scene_extent,
                const EpsilonBounds& bounds, bool freeze_epsilon) {
    if (m_.size() != cloud.size() || grads.size() != cloud.size())
        throw ContractViolation("adam: state/gradient size mismatch");
    ++step_;
    const double bc1 = 1.0 - std::pow(params_.beta1, double(step_));
    const double bc2 = 1.0 - std::pow(params_.beta2, double(step_));

    const auto update = [&](double& x, double g, double& m, double& v, double rate) {
        m = params_.beta1 * m + (1.0 - params_.beta1) * g;
        v = params_.beta2 * v + (1.0 - params_.beta2) * g * g;
        const double mhat = m / bc1;
        const double vhat = v / bc2;
        x -= rate * mhat / (std::sqrt(vhat) + params_.eps);
    };

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        SplatCore& s = cloud.splats[i];
        const SplatGrads& g = grads[i];
        SplatGrads& m = m_[i];
        SplatGrads& v = v_[i];

        update(s.position.x, g.d_position.x, m.d_position.x, v.d_position.x,
               lr.position * scene_extent);
        update(s.position.y, g.d_position.y, m.d_position.y, v.d_position.y,
               lr.position * scene_extent);
        update(s.position.z, g.d_position.z, m.d_position.z, v.d_position.z,
               lr.position * scene_extent);

        for (int k = 0; k < 4; ++k)
            update(s.rotation[k], g.d_rotation[k], m.d_rotation[k], v.d_rotation[k],
                   lr.rotation);
        s.rotation = s.rotation.normalized();

        update(s.log_scale.x, g.d_log_scale.x, m.d_log_scale.x, v.d_log_scale.x,
               lr.scale);
        update(s.log_scale.y, g.d_log_scale.y, m.d_log_scale.y, v.d_log_scale.y,
               lr.scale);
        update(s.log_scale.z, g.d_log_scale.z, m.d_log_scale.z, v.d_log_scale.z,
               lr.scale);

        update(s.opacity_logit, g.d_opacity_logit, m.d_opacity_logit,
               v.d_opacity_logit, lr.opacity);

        if (!freeze_epsilon) {
            double latent = epsilon_to_latent(s.epsilon, bounds);
            const double g_latent = g.d_epsilon * epsilon_latent_grad(s.epsilon, bounds);
            update(latent, g_latent, m.d_epsilon, v.d_epsilon, lr.epsilon);
            s.epsilon = latent_to_epsilon(latent, bounds);
        }

        for (int k = 0; k < 3; ++k) {
            update(s.color[k], g.d_color[k], m.d_color[k], v.d_color[k], lr.color);
            s.color[k] = clamp(s.color[k], 0.0, 1.0);
        }
        for (int k = 0; k < 9; ++k)
            update(s.sh1[k], g.d_sh1[k], m.d_sh1[k], v.d_sh1[k], lr.sh);
    }
}

} // namespace gesplat
