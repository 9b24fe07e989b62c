// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/gsr.hpp"

#include "gesplat/parallel.hpp"
#include "gesplat/tape.hpp"

#include <algorithm>
#include <cmath>

namespace gesplat {
namespace {

using Var = Tape::Var;

struct NeighborVars {
    int splat_id;
    Var pos[3];
    Var quat[4]; // raw w x y z
    Var log_scale[3];
    Var opacity_logit;
    Var epsilon;
    // derived
    Var rot[3][3];
    Var scale_f[3]; // floored exp(log_scale)
};

void build_rotation(Tape& t, NeighborVars& nv) {
    const Var w = nv.quat[0], x = nv.quat[1], y = nv.quat[2], z = nv.quat[3];
    Var n2 = t.add(t.add(t.mul(w, w), t.mul(x, x)), t.add(t.mul(y, y), t.mul(z, z)));
    Var inv_n = t.div(t.constant(1.0), t.sqrt(n2));
    const Var qw = t.mul(w, inv_n), qx = t.mul(x, inv_n), qy = t.mul(y, inv_n),
              qz = t.mul(z, inv_n);

    const auto two = [&](Var a, Var b) { return t.mul(t.mul(a, b), 2.0); };
    nv.rot[0][0] = t.sub(t.constant(1.0), t.add(two(qy, qy), two(qz, qz)));
    nv.rot[0][1] = t.sub(two(qx, qy), two(qw, qz));
    nv.rot[0][2] = t.add(two(qx, qz), two(qw, qy));
    nv.rot[1][0] = t.add(two(qx, qy), two(qw, qz));
    nv.rot[1][1] = t.sub(t.constant(1.0), t.add(two(qx, qx), two(qz, qz)));
    nv.rot[1][2] = t.sub(two(qy, qz), two(qw, qx));
    nv.rot[2][0] = t.sub(two(qx, qz), two(qw, qy));
    nv.rot[2][1] = t.add(two(qy, qz), two(qw, qx));
    nv.rot[2][2] = t.sub(t.constant(1.0), t.add(two(qx, qx), two(qy, qy)));
}

struct SampleResult {
    double sdf_term = 0.0;
    double normal_term = 0.0;
    bool normal_ok = false;
};

void harvest(const Tape& t, const std::vector<NeighborVars>& nbrs,
             std::vector<SplatGrads>& grads) {
    for (const auto& nv : nbrs) {
        SplatGrads& g = grads[nv.splat_id];
        g.d_position +=
            Vec3{t.grad(nv.pos[0]), t.grad(nv.pos[1]), t.grad(nv.pos[2])};
        for (int k = 0; k < 4; ++k) g.d_rotation[k] += t.grad(nv.quat[k]);
        g.d_log_scale += Vec3{t.grad(nv.log_scale[0]), t.grad(nv.log_scale[1]),
                              t.grad(nv.log_scale[2])};
        g.d_opacity_logit += t.grad(nv.opacity_logit);
        g.d_epsilon += t.grad(nv.epsilon);
    }
}

/// Builds the per-sample losses on the tape; runs one backward per active
/// term. SDF gradients are pre-scaled by w_sdf / batch; normal gradients are
/// harvested unscaled (the caller divides by the non-degenerate count).
SampleResult eval_sample(const SplatCloud& cloud, const DensityField& field,
                         const SamplePoint& sample, double w_sdf,
                         double inv_batch, Tape& t,
                         std::vector<SplatGrads>* sdf_grads,
                         std::vector<SplatGrads>* normal_grads) {
    SampleResult result;
    const auto& ids = sample.nn;
    if (ids.empty()) return result;
    const int gstar = ids[0];

    t.clear();
    const double scale_floor = field.params().scale_floor_rel * field.extent();
    const double smin_floor = field.params().smin_floor_rel * field.extent();

    std::vector<NeighborVars> nbrs(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const SplatCore& s = cloud.splats[ids[i]];
        NeighborVars& nv = nbrs[i];
        nv.splat_id = ids[i];
        for (int k = 0; k < 3; ++k) nv.pos[k] = t.leaf(s.position[k]);
        for (int k = 0; k < 4; ++k) nv.quat[k] = t.leaf(s.rotation[k]);
        for (int k = 0; k < 3; ++k) nv.log_scale[k] = t.leaf(s.log_scale[k]);
        nv.opacity_logit = t.leaf(s.opacity_logit);
        nv.epsilon = t.leaf(s.epsilon);
        build_rotation(t, nv);
        for (int k = 0; k < 3; ++k)
            nv.scale_f[k] = t.max_const(t.exp(nv.log_scale[k]), scale_floor);
    }

    // Density and its spatial gradient.
    Var density = t.constant(0.0);
    Var grad_d[3] = {t.constant(0.0), t.constant(0.0), t.constant(0.0)};
    for (auto& nv : nbrs) {
        Var delta[3];
        for (int j = 0; j < 3; ++j)
            delta[j] = t.sub(sample.position[j], nv.pos[j]);
        // local = R^T delta, whitened by the floored scales
        Var tloc[3], u[3];
        for (int k = 0; k < 3; ++k) {
            Var lk = t.add(t.add(t.mul(nv.rot[0][k], delta[0]),
                                 t.mul(nv.rot[1][k], delta[1])),
                           t.mul(nv.rot[2][k], delta[2]));
            tloc[k] = t.div(lk, nv.scale_f[k]);
            u[k] = t.div(tloc[k], nv.scale_f[k]); // local_k / s_k^2
        }
        Var m = t.add(t.add(t.mul(tloc[0], tloc[0]), t.mul(tloc[1], tloc[1])),
                      t.mul(tloc[2], tloc[2]));
        Var m_f = t.max_const(m, 1e-18);
        Var ln_m = t.log(m_f);
        Var e_half = t.mul(nv.epsilon, 0.5);
        Var power = t.mul(t.exp(t.mul(e_half, ln_m)), -0.5);
        Var alpha = t.sigmoid(nv.opacity_logit);
        Var contrib = t.mul(alpha, t.exp(power));
        density = t.add(density, contrib);

        // d power / d m = -(eps/4) m^(eps/2 - 1)
        Var dpm = t.mul(t.mul(nv.epsilon, t.exp(t.mul(t.add(e_half, -1.0), ln_m))),
                        -0.25);
        Var coeff = t.mul(contrib, dpm);
        for (int j = 0; j < 3; ++j) {
            Var gm = t.mul(t.add(t.add(t.mul(nv.rot[j][0], u[0]),
                                       t.mul(nv.rot[j][1], u[1])),
                                 t.mul(nv.rot[j][2], u[2])),
                           2.0);
            grad_d[j] = t.add(grad_d[j], t.mul(coeff, gm));
        }
    }

    const double d_raw = t.value(density);
    Var dc = t.max_const(t.min_const(density, field.params().density_clamp_hi),
                         field.params().density_clamp_lo);

    // g* quantities.
    const NeighborVars& gv = nbrs[0];
    const SplatCore& gs = cloud.splats[gstar];
    const int axis = gs.min_scale_axis();
    Var s_min = t.max_const(t.exp(gv.log_scale[axis]), smin_floor);
    Var n_col[3] = {gv.rot[0][axis], gv.rot[1][axis], gv.rot[2][axis]};
    Var dg[3];
    for (int j = 0; j < 3; ++j) dg[j] = t.sub(sample.position[j], gv.pos[j]);
    Var dplane = t.add(t.add(t.mul(n_col[0], dg[0]), t.mul(n_col[1], dg[1])),
                       t.mul(n_col[2], dg[2]));
    const double side = t.value(dplane) >= 0.0 ? 1.0 : -1.0;

    // Actual SDF: side * s_min * sqrt(-2 ln d)
    Var root = t.sqrt(t.mul(t.log(dc), -2.0));
    Var f = t.mul(t.mul(s_min, root), side);

    // Ideal SDF: side * |dplane|^(eps/2)
    Var mag = t.max_const(t.abs(dplane), 1e-30);
    Var fbar = t.mul(t.exp(t.mul(t.mul(gv.epsilon, 0.5), t.log(mag))), side);

    Var sdf_term = t.abs(t.sub(fbar, f));
    result.sdf_term = t.value(sdf_term);
    if (sdf_grads) {
        t.backward(sdf_term, w_sdf * inv_batch);
        harvest(t, nbrs, *sdf_grads);
    }

    // Normal term via grad f = (-side s_min / (d sqrt(-2 ln d))) grad d.
    const bool clamped =
        d_raw <= field.params().density_clamp_lo ||
        d_raw >= field.params().density_clamp_hi;
    if (!clamped) {
        Var factor = t.div(t.mul(s_min, -side), t.mul(dc, root));
        Var gf[3];
        double norm2_val = 0.0;
        for (int j = 0; j < 3; ++j) {
            gf[j] = t.mul(grad_d[j], factor);
            norm2_val += t.value(gf[j]) * t.value(gf[j]);
        }
        if (norm2_val > 1e-24) {
            Var norm = t.sqrt(
                t.add(t.add(t.mul(gf[0], gf[0]), t.mul(gf[1], gf[1])),
                      t.mul(gf[2], gf[2])));
            // Orientation of n that minimizes the term (axis-sign invariance).
            double dot_val = 0.0;
            for (int j = 0; j < 3; ++j)
                dot_val += (t.value(gf[j]) / std::sqrt(norm2_val)) * t.value(n_col[j]);
            const double orient = dot_val >= 0.0 ? 1.0 : -1.0;
            Var nterm = t.constant(0.0);
            for (int j = 0; j < 3; ++j) {
                Var diff = t.sub(t.div(gf[j], norm), t.mul(n_col[j], orient));
                nterm = t.add(nterm, t.mul(diff, diff));
            }
            result.normal_term = t.value(nterm);
            result.normal_ok = true;
            if (normal_grads) {
                t.backward(nterm, 1.0);
                harvest(t, nbrs, *normal_grads);
            }
        }
    }
    return result;
}

} // namespace

GsrLosses gsr_losses(const SplatCloud& cloud, const DensityField& field,
                     const std::vector<SamplePoint>& samples, double w_sdf,
                     double w_normal, std::vector<SplatGrads>* grads) {
    GsrLosses out;
    if (samples.empty()) return out;
    const double inv_batch = 1.0 / double(samples.size());

    const int workers = worker_count();
    struct WorkerState {
        double sdf = 0.0;
        double normal = 0.0;
        int normal_count = 0;
        int degenerate = 0;
        std::vector<SplatGrads> sdf_grads;
        std::vector<SplatGrads> normal_grads;
    };
    std::vector<WorkerState> states(workers);

    parallel_for_chunks(samples.size(), [&](std::size_t begin, std::size_t end,
                                            int worker) {
        WorkerState& st = states[worker];
        if (grads && st.sdf_grads.empty()) {
            st.sdf_grads.assign(cloud.size(), SplatGrads{});
            st.normal_grads.assign(cloud.size(), SplatGrads{});
        }
        Tape tape;
        tape.reserve(4096);
        for (std::size_t i = begin; i < end; ++i) {
            const SampleResult r = eval_sample(
                cloud, field, samples[i], w_sdf, inv_batch, tape,
                grads ? &st.sdf_grads : nullptr, grads ? &st.normal_grads : nullptr);
            st.sdf += r.sdf_term;
            if (r.normal_ok) {
                st.normal += r.normal_term;
                ++st.normal_count;
            } else {
                ++st.degenerate;
            }
        }
    });

    int normal_count = 0;
    for (int w = 0; w < workers; ++w) {
        normal_count += states[w].normal_count;
        out.degenerate += states[w].degenerate;
    }
    const double normal_scale =
        normal_count > 0 ? w_normal / double(normal_count) : 0.0;

    for (int w = 0; w < workers; ++w) {
        out.sdf += states[w].sdf;
        out.normal += states[w].normal;
        if (grads && !states[w].sdf_grads.empty()) {
            for (std::size_t i = 0; i < cloud.size(); ++i) {
                (*grads)[i].add(states[w].sdf_grads[i]);
                SplatGrads n = states[w].normal_grads[i];
                n.d_position *= normal_scale;
                for (auto& v : n.d_rotation) v *= normal_scale;
                n.d_log_scale *= normal_scale;
                n.d_opacity_logit *= normal_scale;
                n.d_epsilon *= normal_scale;
                (*grads)[i].add(n);
            }
        }
    }
    out.sdf *= inv_batch;
    out.normal = normal_count > 0 ? out.normal / normal_count : 0.0;
    return out;
}

} // namespace gesplat
