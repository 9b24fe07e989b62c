// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace gesplat {

/// Minimal reverse-mode autodiff tape over doubles. Each node records its
/// parents and the local partials evaluated during the forward pass, so one
/// reverse sweep yields exact gradients. Used by the surface regularizer,
/// whose losses differentiate through the spatial gradient of the density
/// field (second-order chains that are error-prone by hand).
class Tape {
public:
    struct Var {
        int idx = -1;
    };

    void clear() { nodes_.clear(); }
    void reserve(std::size_t n) { nodes_.reserve(n); }
    std::size_t size() const { return nodes_.size(); }

    Var leaf(double value) { return push(value, -1, -1, 0.0, 0.0); }
    Var constant(double value) { return push(value, -1, -1, 0.0, 0.0); }

    double value(Var v) const { return nodes_[v.idx].value; }

    Var add(Var a, Var b) { return push(val(a) + val(b), a.idx, b.idx, 1.0, 1.0); }
    Var add(Var a, double c) { return push(val(a) + c, a.idx, -1, 1.0, 0.0); }
    Var sub(Var a, Var b) { return push(val(a) - val(b), a.idx, b.idx, 1.0, -1.0); }
    Var sub(double c, Var b) { return push(c - val(b), b.idx, -1, -1.0, 0.0); }
    Var mul(Var a, Var b) {
        return push(val(a) * val(b), a.idx, b.idx, val(b), val(a));
    }
    Var mul(Var a, double c) { return push(val(a) * c, a.idx, -1, c, 0.0); }
    Var div(Var a, Var b) {
        const double vb = val(b);
        return push(val(a) / vb, a.idx, b.idx, 1.0 / vb, -val(a) / (vb * vb));
    }
    Var neg(Var a) { return push(-val(a), a.idx, -1, -1.0, 0.0); }

    Var exp(Var a) {
        const double e = std::exp(val(a));
        return push(e, a.idx, -1, e, 0.0);
    }
    Var log(Var a) { return push(std::log(val(a)), a.idx, -1, 1.0 / val(a), 0.0); }
    Var sqrt(Var a) {
        const double r = std::sqrt(val(a));
        return push(r, a.idx, -1, 0.5 / r, 0.0);
    }
    Var abs(Var a) {
        const double v = val(a);
        return push(std::abs(v), a.idx, -1, v >= 0.0 ? 1.0 : -1.0, 0.0);
    }
    /// max(a, c): gradient passes only when a is active.
    Var max_const(Var a, double c) {
        const double v = val(a);
        return v >= c ? push(v, a.idx, -1, 1.0, 0.0) : push(c, a.idx, -1, 0.0, 0.0);
    }
    Var min_const(Var a, double c) {
        const double v = val(a);
        return v <= c ? push(v, a.idx, -1, 1.0, 0.0) : push(c, a.idx, -1, 0.0, 0.0);
    }
    Var sigmoid(Var a) {
        const double s = 1.0 / (1.0 + std::exp(-val(a)));
        return push(s, a.idx, -1, s * (1.0 - s), 0.0);
    }

    /// Reverse sweep from `output` with the given seed; gradients of every
    /// node are then available via grad().
    void backward(Var output, double seed = 1.0) {
        grads_.assign(nodes_.size(), 0.0);
        grads_[output.idx] = seed;
        for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
            const double g = grads_[i];
            if (g == 0.0) continue;
            const Node& n = nodes_[i];
            if (n.p0 >= 0) grads_[n.p0] += n.w0 * g;
            if (n.p1 >= 0) grads_[n.p1] += n.w1 * g;
        }
    }

    double grad(Var v) const { return grads_[v.idx]; }

private:
    struct Node {
        double value;
        int p0, p1;
        double w0, w1;
    };

    double val(Var v) const { return nodes_[v.idx].value; }

    Var push(double value, int p0, int p1, double w0, double w1) {
        nodes_.push_back({value, p0, p1, w0, w1});
        return Var{static_cast<int>(nodes_.size()) - 1};
    }

    std::vector<Node> nodes_;
    std::vector<double> grads_;
};

} // namespace gesplat
