// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>

namespace gesplat {

/// Cosine resolution ramp:
/// end + 0.5 (start - end) (1 + cos(pi * iteration / total)).
/// Clamps to end once iteration reaches total; total == 0 returns end.
inline double drt_factor(int iteration, int total_drt_iterations, double start,
                         double end) {
    if (total_drt_iterations <= 0 || iteration >= total_drt_iterations) return end;
    const double t = double(std::max(iteration, 0)) / double(total_drt_iterations);
    return end + 0.5 * (start - end) * (1.0 + std::cos(t * M_PI));
}

enum class TrainPhase { photometric, entropy, gsr };

/// Phase-structured training plan. The canonical 15000-iteration run splits
/// 7000 / 1800 / 6200; other totals scale the spans proportionally.
struct TrainSchedule {
    int total_iterations = 15000;
    int photometric_end = 7000;
    int entropy_end = 8800;

    double drt_fraction = 0.75; // of total iterations
    double drt_start = 0.26;
    double drt_end = 1.0;
    bool drt_enabled = true;

    static TrainSchedule scaled(int total) {
        TrainSchedule s;
        s.total_iterations = total;
        s.photometric_end = int(std::lround(total * (7000.0 / 15000.0)));
        s.entropy_end =
            s.photometric_end + int(std::lround(total * (1800.0 / 15000.0)));
        return s;
    }

    TrainPhase phase_at(int iteration) const {
        if (iteration < photometric_end) return TrainPhase::photometric;
        if (iteration < entropy_end) return TrainPhase::entropy;
        return TrainPhase::gsr;
    }

    int drt_total() const {
        return drt_enabled
                   ? int(std::lround(drt_fraction * double(total_iterations)))
                   : 0;
    }

    double factor_at(int iteration) const {
        if (!drt_enabled) return 1.0;
        return drt_factor(iteration, drt_total(), drt_start, drt_end);
    }
};

/// Rendered resolution for a schedule factor; each side floors at 8 px.
struct ResolutionState {
    double factor = 1.0;
    int width = 0;
    int height = 0;

    static ResolutionState at(double factor, int full_w, int full_h) {
        ResolutionState r;
        r.factor = factor;
        r.width = std::max(std::min(8, full_w), int(std::lround(full_w * factor)));
        r.height = std::max(std::min(8, full_h), int(std::lround(full_h * factor)));
        return r;
    }
};

} // namespace gesplat
