// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace gesplat {

int worker_count() {
    static const int n = [] {
        if (const char* env = std::getenv("GESPLAT_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return std::min(v, 64);
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return static_cast<int>(std::clamp(hw, 1u, 8u));
    }();
    return n;
}

void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t, int)>& fn) {
    if (n == 0) return;
    const int workers = worker_count();
    if (workers == 1 || n < 2) {
        fn(0, n, 0);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
    }
    for (auto& t : threads) t.join();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    parallel_for_chunks(n, [&fn](std::size_t b, std::size_t e, int) {
        for (std::size_t i = b; i < e; ++i) fn(i);
    });
}

} // namespace gesplat
