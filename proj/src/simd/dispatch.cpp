// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace gesplat::simd {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

void init_once() {
    if (g_table.load(std::memory_order_acquire)) return;

    Isa want = Isa::avx2;
    if (const char* env = std::getenv("GESPLAT_ISA")) {
        if (std::strcmp(env, "scalar") == 0) want = Isa::scalar;
        else if (std::strcmp(env, "avx2") == 0) want = Isa::avx2;
    }
    const KernelTable* table = &detail::scalar_table();
    Isa isa = Isa::scalar;
    if (want == Isa::avx2 && cpu_has_avx2()) {
        if (const KernelTable* t = detail::avx2_table()) {
            table = t;
            isa = Isa::avx2;
        }
    }
    g_isa.store(isa, std::memory_order_relaxed);
    g_table.store(table, std::memory_order_release);
}

} // namespace

const KernelTable& kernels() {
    init_once();
    return *g_table.load(std::memory_order_acquire);
}

Isa active_isa() {
    init_once();
    return g_isa.load(std::memory_order_relaxed);
}

std::string isa_name(Isa isa) {
    switch (isa) {
    case Isa::avx2: return "avx2";
    default: return "scalar";
    }
}

bool isa_supported(Isa isa) {
    if (isa == Isa::scalar) return true;
    return cpu_has_avx2() && detail::avx2_table() != nullptr;
}

bool force_isa(Isa isa) {
    if (!isa_supported(isa)) return false;
    if (isa == Isa::scalar) {
        g_table.store(&detail::scalar_table(), std::memory_order_release);
    } else {
        g_table.store(detail::avx2_table(), std::memory_order_release);
    }
    g_isa.store(isa, std::memory_order_relaxed);
    return true;
}

} // namespace gesplat::simd
