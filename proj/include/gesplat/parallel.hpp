// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace gesplat {

/// Worker count: GESPLAT_THREADS env var if set, else hardware concurrency
/// capped at 8. Always >= 1.
int worker_count();

/// Runs fn(chunk_begin, chunk_end, worker_id) over [0, n) split into
/// contiguous chunks. Chunk -> worker assignment is static, so any
/// per-worker accumulation is reproducible for a fixed worker count.
void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t, int)>& fn);

/// Element-wise convenience wrapper around parallel_for_chunks.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace gesplat
