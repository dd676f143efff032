/**
 * @license
 * Copyright 2026 VoxelKit Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <functional>

namespace voxelkit::par {

// Worker count for the accelerated backend: hardware concurrency, capped by
// the VOXELKIT_THREADS environment variable. Always >= 1. Cached on first use.
int max_threads();

// Number of chunks run_chunks will use for (n, threads).
std::size_t chunk_count(std::size_t n, int threads);

// Splits [0, n) into contiguous chunks, one thread per chunk, and runs
// fn(chunk_index, begin, end). Chunk boundaries depend only on (n, threads),
// so per-chunk partials merged in chunk order give deterministic reductions.
// threads <= 1 runs inline. The first exception from a chunk is rethrown.
void run_chunks(std::size_t n, int threads,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Convenience: parallel loop without chunk bookkeeping.
inline void maybe_parallel(std::size_t n, bool parallel,
                           const std::function<void(std::size_t, std::size_t)>& fn) {
  run_chunks(n, parallel ? max_threads() : 1,
             [&fn](std::size_t, std::size_t begin, std::size_t end) {
               fn(begin, end);
             });
}

}  // namespace voxelkit::par
