// Copyright 2026 The nbl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>

namespace nbl {

/// Worker count: hardware concurrency, capped by the NBL_THREADS environment variable.
unsigned default_thread_count();

/// Splits [0, n) into `threads` contiguous chunks and runs `work(chunk, begin, end)`
/// for each, one std::jthread per chunk. Chunk boundaries depend only on (n, threads).
void parallel_chunks(std::uint64_t n, unsigned threads,
                     const std::function<void(unsigned, std::uint64_t, std::uint64_t)>& work);

/// Counter-based seed derivation: splitmix64 finalizer of master + (stream + 1) * golden gamma.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace nbl
