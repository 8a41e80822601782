#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace sigstate {

using Eigen::Index;

/// splitmix64 scrambler; used to derive independent RNG streams from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// FNV-1a 64-bit over a byte buffer.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h = 0xcbf29ce484222325ull);
std::uint64_t fnv1a(const std::string& s);

/// FNV-1a hash of a file's contents. Throws IoError when unreadable.
std::uint64_t hash_file(const std::string& path);

std::string hex64(std::uint64_t v);

/// Resolve a worker count: explicit value wins, then SIGSTATE_THREADS,
/// then hardware concurrency. Always at least 1.
int resolve_threads(int requested = 0);

/// Run fn(i) for i in [0, n) on `threads` workers, index-strided.
/// fn must only touch per-index state; results are deterministic as long as
/// the caller combines per-index outputs in index order.
void parallel_for(Index n, int threads, const std::function<void(Index)>& fn);

}  // namespace sigstate
