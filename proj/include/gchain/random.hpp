#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace gchain {

using Rng = std::mt19937_64;

// Number of independent streams a Monte-Carlo estimate is split into. Fixed so
// results do not depend on how many hardware threads are available.
inline constexpr std::size_t kMonteCarloShards = 16;

// Deterministic generator for (seed, stream). Distinct streams are seeded through
// std::seed_seq, which decorrelates nearby integers.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

// Sample count of shard `index` when `total` samples are split into `shards` parts.
inline std::size_t shard_size(std::size_t total, std::size_t shards, std::size_t index) {
    return total / shards + (index < total % shards ? 1 : 0);
}

// Runs work(shard) for every shard in [0, shards), spread over the available
// hardware threads. work must only touch its own shard's output.
inline void run_sharded(std::size_t shards, const std::function<void(std::size_t)>& work) {
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, shards);
    if (workers <= 1) {
        for (std::size_t s = 0; s < shards; ++s) work(s);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t s = w; s < shards; s += workers) work(s);
        });
    }
}

}  // namespace gchain
