#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace ufn {

// Number of work shards every randomized or swept computation is split into.
// Fixed independently of the worker count so results are reproducible.
inline constexpr uint32_t kShardCount = 64;

inline uint32_t default_thread_count() {
    uint32_t n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

// Runs fn(shard) for shard in [0, shards) on up to `threads` workers.
// Shards are claimed from an atomic counter; callers must make fn's result
// depend only on the shard id so the merge order (by shard id) is stable.
inline void run_sharded(uint32_t shards, uint32_t threads,
                        const std::function<void(uint32_t)>& fn) {
    if (threads <= 1 || shards <= 1) {
        for (uint32_t s = 0; s < shards; ++s) fn(s);
        return;
    }
    std::atomic<uint32_t> next{0};
    auto worker = [&] {
        for (;;) {
            uint32_t s = next.fetch_add(1);
            if (s >= shards) return;
            fn(s);
        }
    };
    uint32_t n = std::min(threads, shards);
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (uint32_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

// Splits [0, total) into kShardCount contiguous ranges.
inline std::pair<uint64_t, uint64_t> shard_range(uint64_t total, uint32_t shard,
                                                 uint32_t shards = kShardCount) {
    uint64_t base = total / shards, extra = total % shards;
    uint64_t lo = base * shard + std::min<uint64_t>(shard, extra);
    uint64_t hi = lo + base + (shard < extra ? 1 : 0);
    return {lo, hi};
}

// Number of samples shard `shard` draws out of `total`.
inline uint64_t shard_samples(uint64_t total, uint32_t shard,
                              uint32_t shards = kShardCount) {
    return total / shards + (shard < total % shards ? 1 : 0);
}

}  // namespace ufn
