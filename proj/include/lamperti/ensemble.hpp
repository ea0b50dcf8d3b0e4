#ifndef LAMPERTI_ENSEMBLE_HPP
#define LAMPERTI_ENSEMBLE_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace lamperti {

// Replica-parallel map-reduce. Accumulators are merged in chunk order, so a
// fixed thread count gives deterministic output; replica randomness comes
// from per-index streams, so the law never depends on scheduling.
template <typename Acc, typename PerReplica>
Acc run_replicas(std::size_t replicas, unsigned threads, PerReplica per_replica) {
    if (threads <= 1 || replicas < 2 * threads) {
        Acc acc{};
        for (std::size_t r = 0; r < replicas; ++r) per_replica(r, acc);
        return acc;
    }
    std::vector<Acc> partial(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = replicas * t / threads;
        std::size_t hi = replicas * (t + 1) / threads;
        pool.emplace_back([&, t, lo, hi]() {
            for (std::size_t r = lo; r < hi; ++r) per_replica(r, partial[t]);
        });
    }
    for (auto& th : pool) th.join();
    Acc acc{};
    for (auto& p : partial) acc.merge(p);
    return acc;
}

inline unsigned default_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace lamperti

#endif
