#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace munu {

// 0 means "use all hardware threads".
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Partitions [lo, hi) into fixed-size chunks and runs fn(chunk_index, clo, chi)
// for each. Chunks may execute on any thread in any order; callers keep results
// deterministic by writing to disjoint slices or merging per-chunk results in
// ascending chunk order.
template <class Fn>
void parallel_chunks(std::uint64_t lo, std::uint64_t hi, std::uint64_t chunk,
                     unsigned threads, Fn&& fn) {
    if (hi <= lo) return;
    const std::uint64_t span = hi - lo;
    const std::uint64_t nchunks = (span + chunk - 1) / chunk;
    threads = resolve_threads(threads);

    auto run_chunk = [&](std::uint64_t c) {
        const std::uint64_t clo = lo + c * chunk;
        const std::uint64_t chi = std::min(hi, clo + chunk);
        fn(static_cast<std::size_t>(c), clo, chi);
    };

    if (threads <= 1 || nchunks == 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c) run_chunk(c);
        return;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    const unsigned nworkers =
        static_cast<unsigned>(std::min<std::uint64_t>(threads, nchunks));
    pool.reserve(nworkers);
    for (unsigned w = 0; w < nworkers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t c = next.fetch_add(1);
                if (c >= nchunks || failed.load()) return;
                try {
                    run_chunk(c);
                } catch (...) {
                    if (!failed.exchange(true)) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load() && first_error) std::rethrow_exception(first_error);
}

} // namespace munu
