#pragma once

/* Thread-pool-free chunked parallelism for embarrassingly parallel sweeps.
 * Job count resolution: HYPERZERO_JOBS env var > explicit request > hardware
 * concurrency.  Work is split into one contiguous chunk per job so callers
 * can keep chunk-local mutable state (e.g. warm-start caches). */

#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace hyperzero {

inline unsigned resolve_jobs(int requested = 0) {
    if (const char *env = std::getenv("HYPERZERO_JOBS")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    }
    if (requested > 0) return static_cast<unsigned>(requested);
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1u;
}

/* Invoke body(begin, end, chunk_index) over a partition of [0, count) into at
 * most `jobs` contiguous chunks.  Runs inline when one chunk suffices; the
 * first exception thrown by any chunk is rethrown in the caller. */
inline void parallel_for_chunks(std::size_t count, unsigned jobs,
                                const std::function<void(std::size_t, std::size_t, unsigned)> &body) {
    if (count == 0) return;
    if (jobs == 0) jobs = 1;
    std::size_t chunks = std::min<std::size_t>(jobs, count);
    if (chunks <= 1) {
        body(0, count, 0);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(chunks);
    std::size_t base = count / chunks, extra = count % chunks;
    std::size_t begin = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t len = base + (c < extra ? 1 : 0);
        std::size_t end = begin + len;
        threads.emplace_back([&, begin, end, c] {
            try {
                body(begin, end, static_cast<unsigned>(c));
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto &t : threads) t.join();
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace hyperzero
