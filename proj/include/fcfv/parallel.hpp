#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace fcfv {

/// Worker cap: FCFV_THREADS if set and positive, otherwise the hardware
/// concurrency. set_max_threads() overrides both.
[[nodiscard]] int max_threads();
void set_max_threads(int n);

/// Contiguous ranges [begin, end) covering [0, n), in order.
struct Chunk {
    int begin;
    int end;
};
[[nodiscard]] std::vector<Chunk> split_range(int n, int parts);

/// Runs body(chunk_index, begin, end) over split_range(n, max_threads()).
/// Chunk i always covers the same range for a given thread count, and callers
/// that merge per-chunk results in chunk order get thread-count-independent
/// output. The first exception thrown by a worker is rethrown.
template <class Body>
void parallel_for(int n, Body&& body)
{
    const auto chunks = split_range(n, std::min(max_threads(), std::max(1, n / 64)));
    if (chunks.size() <= 1) {
        for (std::size_t c = 0; c < chunks.size(); ++c) body(static_cast<int>(c), chunks[c].begin, chunks[c].end);
        return;
    }
    std::vector<std::exception_ptr> errors(chunks.size());
    std::vector<std::thread> workers;
    workers.reserve(chunks.size());
    for (std::size_t c = 0; c < chunks.size(); ++c)
        workers.emplace_back([&, c] {
            try {
                body(static_cast<int>(c), chunks[c].begin, chunks[c].end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Number of chunks parallel_for(n, ...) will use.
[[nodiscard]] inline int chunk_count(int n)
{
    return static_cast<int>(split_range(n, std::min(max_threads(), std::max(1, n / 64))).size());
}

}  // namespace fcfv
