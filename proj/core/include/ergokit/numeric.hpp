#pragma once

#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace ergokit {

// All reductions in the library are pairwise (tree) sums over fixed chunk
// boundaries, so results are bit-identical across runs and thread counts.

// Fixed chunk size for deterministic parallel reductions.
inline constexpr std::size_t kChunkSize = 8192;

// Worker thread count used by parallel helpers. Defaults to the environment
// variable ERGOKIT_THREADS (or 1 when unset); settable at runtime.
int thread_count();
void set_thread_count(int n);

// Pairwise sum of a contiguous range; deterministic for a fixed input order.
double pairwise_sum(std::span<const double> values);

namespace detail {

// Runs work(begin, end) over consecutive [begin, end) chunks of [0, n),
// possibly on several threads. Each chunk must only write state owned by
// that chunk (e.g. disjoint output slices).
template <class Work>
void for_each_chunk(std::size_t n, Work&& work) {
    if (n == 0) return;
    const std::size_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
    const int threads = thread_count();
    if (threads <= 1 || n_chunks <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            const std::size_t b = c * kChunkSize;
            work(b, std::min(n, b + kChunkSize));
        }
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), n_chunks);
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w] {
            // Static stride schedule: assignment of chunks to workers is
            // irrelevant for determinism because outputs are per-chunk.
            for (std::size_t c = w; c < n_chunks; c += n_workers) {
                const std::size_t b = c * kChunkSize;
                work(b, std::min(n, b + kChunkSize));
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

// Deterministic (thread-count independent) sum of value_of(i) for i in
// [0, n): chunk-local pairwise sums combined by a pairwise sum over chunks.
template <class ValueOf>
double chunked_sum(std::size_t n, ValueOf&& value_of) {
    if (n == 0) return 0.0;
    const std::size_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<double> partial(n_chunks, 0.0);
    detail::for_each_chunk(n, [&](std::size_t b, std::size_t e) {
        std::vector<double> buf;
        buf.reserve(e - b);
        for (std::size_t i = b; i < e; ++i) buf.push_back(value_of(i));
        partial[b / kChunkSize] = pairwise_sum(buf);
    });
    return pairwise_sum(partial);
}

// Deterministic parallel map: out[i] = f(i) with out owned by the caller.
template <class Fill>
void parallel_fill(std::size_t n, Fill&& fill) {
    detail::for_each_chunk(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) fill(i);
    });
}

}  // namespace ergokit
