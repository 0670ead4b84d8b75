#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace qnorm {

inline unsigned default_threads() {
    return std::max(1u, std::thread::hardware_concurrency());
}

// Splits [first, last) into contiguous chunks, runs `work(begin, end)` on each
// (one thread per chunk) and concatenates the returned vectors in range order,
// so the result does not depend on the thread count.
template <typename Work>
auto parallel_collect(std::uint64_t first, std::uint64_t last, unsigned threads, Work work)
    -> decltype(work(first, last)) {
    using Result = decltype(work(first, last));
    if (last <= first) return Result{};
    const std::uint64_t span = last - first;
    threads = std::max(1u, threads);
    if (threads == 1 || span < 2 * threads) return work(first, last);

    std::vector<Result> parts(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::uint64_t step = (span + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t begin = first + t * step;
        const std::uint64_t end = std::min(last, begin + step);
        if (begin >= end) break;
        pool.emplace_back([&parts, &work, t, begin, end] { parts[t] = work(begin, end); });
    }
    for (auto& th : pool) th.join();

    Result merged;
    for (auto& part : parts) merged.insert(merged.end(), part.begin(), part.end());
    return merged;
}

}  // namespace qnorm
