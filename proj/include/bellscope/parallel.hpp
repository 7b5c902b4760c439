#pragma once

// Deterministic parallel map-reduce over an index range: per-index work must
// be independent, partial results are combined in chunk order so the outcome
// never depends on scheduling.

#include <algorithm>
#include <future>
#include <vector>

namespace bellscope {

template <typename Result, typename PerIndex, typename Combine>
Result parallel_map_reduce(long count, Result init, PerIndex per_index, Combine combine) {
    if (count <= 0) return init;
    // chunk layout is a pure function of count: reduction grouping must not
    // depend on the machine or the schedule
    const long chunks = std::min<long>(count, 8);
    if (chunks <= 1) {
        Result acc = init;
        for (long i = 0; i < count; ++i) acc = combine(std::move(acc), per_index(i));
        return acc;
    }
    std::vector<std::future<Result>> futures;
    futures.reserve(static_cast<std::size_t>(chunks));
    const long step = (count + chunks - 1) / chunks;
    for (long c = 0; c < chunks; ++c) {
        const long lo = c * step;
        const long hi = std::min(count, lo + step);
        futures.push_back(std::async(std::launch::async, [=]() {
            Result acc = init;
            for (long i = lo; i < hi; ++i) acc = combine(std::move(acc), per_index(i));
            return acc;
        }));
    }
    Result acc = init;
    for (auto& f : futures) acc = combine(std::move(acc), f.get());
    return acc;
}

}  // namespace bellscope
