#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace primorbit {

int effective_threads(int requested);

// Requested global parallelism degree (0 = hardware concurrency).
void set_num_threads(int n);
int num_threads();

// Splits [lo, hi) into chunks of `grain` and dispatches them to workers.
// Workers own a Local each; the caller merges the locals afterwards in
// worker-index order, so results must not depend on chunk scheduling.
template <typename Local, typename Body>
std::vector<Local> parallel_chunks(std::int64_t lo, std::int64_t hi, std::int64_t grain,
                                   int threads, const std::function<Local()>& make_local,
                                   Body body) {
    threads = effective_threads(threads);
    if (grain < 1) grain = 1;
    std::vector<Local> locals;
    locals.reserve(threads);
    for (int t = 0; t < threads; ++t) locals.push_back(make_local());
    if (threads == 1) {
        for (std::int64_t c = lo; c < hi; c += grain)
            body(locals[0], c, std::min(hi, c + grain));
        return locals;
    }
    std::atomic<std::int64_t> next{lo};
    auto work = [&](int idx) {
        while (true) {
            std::int64_t c = next.fetch_add(grain);
            if (c >= hi) break;
            body(locals[idx], c, std::min(hi, c + grain));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();
    return locals;
}

} // namespace primorbit
