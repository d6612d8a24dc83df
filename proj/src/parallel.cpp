#include "primorbit/parallel.hpp"

#include <atomic>

namespace primorbit {

namespace {
std::atomic<int> g_threads{0};
}

void set_num_threads(int n) { g_threads.store(n < 0 ? 0 : n); }

int num_threads() { return g_threads.load(); }

int effective_threads(int requested) {
    int n = requested > 0 ? requested : g_threads.load();
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return n;
}

} // namespace primorbit
