#include "wavespec/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace wavespec {

namespace {
std::atomic<int> g_default_threads{0};
}

int default_threads() {
    int n = g_default_threads.load();
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
}

void set_default_threads(int n) { g_default_threads.store(n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads) {
    if (threads <= 0) threads = default_threads();
    if (threads > static_cast<int>(n)) threads = static_cast<int>(n);
    if (n == 0) return;
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = n * static_cast<std::size_t>(t) / static_cast<std::size_t>(threads);
        const std::size_t hi = n * static_cast<std::size_t>(t + 1) / static_cast<std::size_t>(threads);
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace wavespec
