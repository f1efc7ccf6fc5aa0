#include "toric/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace toric {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int k) { g_max_threads.store(k < 0 ? 0 : k); }

int max_threads() {
    int k = g_max_threads.load();
    if (k == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        k = hw == 0 ? 1 : static_cast<int>(hw);
    }
    return k;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const int workers = max_threads();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);  // drain remaining work
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t spawn =
        std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    pool.reserve(spawn);
    for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace toric
