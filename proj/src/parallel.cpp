#include "singlet/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>
#include <vector>

namespace singlet {

namespace {
std::atomic<unsigned> g_jobs{0};
}

void set_parallelism(unsigned jobs) { g_jobs.store(jobs); }

unsigned parallelism() {
    unsigned j = g_jobs.load();
    if (j == 0) {
        j = std::thread::hardware_concurrency();
        if (j == 0) j = 1;
    }
    return j;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = parallelism();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(used);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < used; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += used) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace singlet
