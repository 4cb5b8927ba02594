#ifndef ESCOP_PARALLEL_HPP
#define ESCOP_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace escop {

// Chunked parallel loop over [begin, end). The body receives disjoint index
// ranges, so results written per-index need no synchronization. The first
// exception thrown by any chunk is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t begin, std::size_t end, int workers, Body&& body) {
    const std::size_t count = end > begin ? end - begin : 0;
    if (count == 0) return;
    if (workers <= 1 || count == 1) {
        body(begin, end);
        return;
    }
    const std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    const std::size_t chunk = (count + nthreads - 1) / nthreads;

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t lo = begin + t * chunk;
        const std::size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([&, lo, hi] {
            try {
                body(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace escop

#endif
