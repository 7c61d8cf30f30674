#pragma once

#include <cstddef>
#include <exception>
#include <future>
#include <thread>
#include <vector>

namespace loschmidt::detail {

// Runs fn(0..n-1) on up to `threads` workers (0 = hardware concurrency).
// Work items must be independent; any exception is rethrown on the caller.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, int threads = 0) {
    if (n == 0) return;
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        }));
    }
    std::exception_ptr err;
    for (auto& f : futures) {
        try {
            f.get();
        } catch (...) {
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace loschmidt::detail
