#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace spa::detail {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Calls body(begin, end, part) on `parts` contiguous slices of [0, count).
// The slicing depends only on (count, parts); with parts == 1 it runs inline.
template <class Body>
void parallel_slices(std::size_t count, unsigned parts, Body&& body) {
    parts = std::max(1u, parts);
    if (parts == 1 || count <= 1) {
        body(std::size_t{0}, count, 0u);
        return;
    }
    std::vector<std::exception_ptr> errors(parts);
    std::vector<std::thread> pool;
    pool.reserve(parts);
    for (unsigned t = 0; t < parts; ++t) {
        const std::size_t begin = count * t / parts;
        const std::size_t end = count * (t + 1) / parts;
        pool.emplace_back([&, begin, end, t] {
            try {
                body(begin, end, t);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace spa::detail
