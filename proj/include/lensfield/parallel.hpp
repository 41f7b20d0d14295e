#pragma once

#include <thread>
#include <vector>

namespace lensfield {

// Runs fn(row) for every row. Rows are striped across workers; callers must
// only write pixels of their own row, which keeps output independent of the
// worker count and of scheduling.
template <typename Fn>
inline void parallel_rows(int height, int threads, Fn&& fn) {
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1)
        threads = 1;
    if (threads == 1 || height <= 1) {
        for (int y = 0; y < height; ++y)
            fn(y);
        return;
    }
    int workers = std::min(threads, height);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([=, &fn] {
            for (int y = w; y < height; y += workers)
                fn(y);
        });
    }
    for (auto& t : pool)
        t.join();
}

}  // namespace lensfield
