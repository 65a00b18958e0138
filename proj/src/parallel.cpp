#include "transops/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace transops {

namespace {
int g_threads = 1;
}

void set_thread_count(int n) { g_threads = n < 1 ? 1 : n; }
int thread_count() { return g_threads; }

void parallel_for_chunks(int64_t n, const std::function<void(int64_t, int64_t)>& fn) {
    if (n <= 0)
        return;
    const int64_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
    const int workers = (int)std::min<int64_t>(g_threads, nchunks);
    if (workers <= 1) {
        for (int64_t c = 0; c < nchunks; ++c)
            fn(c * kReduceChunk, std::min<int64_t>(n, (c + 1) * kReduceChunk));
        return;
    }
    std::atomic<int64_t> next{0};
    auto work = [&]() {
        for (;;) {
            int64_t c = next.fetch_add(1);
            if (c >= nchunks)
                return;
            fn(c * kReduceChunk, std::min<int64_t>(n, (c + 1) * kReduceChunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 0; t < workers - 1; ++t)
        pool.emplace_back(work);
    work();
    for (auto& th : pool)
        th.join();
}

double parallel_sum(int64_t n, const std::function<double(int64_t)>& term) {
    if (n <= 0)
        return 0.0;
    const int64_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(nchunks, 0.0);
    parallel_for_chunks(n, [&](int64_t begin, int64_t end) {
        double s = 0.0;
        for (int64_t i = begin; i < end; ++i)
            s += term(i);
        partial[begin / kReduceChunk] = s;
    });
    double total = 0.0;
    for (double p : partial)
        total += p;
    return total;
}

} // namespace transops
