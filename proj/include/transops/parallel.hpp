#pragma once

#include <cstdint>
#include <functional>

namespace transops {

/// Worker count for the chunked loops below (1 = serial). Results are
/// bit-identical for every setting: work is split into fixed-size chunks
/// and partials are combined in chunk order regardless of thread count.
void set_thread_count(int n);
int thread_count();

inline constexpr int kReduceChunk = 512;

/// Runs fn(begin, end) over [0, n) in chunks of kReduceChunk.
void parallel_for_chunks(int64_t n, const std::function<void(int64_t, int64_t)>& fn);

/// Deterministic sum of term(i) for i in [0, n).
double parallel_sum(int64_t n, const std::function<double(int64_t)>& term);

} // namespace transops
