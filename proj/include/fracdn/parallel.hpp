#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fracdn {

/// Number of worker threads used by the pair-sum kernels. Defaults to the
/// hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t count);

/// Rows are grouped into fixed-size blocks. The grouping does not depend on
/// the thread count, so reductions built on it are bit-identical for any
/// number of threads.
inline constexpr std::size_t kRowBlock = 32;

/// Calls `body(begin, end)` for every block of `[0, count)`, possibly in
/// parallel.
void parallel_blocks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& body);

/// Sums `row(i)` over `[0, count)`. Each block is summed sequentially, then
/// the block partials are added in index order.
double deterministic_sum(std::size_t count, const std::function<double(std::size_t)>& row);

}  // namespace fracdn
