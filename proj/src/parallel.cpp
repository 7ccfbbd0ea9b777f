#include "fracdn/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace fracdn {

namespace {

std::atomic<std::size_t>& thread_setting() {
  static std::atomic<std::size_t> value{std::max<std::size_t>(1, std::thread::hardware_concurrency())};
  return value;
}

}  // namespace

std::size_t thread_count() { return thread_setting().load(); }

void set_thread_count(std::size_t count) { thread_setting().store(std::max<std::size_t>(1, count)); }

void parallel_blocks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t blocks = (count + kRowBlock - 1) / kRowBlock;
  const std::size_t workers = std::min(thread_count(), blocks);
  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * kRowBlock;
    body(begin, std::min(count, begin + kRowBlock));
  };
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) run_block(b);
    });
  }
}

double deterministic_sum(std::size_t count, const std::function<double(std::size_t)>& row) {
  const std::size_t blocks = (count + kRowBlock - 1) / kRowBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_blocks(count, [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += row(i);
    partial[begin / kRowBlock] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace fracdn
