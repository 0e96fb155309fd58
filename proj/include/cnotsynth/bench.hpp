#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "cnotsynth/portfolio.hpp"

namespace cnot {

struct BenchRow {
  std::size_t n = 0;
  std::string method;
  std::size_t sample = 0;
  std::size_t gen_depth = 0;
  std::optional<std::size_t> depth, cnots;  // absent: method failed
  double ms = 0;
};

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::size_t workers = std::min(jobs, count);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  for (std::thread& t : pool) t.join();
}

}  // namespace detail

/// One benchmark task: run every method on the operator generated from a
/// random circuit of the given depth. All randomness derives from
/// (seed, task id), so results do not depend on scheduling.
inline std::vector<BenchRow> bench_tasks(const std::vector<std::pair<std::size_t, std::size_t>>& tasks,
                                         std::size_t samples,
                                         const std::vector<std::string>& methods,
                                         std::uint64_t seed, std::size_t jobs) {
  // tasks: (n, gen_depth); each expands into `samples` instances
  std::size_t total = tasks.size() * samples;
  std::vector<std::vector<BenchRow>> rows(total);
  detail::parallel_for(total, jobs, [&](std::size_t idx) {
    std::size_t ti = idx / samples, sample = idx % samples;
    auto [n, gen_depth] = tasks[ti];
    Rng task_rng = Rng::for_task(seed, idx);
    BitMatrix a = simulate(random_circuit(n, gen_depth, task_rng.next()));
    for (const std::string& tag : methods) {
      BenchRow row;
      row.n = n;
      row.method = tag;
      row.sample = sample;
      row.gen_depth = gen_depth;
      auto t0 = std::chrono::steady_clock::now();
      std::optional<SynthesisResult> r = run_method(tag, a, task_rng.next());
      auto t1 = std::chrono::steady_clock::now();
      row.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      if (r) {
        if (!r->implements(a))
          throw std::logic_error("method '" + tag + "' failed output verification");
        row.depth = r->depth;
        row.cnots = r->cnot_count;
      }
      rows[idx].push_back(std::move(row));
    }
  });
  std::vector<BenchRow> flat;
  for (auto& group : rows)
    for (auto& r : group) flat.push_back(std::move(r));
  return flat;
}

/// Worst-case protocol: operators from depth-2n random circuits, n ranging
/// over [n_min, n_max].
inline std::vector<BenchRow> bench_worst(std::size_t n_min, std::size_t n_max,
                                         std::size_t samples,
                                         const std::vector<std::string>& methods,
                                         std::uint64_t seed, std::size_t jobs) {
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t n = n_min; n <= n_max; ++n) tasks.emplace_back(n, 2 * n);
  return bench_tasks(tasks, samples, methods, seed, jobs);
}

/// Close-to-optimal protocol: fixed n, generation depth sweeping a range.
inline std::vector<BenchRow> bench_sweep(std::size_t n, std::size_t depth_min,
                                         std::size_t depth_max, std::size_t samples,
                                         const std::vector<std::string>& methods,
                                         std::uint64_t seed, std::size_t jobs) {
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t d = depth_min; d <= depth_max; ++d) tasks.emplace_back(n, d);
  return bench_tasks(tasks, samples, methods, seed, jobs);
}

/// CSV emission; zero_ms zeroes the timing column so byte-identical output
/// under a fixed seed can be asserted.
inline void write_csv(std::ostream& out, const std::vector<BenchRow>& rows, bool zero_ms) {
  out << "n,method,sample,gen_depth,depth,cnots,ms\n";
  for (const BenchRow& r : rows) {
    out << r.n << ',' << r.method << ',' << r.sample << ',' << r.gen_depth << ',';
    if (r.depth) out << *r.depth;
    out << ',';
    if (r.cnots) out << *r.cnots;
    out << ',';
    if (zero_ms)
      out << 0;
    else
      out << static_cast<long long>(r.ms * 1000) / 1000.0;
    out << '\n';
  }
}

}  // namespace cnot
