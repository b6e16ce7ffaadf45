#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ipgm/maintenance.hpp"
#include "ipgm/search.hpp"
#include "ipgm/workload.hpp"

namespace {

using namespace ipgm;

constexpr std::size_t kDim = 32;

std::vector<std::vector<float>> rows(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> n;
  std::vector<std::vector<float>> out(count, std::vector<float>(kDim));
  for (auto& r : out)
    for (auto& x : r) x = n(rng);
  return out;
}

OnlineIndex make_index(std::size_t size, DeleteStrategy strategy) {
  OnlineIndex index(kDim, {.k = 64, .d = 16, .strategy = strategy, .seed = 1});
  for (const auto& r : rows(size, 1)) index.insert(r);
  return index;
}

void BM_Search(benchmark::State& state) {
  auto index = make_index(static_cast<std::size_t>(state.range(0)), DeleteStrategy::GlobalReconnect);
  auto queries = rows(256, 2);
  std::size_t i = 0, dc = 0;
  for (auto _ : state) {
    auto r = index.query(queries[i % queries.size()], 64, i);
    dc += r.distance_computations;
    benchmark::DoNotOptimize(r.topk.data());
    ++i;
  }
  state.counters["dc/query"] = benchmark::Counter(static_cast<double>(dc) / static_cast<double>(i));
}
BENCHMARK(BM_Search)->Arg(2000)->Arg(10000);

void BM_Insert(benchmark::State& state) {
  auto extra = rows(4096, 3);
  std::size_t i = 0;
  auto index = make_index(static_cast<std::size_t>(state.range(0)), DeleteStrategy::GlobalReconnect);
  for (auto _ : state) {
    if (i == extra.size()) {
      state.PauseTiming();
      index = make_index(static_cast<std::size_t>(state.range(0)), DeleteStrategy::GlobalReconnect);
      i = 0;
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(index.insert(extra[i++]));
  }
}
BENCHMARK(BM_Insert)->Arg(2000)->Arg(10000);

// One delete per iteration; the index is rebuilt off the clock once half of it is gone.
void BM_Delete(benchmark::State& state) {
  const auto strategy = static_cast<DeleteStrategy>(state.range(0));
  const std::size_t size = 4000;
  auto index = make_index(size, strategy);
  std::vector<VectorId> order = index.live_ids();
  std::shuffle(order.begin(), order.end(), std::mt19937_64(5));
  std::size_t next = 0;
  for (auto _ : state) {
    if (next == size / 2) {
      state.PauseTiming();
      index = make_index(size, strategy);
      next = 0;
      state.ResumeTiming();
    }
    index.remove(order[next++]);
    index.flush();
  }
  state.SetLabel(std::string(to_string(strategy)));
}
BENCHMARK(BM_Delete)
    ->Arg(static_cast<int>(DeleteStrategy::Pure))
    ->Arg(static_cast<int>(DeleteStrategy::Mask))
    ->Arg(static_cast<int>(DeleteStrategy::LocalReconnect))
    ->Arg(static_cast<int>(DeleteStrategy::GlobalReconnect))
    ->Iterations(200);
BENCHMARK(BM_Delete)->Arg(static_cast<int>(DeleteStrategy::Rebuild))->Iterations(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
