// Microbenchmarks for the concurrent structures: reorderer send cost and
// hybrid vs partitioned queue consume cost.
#include <benchmark/benchmark.h>

#include <atomic>
#include <random>
#include <vector>

#include "osr/reorder.hpp"
#include "osr/worklist.hpp"

using namespace osr;

static void BM_NonBlockingReorderer_InOrder(benchmark::State& state) {
  std::uint64_t sunk = 0;
  NonBlockingReorderer rb(1024, [&](OutputUnit&& u) { sunk += u.serial; });
  Serial s = 1;
  for (auto _ : state) {
    OutputUnit u{.serial = s++};
    rb.send(u);
  }
  benchmark::DoNotOptimize(sunk);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NonBlockingReorderer_InOrder);

static void BM_LockBasedReorderer_InOrder(benchmark::State& state) {
  std::uint64_t sunk = 0;
  LockBasedReorderer rb([&](OutputUnit&& u) { sunk += u.serial; });
  Serial s = 1;
  for (auto _ : state) rb.send(OutputUnit{.serial = s++});
  benchmark::DoNotOptimize(sunk);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LockBasedReorderer_InOrder);

// Contended send: each thread owns a disjoint residue class of serials, so
// together they cover 1..N while racing on the exit section.
static void BM_NonBlockingReorderer_Contended(benchmark::State& state) {
  static NonBlockingReorderer* rb = nullptr;
  static std::atomic<Serial> issue{1};
  if (state.thread_index() == 0) {
    rb = new NonBlockingReorderer(4096, [](OutputUnit&&) {});
    issue.store(1);
  }
  for (auto _ : state) {
    OutputUnit u{.serial = issue.fetch_add(1, std::memory_order_relaxed)};
    rb->submit(std::move(u));
  }
  state.SetItemsProcessed(state.iterations());
  if (state.thread_index() == 0) {
    delete rb;
    rb = nullptr;
  }
}
BENCHMARK(BM_NonBlockingReorderer_Contended)->ThreadRange(1, 8)->UseRealTime();

static void BM_HybridQueue_AddConsume(benchmark::State& state) {
  const std::size_t buckets = 16;
  HybridQueue hq(buckets);
  std::mt19937_64 rng(1);
  std::uint64_t sunk = 0;
  auto operate = [&](Tuple& t) { sunk += t.value; };
  for (auto _ : state) {
    hq.add_input(Tuple{.value = 1, .key = rng() % buckets}, rng() % buckets);
    hq.consume(operate, 1);
  }
  benchmark::DoNotOptimize(sunk);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HybridQueue_AddConsume);

static void BM_PartitionedQueueSet_AddConsume(benchmark::State& state) {
  const std::size_t buckets = 16;
  PartitionedQueueSet pq(buckets, 1);
  std::mt19937_64 rng(1);
  std::uint64_t sunk = 0;
  auto operate = [&](Tuple& t) { sunk += t.value; };
  for (auto _ : state) {
    pq.add_input(Tuple{.value = 1, .key = rng() % buckets}, rng() % buckets);
    pq.consume(0, operate, 1);
  }
  benchmark::DoNotOptimize(sunk);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PartitionedQueueSet_AddConsume);

BENCHMARK_MAIN();
