#pragma once

#include <atomic>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <tbb/concurrent_queue.h>

#include "osr/tuple.hpp"

namespace osr {

/// Multi-producer multi-consumer FIFO worklist for stateless and stateful
/// operators, with an approximate size counter for the scheduler.
class SharedWorklist {
 public:
  void enqueue(Tuple t) {
    queue_.push(std::move(t));
    size_.fetch_add(1, std::memory_order_relaxed);
  }

  bool try_dequeue(Tuple& t) {
    if (!queue_.try_pop(t)) return false;
    size_.fetch_sub(1, std::memory_order_relaxed);
    return true;
  }

  std::int64_t size() const { return size_.load(std::memory_order_relaxed); }

 private:
  tbb::concurrent_queue<Tuple> queue_;
  std::atomic<std::int64_t> size_{0};
};

/// Worklist for a partitioned-stateful operator: a master queue of bucket
/// indices plus one tuple queue per bucket, with per-bucket delegation
/// counters. A worker that dequeues a bucket whose counter is already
/// nonzero delegates the tuple to the bucket's active worker and moves on,
/// so no worker ever waits on a busy bucket.
class HybridQueue {
 public:
  explicit HybridQueue(std::size_t buckets);

  /// Single producer only (upstream emission is serialized). The tuple is
  /// enqueued to its bucket queue strictly before the bucket index goes to
  /// the master queue, so a consumer's inner dequeue always succeeds.
  void add_input(Tuple t, std::size_t bucket);

  /// Drains bucket indices from the master queue, processing or delegating
  /// per the counter protocol. `budget` counts only tuples processed by
  /// this caller; an active bucket drain always runs to completion even if
  /// the budget is exhausted mid-bucket. Returns tuples processed here.
  std::size_t consume(const std::function<void(Tuple&)>& operate, std::size_t budget);

  std::int64_t size() const { return size_.load(std::memory_order_relaxed); }
  std::size_t buckets() const { return counts_.size(); }

  /// Test inspection: pending delegation count of one bucket.
  std::int64_t count_of(std::size_t bucket) const {
    return counts_[bucket].v.load(std::memory_order_relaxed);
  }

 private:
  struct alignas(64) Counter {
    std::atomic<std::int64_t> v{0};
  };

  tbb::concurrent_queue<std::uint32_t> master_;
  std::vector<tbb::concurrent_queue<Tuple>> queues_;
  std::vector<Counter> counts_;
  std::atomic<std::int64_t> size_{0};
#ifndef NDEBUG
  std::atomic<bool> producing_{false};
#endif
};

/// Baseline: one FIFO queue per bucket with a static slot -> bucket-set
/// assignment. A consumer first claims a free slot, then round-robins over
/// that slot's buckets. Slots rotate across claims so every bucket is
/// eventually served even when fewer workers than slots are active.
class PartitionedQueueSet {
 public:
  PartitionedQueueSet(std::size_t buckets, std::size_t slots);

  /// Single producer only.
  void add_input(Tuple t, std::size_t bucket);

  /// Processes up to `budget` tuples round-robin across the non-empty
  /// buckets owned by `slot` (bucket k belongs to slot k mod slots).
  std::size_t consume(std::size_t slot, const std::function<void(Tuple&)>& operate,
                      std::size_t budget);

  /// Claims a currently free slot, rotating the starting point across
  /// calls. Returns -1 if every slot is busy.
  int claim_slot();
  void release_slot(int slot);

  std::int64_t size() const { return size_.load(std::memory_order_relaxed); }
  std::size_t buckets() const { return queues_.size(); }
  std::size_t slots() const { return slot_busy_.size(); }

 private:
  std::vector<tbb::concurrent_queue<Tuple>> queues_;
  std::vector<std::unique_ptr<std::atomic<bool>>> slot_busy_;
  std::vector<std::size_t> cursor_;  // per-slot round-robin position
  std::atomic<std::uint32_t> rotor_{0};
  std::atomic<std::int64_t> size_{0};
};

}  // namespace osr
