#include "osr/worklist.hpp"

#include <memory>

namespace osr {

HybridQueue::HybridQueue(std::size_t buckets)
    : queues_(buckets), counts_(buckets) {
  assert(buckets >= 1);
}

void HybridQueue::add_input(Tuple t, std::size_t bucket) {
  assert(bucket < queues_.size());
#ifndef NDEBUG
  assert(!producing_.exchange(true) && "hybrid queue requires a single producer");
#endif
  queues_[bucket].push(std::move(t));
  master_.push(static_cast<std::uint32_t>(bucket));
  size_.fetch_add(1, std::memory_order_relaxed);
#ifndef NDEBUG
  producing_.store(false);
#endif
}

std::size_t HybridQueue::consume(const std::function<void(Tuple&)>& operate,
                                 std::size_t budget) {
  std::size_t processed = 0;
  std::uint32_t b;
  while (processed < budget && master_.try_pop(b)) {
    if (counts_[b].v.fetch_add(1) == 0) {
      // This worker is now the bucket's active worker; drain delegated
      // tuples to completion regardless of budget.
      do {
        Tuple t;
        [[maybe_unused]] const bool ok = queues_[b].try_pop(t);
        assert(ok && "bucket dequeue must succeed: tuple enqueued before master index");
        operate(t);
        size_.fetch_sub(1, std::memory_order_relaxed);
        ++processed;
      } while (counts_[b].v.fetch_sub(1) > 1);
    }
    // else: delegated to the active worker; move on to the next index.
  }
  return processed;
}

PartitionedQueueSet::PartitionedQueueSet(std::size_t buckets, std::size_t slots)
    : queues_(buckets), cursor_(slots, 0) {
  assert(buckets >= 1 && slots >= 1);
  slot_busy_.reserve(slots);
  for (std::size_t i = 0; i < slots; ++i)
    slot_busy_.push_back(std::make_unique<std::atomic<bool>>(false));
}

void PartitionedQueueSet::add_input(Tuple t, std::size_t bucket) {
  assert(bucket < queues_.size());
  queues_[bucket].push(std::move(t));
  size_.fetch_add(1, std::memory_order_relaxed);
}

std::size_t PartitionedQueueSet::consume(std::size_t slot,
                                         const std::function<void(Tuple&)>& operate,
                                         std::size_t budget) {
  assert(slot < slots());
  const std::size_t nslots = slots();
  std::vector<std::size_t> owned;
  for (std::size_t k = slot; k < queues_.size(); k += nslots) owned.push_back(k);
  if (owned.empty()) return 0;

  std::size_t processed = 0;
  std::size_t idle_streak = 0;
  std::size_t& cur = cursor_[slot];
  while (processed < budget && idle_streak < owned.size()) {
    const std::size_t k = owned[cur % owned.size()];
    ++cur;
    Tuple t;
    if (queues_[k].try_pop(t)) {
      size_.fetch_sub(1, std::memory_order_relaxed);
      operate(t);
      ++processed;
      idle_streak = 0;
    } else {
      ++idle_streak;
    }
  }
  return processed;
}

int PartitionedQueueSet::claim_slot() {
  const std::size_t n = slots();
  const std::uint32_t start = rotor_.fetch_add(1, std::memory_order_relaxed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = (start + i) % n;
    bool expected = false;
    if (slot_busy_[s]->compare_exchange_strong(expected, true)) return static_cast<int>(s);
  }
  return -1;
}

void PartitionedQueueSet::release_slot(int slot) {
  assert(slot >= 0 && static_cast<std::size_t>(slot) < slots());
  slot_busy_[slot]->store(false, std::memory_order_release);
}

}  // namespace osr
