#include "osr/operator.hpp"

#include <cassert>
#include <chrono>
#include <thread>

namespace osr {

namespace {
std::uint64_t now_us() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}
}  // namespace

OperatorInstance::OperatorInstance(OperatorSpec spec, const RuntimeConfig& cfg,
                                   std::size_t index)
    : spec_(std::move(spec)), index_(index) {
  switch (spec_.kind) {
    case OpKind::stateless:
    case OpKind::stateful:
      shared_ = std::make_unique<SharedWorklist>();
      break;
    case OpKind::partitioned:
      if (cfg.scheme == PartitionScheme::partitioned)
        parts_ = std::make_unique<PartitionedQueueSet>(spec_.buckets, spec_.buckets);
      else
        hybrid_ = std::make_unique<HybridQueue>(spec_.buckets);
      break;
  }
  if (spec_.kind != OpKind::stateful) {
    ReorderSink sink = [this](OutputUnit&& u) { emit_unit(std::move(u)); };
    if (cfg.reorder == ReorderKind::locked) {
      reorderer_ = std::make_unique<LockBasedReorderer>(std::move(sink));
    } else {
      auto nb = std::make_unique<NonBlockingReorderer>(cfg.buffer_capacity, std::move(sink));
      nonblocking_ = nb.get();
      reorderer_ = std::move(nb);
    }
  }
}

void OperatorInstance::set_downstream(Emit emit) { emit_ = std::move(emit); }

void OperatorInstance::enqueue_input(Tuple t) {
  t.serial = serial_counter_.assign();
  switch (spec_.kind) {
    case OpKind::stateless:
    case OpKind::stateful:
      shared_->enqueue(std::move(t));
      break;
    case OpKind::partitioned: {
      // Control tuples carry no key; route them through bucket 0. Emission
      // order is governed by serials, not processing order, so any bucket
      // is sound.
      std::size_t bucket = 0;
      if (!t.is_control()) bucket = spec_.partitioner(spec_.key_selector(t));
      if (parts_)
        parts_->add_input(std::move(t), bucket);
      else
        hybrid_->add_input(std::move(t), bucket);
      break;
    }
  }
}

void OperatorInstance::process_tuple(Tuple& t, std::vector<Tuple>& out) {
  if (t.is_control()) {
    if (t.is_marker() && marker_hook_) marker_hook_(t);
    out.push_back(t);  // markers and flush ride through as identity
    return;
  }
  spec_.process(t, out);
}

void OperatorInstance::emit_unit(OutputUnit&& u) {
  produced_.fetch_add(u.outputs.size(), std::memory_order_relaxed);
  emitted_.store(u.serial, std::memory_order_release);
  for (const Tuple& t : u.outputs) emit_(t);
}

void OperatorInstance::submit_unit(OutputUnit&& u) {
  if (!nonblocking_) {
    reorderer_->submit(std::move(u));
    return;
  }
  if (!nonblocking_->send(u)) {
    std::lock_guard<std::mutex> g(overflow_mu_);
    overflow_.emplace(u.serial, std::move(u));
    overflow_count_.fetch_add(1, std::memory_order_relaxed);
  }
  flush_overflow();
}

void OperatorInstance::flush_overflow() {
  if (!nonblocking_ || overflow_count_.load(std::memory_order_relaxed) == 0) return;
  std::unique_lock<std::mutex> lk(overflow_mu_, std::try_to_lock);
  if (!lk.owns_lock()) return;  // someone else is flushing
  while (!overflow_.empty()) {
    auto it = overflow_.begin();
    // next cannot pass an unsubmitted serial, so once the window reaches a
    // parked unit the send is guaranteed to land.
    if (it->first >= nonblocking_->next_serial() + nonblocking_->capacity()) break;
    OutputUnit u = std::move(it->second);
    overflow_.erase(it);
    overflow_count_.fetch_sub(1, std::memory_order_relaxed);
    nonblocking_->send(u);
  }
}

WorkReport OperatorInstance::work(std::size_t worker_id, std::size_t max_tuples) {
  WorkReport report;
  const std::uint64_t start = now_us();
  std::vector<Tuple> out;
  flush_overflow();

  auto handle = [&](Tuple& t) {
    out.clear();
    process_tuple(t, out);
    ++report.processed;
    report.produced += out.size();
    if (reorderer_) {
      OutputUnit u{t.serial, out};
      submit_unit(std::move(u));
    } else {
      OutputUnit u{t.serial, std::move(out)};
      emit_unit(std::move(u));
    }
  };

  switch (spec_.kind) {
    case OpKind::stateless: {
      Tuple t;
      while (report.processed < max_tuples && shared_->try_dequeue(t)) handle(t);
      break;
    }
    case OpKind::stateful: {
#ifndef NDEBUG
      assert(!stateful_busy_.exchange(true) && "stateful operator admits one worker");
#endif
      Tuple t;
      while (report.processed < max_tuples && shared_->try_dequeue(t)) handle(t);
#ifndef NDEBUG
      stateful_busy_.store(false);
#endif
      break;
    }
    case OpKind::partitioned: {
      if (hybrid_) {
        hybrid_->consume(handle, max_tuples);
      } else {
        const int slot = parts_->claim_slot();
        if (slot >= 0) {
          parts_->consume(static_cast<std::size_t>(slot), handle, max_tuples);
          parts_->release_slot(slot);
        }
      }
      break;
    }
  }

  flush_overflow();
  report.busy_us = now_us() - start;
  consumed_.fetch_add(report.processed, std::memory_order_relaxed);
  busy_us_.fetch_add(report.busy_us, std::memory_order_relaxed);
  return report;
}

std::int64_t OperatorInstance::worklist_size() const {
  // Parked output units count as pending work: the scheduler must keep
  // granting workers so the overflow keeps draining as the window moves.
  const std::int64_t parked = overflow_count_.load(std::memory_order_relaxed);
  if (shared_) return shared_->size() + parked;
  if (hybrid_) return hybrid_->size() + parked;
  return parts_->size() + parked;
}

bool OperatorInstance::drained() const {
  if (worklist_size() != 0) return false;
  const Serial issued = serial_counter_.issued();
  if (reorderer_) return reorderer_->next_serial() == issued + 1;
  return emitted_.load(std::memory_order_acquire) == issued;
}

OpRunStats OperatorInstance::stats() const {
  return {consumed_.load(), produced_.load(), busy_us_.load()};
}

}  // namespace osr
