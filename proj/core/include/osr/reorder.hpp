#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "osr/tuple.hpp"

namespace osr {

/// Downstream sink. Runs while the emitter holds the exit section, so it
/// must be cheap and must not re-enter the same reorderer.
using ReorderSink = std::function<void(OutputUnit&&)>;

class Reorderer {
 public:
  virtual ~Reorderer() = default;

  /// Hands one unit to the reorderer, retrying until accepted. Emission of
  /// any ready units may happen inside this call.
  virtual void submit(OutputUnit u) = 0;

  /// Serial of the next unit to be emitted downstream.
  virtual Serial next_serial() const = 0;
};

/// Bounded circular buffer ordering concurrently produced OutputUnits into
/// strict serial order. A unit with serial t is accepted only while
/// next <= t < next + capacity; emission is guarded by an atomic flag with
/// try-lock semantics, so no caller ever waits for another.
class NonBlockingReorderer final : public Reorderer {
 public:
  /// capacity must be a power of two.
  NonBlockingReorderer(std::size_t capacity, ReorderSink sink);
  ~NonBlockingReorderer() override;

  NonBlockingReorderer(const NonBlockingReorderer&) = delete;
  NonBlockingReorderer& operator=(const NonBlockingReorderer&) = delete;

  /// Stores u at slot (serial mod capacity) iff its serial is inside the
  /// current window. On success u is consumed; on failure u is untouched
  /// and the caller must retry later.
  bool try_add(OutputUnit& u);

  /// Emits as many consecutive buffered units as possible starting at
  /// `next`. Returns immediately with 0 if another caller holds the exit
  /// section. Returns the number of units emitted by this call.
  std::size_t send_pending();

  /// try_add followed by send_pending; returns the try_add result.
  bool send(OutputUnit& u);

  void submit(OutputUnit u) override;
  Serial next_serial() const override { return next_.load(std::memory_order_acquire); }
  std::size_t capacity() const { return mask_ + 1; }

  /// Quiescent-state inspection for tests: non-empty slot indices.
  std::vector<std::size_t> occupied_slots() const;

 private:
  std::size_t mask_;
  std::unique_ptr<std::atomic<OutputUnit*>[]> slots_;
  std::atomic<Serial> next_{1};
  std::atomic_flag flag_ = ATOMIC_FLAG_INIT;
  ReorderSink sink_;
};

/// Baseline: one mutex guarding both the `next` counter and a waiting map.
/// Same emission guarantee, but senders block while another sender drains.
class LockBasedReorderer final : public Reorderer {
 public:
  explicit LockBasedReorderer(ReorderSink sink) : sink_(std::move(sink)) {}

  void send(OutputUnit u);

  void submit(OutputUnit u) override { send(std::move(u)); }
  Serial next_serial() const override {
    std::lock_guard<std::mutex> g(mu_);
    return next_;
  }

 private:
  mutable std::mutex mu_;
  Serial next_ = 1;
  std::map<Serial, OutputUnit> waiting_;
  ReorderSink sink_;
};

}  // namespace osr
