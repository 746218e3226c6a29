#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "osr/config.hpp"
#include "osr/operator_spec.hpp"
#include "osr/reorder.hpp"
#include "osr/tuple.hpp"
#include "osr/worklist.hpp"

namespace osr {

struct WorkReport {
  std::size_t processed = 0;
  std::size_t produced = 0;
  std::uint64_t busy_us = 0;
};

struct OpRunStats {
  std::uint64_t consumed = 0;
  std::uint64_t produced = 0;
  std::uint64_t busy_us = 0;
};

/// An executable operator: its spec, the inlet matching its kind, a serial
/// counter for arriving inputs, and (for stateless/partitioned kinds) the
/// reorderer that restores output order. Stateful operators have no
/// reorderer; their single worker emits directly in processing order.
class OperatorInstance {
 public:
  /// Receives each output tuple in emission order; calls are serialized by
  /// the reorderer's exit section (or the stateful single worker).
  using Emit = std::function<void(const Tuple&)>;

  OperatorInstance(OperatorSpec spec, const RuntimeConfig& cfg, std::size_t index);

  void set_downstream(Emit emit);

  /// Invoked when a marker begins processing at this operator; used by the
  /// engine to stamp first-processing time on operator 0.
  void set_marker_hook(std::function<void(const Tuple&)> hook) { marker_hook_ = std::move(hook); }

  /// Assigns the next serial and routes the tuple to this operator's
  /// inlet. For a partitioned inlet the caller must be the single
  /// serialized upstream producer.
  void enqueue_input(Tuple t);

  /// Consumes up to max_tuples from the inlet per the kind's discipline
  /// and pushes outputs downstream in serial order. Never blocks on an
  /// empty inlet.
  WorkReport work(std::size_t worker_id, std::size_t max_tuples);

  std::int64_t worklist_size() const;
  const OperatorSpec& spec() const { return spec_; }
  std::size_t index() const { return index_; }
  Serial serials_issued() const { return serial_counter_.issued(); }

  /// True once every accepted serial has been emitted downstream.
  bool drained() const;

  OpRunStats stats() const;

 private:
  void process_tuple(Tuple& t, std::vector<Tuple>& out);
  void emit_unit(OutputUnit&& u);
  void submit_unit(OutputUnit&& u);
  void flush_overflow();

  OperatorSpec spec_;
  std::size_t index_;
  SerialCounter serial_counter_;
  Emit emit_;
  std::function<void(const Tuple&)> marker_hook_;

  // Inlet, by kind.
  std::unique_ptr<SharedWorklist> shared_;        // stateless + stateful
  std::unique_ptr<HybridQueue> hybrid_;           // partitioned, hybrid scheme
  std::unique_ptr<PartitionedQueueSet> parts_;    // partitioned, baseline scheme

  std::unique_ptr<Reorderer> reorderer_;          // null for stateful
  NonBlockingReorderer* nonblocking_ = nullptr;   // reorderer_ downcast, if any
  std::atomic<Serial> emitted_{0};                // serial of last emitted unit

  // Units whose serial fell outside the reorder window. The inlet
  // disciplines (hybrid bucket drain, partitioned round-robin) process out
  // of serial order, so a worker can run arbitrarily far ahead of the
  // window; parking the unit instead of spinning keeps that worker able to
  // process the straggler serials the window is waiting on. Units are
  // re-submitted, oldest first, as the window advances.
  std::mutex overflow_mu_;
  std::map<Serial, OutputUnit> overflow_;
  std::atomic<std::int64_t> overflow_count_{0};

  std::atomic<std::uint64_t> consumed_{0};
  std::atomic<std::uint64_t> produced_{0};
  std::atomic<std::uint64_t> busy_us_{0};
#ifndef NDEBUG
  std::atomic<bool> stateful_busy_{false};
#endif
};

}  // namespace osr
