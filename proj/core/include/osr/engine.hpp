#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "osr/config.hpp"
#include "osr/metrics.hpp"
#include "osr/operator.hpp"
#include "osr/operator_spec.hpp"
#include "osr/scheduler.hpp"

namespace osr {

/// Produces the i-th input tuple (0-based); the engine assigns markers and
/// the flush token itself.
using InputGen = std::function<Tuple(std::uint64_t)>;

/// Builds a fresh pipeline with fresh operator state. Operator state lives
/// in the spec's process closures, so every run must start from a new
/// spec; sharing one spec across runs would leak state between them.
using PipelineFactory = std::function<PipelineSpec()>;

struct RunResult {
  std::vector<Tuple> egress;            // empty when an egress probe is set
  std::uint64_t egress_data_count = 0;  // data tuples only
  std::vector<Marker> markers;
  std::optional<RunMetrics> metrics;
  std::vector<OpRunStats> op_stats;
  double wall_s = 0.0;
  std::vector<std::uint64_t> egress_per_second;  // duration runs only
};

/// Worker pool plus feeder executing one pipeline run to completion. Each
/// run feeds inputs at ingress, drives workers through the scheduler loop,
/// injects a flush token after the input set and drains until the token
/// reaches egress.
class Engine {
 public:
  Engine(PipelineFactory pipeline, RuntimeConfig cfg, Heuristic heuristic);

  /// Called per egress tuple (serialized) instead of storing the egress
  /// stream; use for large runs.
  void set_egress_probe(std::function<void(const Tuple&)> probe) { probe_ = std::move(probe); }

  /// Feeds `count` inputs, open-loop at `rate_tps` (0 = as fast as
  /// possible), drains and returns.
  RunResult run_count(const InputGen& gen, std::uint64_t count, double rate_tps = 0.0);

  /// Feeds inputs until the duration elapses, then flushes and drains.
  RunResult run_duration(const InputGen& gen, std::chrono::milliseconds duration,
                         double rate_tps = 0.0);

 private:
  RunResult run(const InputGen& gen, std::uint64_t count,
                std::chrono::milliseconds duration, double rate_tps);

  PipelineFactory pipeline_;
  RuntimeConfig cfg_;
  Heuristic heuristic_;
  std::function<void(const Tuple&)> probe_;
};

/// Reference egress stream: the pipeline executed with one worker. Used as
/// the sequential-equivalence oracle.
std::vector<Tuple> reference_egress(const PipelineFactory& pipeline, const RuntimeConfig& cfg,
                                    const InputGen& gen, std::uint64_t count);

/// Strips control tuples, leaving the data stream.
std::vector<Tuple> data_only(const std::vector<Tuple>& egress);

}  // namespace osr
