#pragma once

#include <cstdint>

#include "osr/operator_spec.hpp"

namespace osr {

/// Knobs for benchmark operators: per-tuple processing cost, selectivity,
/// payload and per-bucket state footprint.
struct ParametricParams {
  double cost_us = 100.0;
  double selectivity = 1.0;
  std::size_t tuple_size = 64;   // bytes of payload touched per tuple
  std::size_t state_size = 64;   // bytes per bucket (partitioned only)
};

/// Deterministic 64-bit mixer used by the parametric operators so that
/// output payloads are a pure function of inputs.
std::uint64_t mix64(std::uint64_t x);

/// Number of outputs emitted for the input with serial t at selectivity
/// sel: floor(t*sel) - floor((t-1)*sel). Summing over 1..n gives
/// floor(n*sel), so long-run output rate matches sel exactly and the
/// per-serial emission pattern is independent of processing order.
std::size_t outputs_for_serial(Serial t, double sel);

/// Calibrated busy-work block. `run` performs matrix-vector rounds sized
/// at construction so one call costs approximately cost_us on this
/// machine.
class MatrixWork {
 public:
  explicit MatrixWork(double cost_us);
  std::uint64_t run(std::uint64_t seed) const;

  /// Measured cost of a single matrix round, microseconds (process-wide,
  /// measured once).
  static double unit_cost_us();

 private:
  std::size_t rounds_;
};

OperatorSpec make_parametric_stateless(const ParametricParams& p);
OperatorSpec make_parametric_stateful(const ParametricParams& p);

/// Partitioned-stateful parametric operator over `buckets` buckets using
/// the given partitioner (defaults to hash when empty).
OperatorSpec make_parametric_partitioned(const ParametricParams& p, std::size_t buckets,
                                         std::function<std::size_t(Key)> partitioner = {});

}  // namespace osr
