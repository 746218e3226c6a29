#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace osr {

enum class ReorderKind { nonblocking, locked };
enum class PartitionScheme { hybrid, partitioned, shared };

struct RuntimeConfig {
  std::size_t worker_count = 4;
  std::uint64_t time_slice_us = 1000;
  std::size_t buffer_capacity = 1024;  // reorder buffer slots, power of two
  double qst_capacity = 10000.0;       // capacity constant of the QST heuristic
  std::uint64_t ct_window_us = 100000; // accounting window of the CT heuristic
  double stats_ewma_alpha = 0.25;
  std::uint64_t marker_interval = 1000;
  ReorderKind reorder = ReorderKind::nonblocking;
  PartitionScheme scheme = PartitionScheme::hybrid;
  std::size_t hybrid_partitions = 100;

  /// Throws std::invalid_argument on a bad configuration.
  void validate() const;
};

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace osr
