#pragma once

#include <cstdint>
#include <vector>

#include "osr/tuple.hpp"

namespace osr {

enum class MarkerStage { ingress, first_processing, egress };

/// Timestamps collected by a marker tuple riding the ordered stream.
struct Marker {
  std::int64_t id = -1;
  std::uint64_t ingress_ns = 0;
  std::uint64_t first_processing_ns = 0;
  std::uint64_t egress_ns = 0;

  void stamp(MarkerStage stage);
  void stamp(MarkerStage stage, std::uint64_t now_ns);

  double processing_latency_ms() const {
    return static_cast<double>(egress_ns - first_processing_ns) / 1e6;
  }
  double end_to_end_latency_ms() const {
    return static_cast<double>(egress_ns - ingress_ns) / 1e6;
  }
};

struct RunMetrics {
  double throughput_tps = 0.0;
  double latency_ms = 0.0;  // mean processing latency of retained markers
  std::size_t markers_used = 0;
};

std::uint64_t monotonic_now_ns();

/// Aggregates marker records into throughput and mean processing latency,
/// keeping only markers in the 20th-80th percentile range by id to drop
/// start-up and shut-down interference. Markers are `marker_interval`
/// tuples apart. Throws std::invalid_argument with fewer than 5 markers.
RunMetrics summarize(const std::vector<Marker>& markers, std::uint64_t marker_interval);

}  // namespace osr
