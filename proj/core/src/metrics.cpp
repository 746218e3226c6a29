#include "osr/metrics.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace osr {

std::uint64_t monotonic_now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void Marker::stamp(MarkerStage stage) { stamp(stage, monotonic_now_ns()); }

void Marker::stamp(MarkerStage stage, std::uint64_t now_ns) {
  switch (stage) {
    case MarkerStage::ingress:
      assert(ingress_ns == 0 && "marker already stamped at ingress");
      ingress_ns = now_ns;
      break;
    case MarkerStage::first_processing:
      assert(first_processing_ns == 0 && "marker already stamped at first processing");
      first_processing_ns = now_ns;
      break;
    case MarkerStage::egress:
      assert(egress_ns == 0 && "marker already stamped at egress");
      egress_ns = now_ns;
      break;
  }
}

RunMetrics summarize(const std::vector<Marker>& markers, std::uint64_t marker_interval) {
  if (markers.size() < 5)
    throw std::invalid_argument("summarize requires at least 5 markers");

  std::vector<Marker> sorted(markers);
  std::sort(sorted.begin(), sorted.end(),
            [](const Marker& a, const Marker& b) { return a.id < b.id; });

  // Retain ranks (1-based) in [floor(0.2 N)+1, floor(0.8 N)].
  const std::size_t n = sorted.size();
  const std::size_t lo = n * 2 / 10;        // count dropped at the front
  const std::size_t hi = n * 8 / 10;        // last retained rank
  if (hi <= lo) throw std::invalid_argument("not enough markers after percentile filter");

  double latency_sum = 0.0;
  for (std::size_t r = lo; r < hi; ++r) latency_sum += sorted[r].processing_latency_ms();

  RunMetrics m;
  m.markers_used = hi - lo;
  m.latency_ms = latency_sum / static_cast<double>(m.markers_used);

  const double span_s =
      static_cast<double>(sorted[hi - 1].egress_ns - sorted[lo].egress_ns) / 1e9;
  const double tuples_spanned =
      static_cast<double>((sorted[hi - 1].id - sorted[lo].id)) *
      static_cast<double>(marker_interval);
  m.throughput_tps = span_s > 0 ? tuples_spanned / span_s : 0.0;
  return m;
}

}  // namespace osr
