#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

namespace osr {

using Serial = std::uint64_t;
using Key = std::uint64_t;

/// The unit of flow through a pipeline. `value` is an opaque payload word;
/// operator functions own its interpretation. `serial` is the per-operator
/// arrival index (starting from 1), assigned when the tuple enters an
/// operator's worklist. Markers and the flush token ride the stream as
/// ordinary tuples and occupy serials like any other.
struct Tuple {
  std::uint64_t value = 0;
  Key key = 0;
  Serial serial = 0;
  std::int64_t marker_id = -1;
  bool flush = false;

  bool is_marker() const { return marker_id >= 0; }
  bool is_control() const { return is_marker() || flush; }

  friend bool operator==(const Tuple& a, const Tuple& b) {
    return a.value == b.value && a.key == b.key && a.marker_id == b.marker_id &&
           a.flush == b.flush;
  }
};

/// All outputs produced by one input, travelling under that input's serial.
/// The list may be empty (selectivity below one); an empty unit still
/// occupies its serial so the ordered emission never gaps.
struct OutputUnit {
  Serial serial = 0;
  std::vector<Tuple> outputs;
};

/// Gap-free, duplicate-free serial assignment for any number of concurrent
/// callers.
class SerialCounter {
 public:
  Serial assign() { return next_.fetch_add(1, std::memory_order_relaxed); }

  /// Number of serials handed out so far.
  Serial issued() const { return next_.load(std::memory_order_relaxed) - 1; }

 private:
  std::atomic<Serial> next_{1};
};

/// cs_i = product of s_1..s_i. Empty input yields empty output.
std::vector<double> cumulative_selectivities(const std::vector<double>& selectivities);

}  // namespace osr
