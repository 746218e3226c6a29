#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "osr/config.hpp"
#include "osr/operator.hpp"

namespace osr {

enum class Heuristic { qst, lp, et, ct };

Heuristic heuristic_from_name(std::string_view name);  // throws on unknown
std::string heuristic_name(Heuristic h);

/// Per-operator scheduling state: worklist size I, per-tuple cost c (us),
/// selectivity estimate, cumulative selectivity since ingress, assigned
/// workers w, max parallelism M, and worker time spent in the current CT
/// window (us).
struct OpStats {
  std::int64_t I = 0;
  double c = 10.0;
  double s_sel = 1.0;
  double cs = 1.0;
  std::size_t w = 0;
  std::size_t M = 1;
  double Tw_us = 0.0;
};

/// An operator is schedulable when it has spare parallelism and pending
/// input.
bool schedulable(const OpStats& st);

/// QST output-queue thresholds: T_i = C * cs_i / sum(cs). Sums to C.
std::vector<double> qst_thresholds(const std::vector<double>& cs, double capacity);

/// Earliest schedulable operator whose downstream worklist is below its
/// threshold; the last operator has no output-queue constraint.
std::optional<std::size_t> qst_select(const std::vector<OpStats>& stats,
                                      const std::vector<double>& thresholds);

/// Latest schedulable operator.
std::optional<std::size_t> lp_select(const std::vector<OpStats>& stats);

/// ET priority: I*c/(w+1) when w < M, else 0. Selector takes the maximum,
/// ties to the lowest index.
double et_priority(const OpStats& st);
std::optional<std::size_t> et_select(const std::vector<OpStats>& stats);

/// CT score: (Tw + w*slice)/(c*cs), an estimate of tuples this window will
/// push through the operator. Selector takes the schedulable operator with
/// the minimum score, ties to the lowest index.
double ct_score(const OpStats& st, double slice_us);
std::optional<std::size_t> ct_select(const std::vector<OpStats>& stats, double slice_us);

struct Assignment {
  std::size_t op = 0;
  std::size_t max_tuples = 1;
};

/// Central decision structure: answers "which operator next, and how many
/// tuples", and folds completed-work reports back into the estimates. One
/// short mutex guards all state; decisions are O(#operators).
class Scheduler {
 public:
  Scheduler(const RuntimeConfig& cfg, Heuristic heuristic,
            std::vector<std::size_t> max_parallelism,
            std::function<std::int64_t(std::size_t)> worklist_size);

  /// Picks an operator per the heuristic and reserves a worker on it
  /// (w <= M holds at all times). nullopt means idle: park briefly.
  std::optional<Assignment> next_assignment();

  void report_completion(std::size_t op, const WorkReport& report);

  OpStats snapshot(std::size_t op) const;
  std::vector<OpStats> snapshot_all() const;

 private:
  void refresh_sizes_locked();
  void maybe_roll_window_locked();

  const RuntimeConfig cfg_;
  const Heuristic heuristic_;
  std::function<std::int64_t(std::size_t)> worklist_size_;

  mutable std::mutex mu_;
  std::vector<OpStats> stats_;
  std::vector<double> thresholds_;
  std::chrono::steady_clock::time_point window_start_;
};

}  // namespace osr
