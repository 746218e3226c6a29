#include "osr/scheduler.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace osr {

Heuristic heuristic_from_name(std::string_view name) {
  if (name == "qst") return Heuristic::qst;
  if (name == "lp") return Heuristic::lp;
  if (name == "et") return Heuristic::et;
  if (name == "ct") return Heuristic::ct;
  throw std::invalid_argument("unknown heuristic: " + std::string(name));
}

std::string heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::qst: return "qst";
    case Heuristic::lp: return "lp";
    case Heuristic::et: return "et";
    case Heuristic::ct: return "ct";
  }
  return "?";
}

bool schedulable(const OpStats& st) { return st.w < st.M && st.I > 0; }

std::vector<double> qst_thresholds(const std::vector<double>& cs, double capacity) {
  const double total = std::accumulate(cs.begin(), cs.end(), 0.0);
  std::vector<double> t;
  t.reserve(cs.size());
  for (double c : cs) t.push_back(capacity * c / total);
  return t;
}

std::optional<std::size_t> qst_select(const std::vector<OpStats>& stats,
                                      const std::vector<double>& thresholds) {
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (!schedulable(stats[i])) continue;
    if (i + 1 == stats.size()) return i;  // egress: no output-queue bound
    if (static_cast<double>(stats[i + 1].I) < thresholds[i]) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> lp_select(const std::vector<OpStats>& stats) {
  for (std::size_t i = stats.size(); i-- > 0;)
    if (schedulable(stats[i])) return i;
  return std::nullopt;
}

double et_priority(const OpStats& st) {
  if (st.w >= st.M) return 0.0;
  return static_cast<double>(st.I) * st.c / static_cast<double>(st.w + 1);
}

std::optional<std::size_t> et_select(const std::vector<OpStats>& stats) {
  std::optional<std::size_t> best;
  double best_p = 0.0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (!schedulable(stats[i])) continue;
    const double p = et_priority(stats[i]);
    if (!best || p > best_p) {
      best = i;
      best_p = p;
    }
  }
  return best;
}

double ct_score(const OpStats& st, double slice_us) {
  return (st.Tw_us + static_cast<double>(st.w) * slice_us) / (st.c * st.cs);
}

std::optional<std::size_t> ct_select(const std::vector<OpStats>& stats, double slice_us) {
  std::optional<std::size_t> best;
  double best_s = 0.0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (!schedulable(stats[i])) continue;
    const double s = ct_score(stats[i], slice_us);
    if (!best || s < best_s) {
      best = i;
      best_s = s;
    }
  }
  return best;
}

Scheduler::Scheduler(const RuntimeConfig& cfg, Heuristic heuristic,
                     std::vector<std::size_t> max_parallelism,
                     std::function<std::int64_t(std::size_t)> worklist_size)
    : cfg_(cfg),
      heuristic_(heuristic),
      worklist_size_(std::move(worklist_size)),
      window_start_(std::chrono::steady_clock::now()) {
  stats_.resize(max_parallelism.size());
  for (std::size_t i = 0; i < stats_.size(); ++i) {
    stats_[i].M = max_parallelism[i] == 0 ? cfg.worker_count : max_parallelism[i];
    stats_[i].c = 10.0;  // cold start; self-corrects after the first slice
    stats_[i].s_sel = 1.0;
    stats_[i].cs = 1.0;
  }
  thresholds_ = qst_thresholds(std::vector<double>(stats_.size(), 1.0), cfg.qst_capacity);
}

void Scheduler::refresh_sizes_locked() {
  for (std::size_t i = 0; i < stats_.size(); ++i) stats_[i].I = worklist_size_(i);
}

void Scheduler::maybe_roll_window_locked() {
  const auto now = std::chrono::steady_clock::now();
  const auto elapsed_us =
      std::chrono::duration_cast<std::chrono::microseconds>(now - window_start_).count();
  if (elapsed_us >= static_cast<std::int64_t>(cfg_.ct_window_us)) {
    for (auto& st : stats_) st.Tw_us = 0.0;
    window_start_ = now;
  }
}

std::optional<Assignment> Scheduler::next_assignment() {
  std::lock_guard<std::mutex> g(mu_);
  refresh_sizes_locked();
  maybe_roll_window_locked();

  std::optional<std::size_t> pick;
  switch (heuristic_) {
    case Heuristic::qst: pick = qst_select(stats_, thresholds_); break;
    case Heuristic::lp: pick = lp_select(stats_); break;
    case Heuristic::et: pick = et_select(stats_); break;
    case Heuristic::ct: pick = ct_select(stats_, static_cast<double>(cfg_.time_slice_us)); break;
  }
  if (!pick) return std::nullopt;

  OpStats& st = stats_[*pick];
  assert(st.w < st.M);
  ++st.w;
  const auto max_tuples = static_cast<std::size_t>(
      std::max(1.0, std::floor(static_cast<double>(cfg_.time_slice_us) / st.c)));
  return Assignment{*pick, max_tuples};
}

void Scheduler::report_completion(std::size_t op, const WorkReport& report) {
  std::lock_guard<std::mutex> g(mu_);
  OpStats& st = stats_[op];
  assert(st.w > 0);
  --st.w;
  st.Tw_us += static_cast<double>(report.busy_us);
  if (report.processed > 0) {
    const double alpha = cfg_.stats_ewma_alpha;
    const double c_sample =
        static_cast<double>(report.busy_us) / static_cast<double>(report.processed);
    const double s_sample =
        static_cast<double>(report.produced) / static_cast<double>(report.processed);
    st.c = alpha * std::max(c_sample, 1e-3) + (1.0 - alpha) * st.c;
    st.s_sel = alpha * s_sample + (1.0 - alpha) * st.s_sel;

    // Recompute the cumulative-selectivity chain and QST thresholds.
    std::vector<double> sels(stats_.size());
    for (std::size_t i = 0; i < stats_.size(); ++i) sels[i] = std::max(stats_[i].s_sel, 1e-6);
    const auto cs = cumulative_selectivities(sels);
    for (std::size_t i = 0; i < stats_.size(); ++i) stats_[i].cs = cs[i];
    thresholds_ = qst_thresholds(cs, cfg_.qst_capacity);
  }
}

OpStats Scheduler::snapshot(std::size_t op) const {
  std::lock_guard<std::mutex> g(mu_);
  return stats_[op];
}

std::vector<OpStats> Scheduler::snapshot_all() const {
  std::lock_guard<std::mutex> g(mu_);
  return stats_;
}

}  // namespace osr
