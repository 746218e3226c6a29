#include "osr/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <exception>
#include <stdexcept>
#include <thread>

namespace osr {

void RuntimeConfig::validate() const {
  if (worker_count == 0) throw std::invalid_argument("worker_count must be positive");
  if (time_slice_us == 0) throw std::invalid_argument("time_slice_us must be positive");
  if (!is_power_of_two(buffer_capacity))
    throw std::invalid_argument("buffer_capacity must be a power of two");
  if (buffer_capacity < worker_count)
    throw std::invalid_argument("buffer_capacity must be >= worker_count");
  if (qst_capacity <= 0) throw std::invalid_argument("qst_capacity must be positive");
  if (ct_window_us == 0) throw std::invalid_argument("ct_window_us must be positive");
  if (stats_ewma_alpha <= 0 || stats_ewma_alpha > 1)
    throw std::invalid_argument("stats_ewma_alpha must be in (0,1]");
  if (marker_interval == 0) throw std::invalid_argument("marker_interval must be positive");
  if (hybrid_partitions == 0) throw std::invalid_argument("hybrid_partitions must be positive");
}

Engine::Engine(PipelineFactory pipeline, RuntimeConfig cfg, Heuristic heuristic)
    : pipeline_(std::move(pipeline)), cfg_(std::move(cfg)), heuristic_(heuristic) {
  if (!pipeline_) throw std::invalid_argument("pipeline factory must be set");
  cfg_.validate();
}

RunResult Engine::run_count(const InputGen& gen, std::uint64_t count, double rate_tps) {
  return run(gen, count, std::chrono::milliseconds::zero(), rate_tps);
}

RunResult Engine::run_duration(const InputGen& gen, std::chrono::milliseconds duration,
                               double rate_tps) {
  return run(gen, 0, duration, rate_tps);
}

RunResult Engine::run(const InputGen& gen, std::uint64_t count,
                      std::chrono::milliseconds duration, double rate_tps) {
  using clock = std::chrono::steady_clock;

  PipelineSpec spec = pipeline_();
  spec.validate();

  RunResult result;
  const bool timed = duration.count() > 0;
  const std::uint64_t marker_every = cfg_.marker_interval;
  // Workers stamp marker records concurrently with the feeder creating
  // them, so the vector must never reallocate: fix its size up front.
  const std::uint64_t max_markers = timed ? (1u << 18) : count / marker_every + 1;
  result.markers.assign(max_markers, Marker{});

  // Assemble operator instances and wire them back to front.
  std::vector<std::unique_ptr<OperatorInstance>> ops;
  ops.reserve(spec.operators.size());
  for (std::size_t i = 0; i < spec.operators.size(); ++i)
    ops.push_back(std::make_unique<OperatorInstance>(spec.operators[i], cfg_, i));

  std::atomic<bool> flushed{false};
  std::atomic<std::uint64_t> egress_count{0};
  std::vector<Marker>& markers = result.markers;

  OperatorInstance::Emit egress = [&](const Tuple& t) {
    if (t.flush) {
      flushed.store(true, std::memory_order_release);
      return;
    }
    if (t.is_marker()) {
      markers[static_cast<std::size_t>(t.marker_id)].stamp(MarkerStage::egress);
      return;
    }
    egress_count.fetch_add(1, std::memory_order_relaxed);
    if (probe_)
      probe_(t);
    else
      result.egress.push_back(t);
  };

  ops.back()->set_downstream(egress);
  for (std::size_t i = 0; i + 1 < ops.size(); ++i) {
    OperatorInstance* next = ops[i + 1].get();
    ops[i]->set_downstream([next](const Tuple& t) { next->enqueue_input(t); });
  }
  ops.front()->set_marker_hook([&markers](const Tuple& t) {
    markers[static_cast<std::size_t>(t.marker_id)].stamp(MarkerStage::first_processing);
  });

  std::vector<std::size_t> max_par;
  for (const auto& op : spec.operators) max_par.push_back(op.max_parallelism);
  Scheduler scheduler(cfg_, heuristic_,  max_par,
                      [&ops](std::size_t i) { return ops[i]->worklist_size(); });

  std::atomic<bool> stop{false};
  std::exception_ptr worker_error;
  std::mutex error_mu;

  auto worker_loop = [&]() {
    std::uint64_t park_us = 1;
    try {
      while (!stop.load(std::memory_order_acquire)) {
        auto assignment = scheduler.next_assignment();
        if (assignment) {
          park_us = 1;
          WorkReport report = ops[assignment->op]->work(0, assignment->max_tuples);
          scheduler.report_completion(assignment->op, report);
        } else {
          // The cap matters on oversubscribed machines: idle workers waking
          // every 100us would steal the core from the one doing work.
          std::this_thread::sleep_for(std::chrono::microseconds(park_us));
          park_us = std::min<std::uint64_t>(park_us * 2, 2000);
        }
      }
    } catch (...) {
      {
        std::lock_guard<std::mutex> g(error_mu);
        if (!worker_error) worker_error = std::current_exception();
      }
      stop.store(true, std::memory_order_release);
    }
  };

  const auto t0 = clock::now();
  const auto deadline = t0 + duration;

  auto feeder_loop = [&]() {
    OperatorInstance& ingress_op = *ops.front();
    std::uint64_t fed = 0;
    std::int64_t next_marker = 0;
    const auto pace_t0 = clock::now();
    // Chunked pacing keeps sleep overhead off the fast path, but a chunk
    // is a burst of backlog; at low rates pace every tuple so latency
    // measurements see the intended arrival process.
    const std::uint64_t pace_chunk = rate_tps >= 50000.0 ? 64 : 1;
    while (!stop.load(std::memory_order_acquire)) {
      if (timed) {
        if (clock::now() >= deadline) break;
      } else if (fed >= count) {
        break;
      }
      Tuple t = gen(fed);
      t.marker_id = -1;
      t.flush = false;
      ingress_op.enqueue_input(std::move(t));
      ++fed;
      if (fed % marker_every == 0 &&
          next_marker < static_cast<std::int64_t>(max_markers)) {
        Tuple m;
        m.marker_id = next_marker++;
        Marker& rec = markers[static_cast<std::size_t>(m.marker_id)];
        rec.id = m.marker_id;
        rec.stamp(MarkerStage::ingress);
        ingress_op.enqueue_input(std::move(m));
      }
      if (rate_tps > 0 && fed % pace_chunk == 0) {
        const auto due = pace_t0 + std::chrono::duration_cast<clock::duration>(
                                       std::chrono::duration<double>(fed / rate_tps));
        std::this_thread::sleep_until(due);
      }
    }
    Tuple f;
    f.flush = true;
    ingress_op.enqueue_input(std::move(f));
  };

  std::vector<std::thread> workers;
  workers.reserve(cfg_.worker_count);
  for (std::size_t i = 0; i < cfg_.worker_count; ++i) workers.emplace_back(worker_loop);
  std::thread feeder(feeder_loop);

  // Wait for the flush token to reach egress, sampling per-second egress
  // counts for duration runs.
  auto last_sample = t0;
  while (!flushed.load(std::memory_order_acquire)) {
    if (stop.load(std::memory_order_acquire)) break;  // worker error
    std::this_thread::sleep_for(std::chrono::milliseconds(timed ? 50 : 1));
    if (timed) {
      const auto now = clock::now();
      if (now - last_sample >= std::chrono::seconds(1)) {
        result.egress_per_second.push_back(egress_count.load(std::memory_order_relaxed));
        last_sample += std::chrono::seconds(1);
      }
    }
  }
  stop.store(true, std::memory_order_release);
  feeder.join();
  for (auto& w : workers) w.join();
  if (worker_error) std::rethrow_exception(worker_error);

  result.wall_s = std::chrono::duration<double>(clock::now() - t0).count();
  result.egress_data_count = egress_count.load();
  for (const auto& op : ops) result.op_stats.push_back(op->stats());

  // Drop unfilled marker slots (count-mode preallocation rounds up).
  std::erase_if(markers, [](const Marker& m) { return m.id < 0 || m.egress_ns == 0; });
  if (markers.size() >= 5)
    result.metrics = summarize(markers, marker_every);
  return result;
}

std::vector<Tuple> reference_egress(const PipelineFactory& pipeline, const RuntimeConfig& cfg,
                                    const InputGen& gen, std::uint64_t count) {
  RuntimeConfig ref = cfg;
  ref.worker_count = 1;
  Engine engine(pipeline, ref, Heuristic::lp);
  return engine.run_count(gen, count).egress;
}

std::vector<Tuple> data_only(const std::vector<Tuple>& egress) {
  std::vector<Tuple> out;
  out.reserve(egress.size());
  for (const Tuple& t : egress)
    if (!t.is_marker() && !t.flush) out.push_back(t);
  return out;
}

}  // namespace osr
