#include "experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>

#include <json.hpp>

#include "osr/engine.hpp"
#include "osr/workload.hpp"

namespace osr::bench {

namespace {

PartitionScheme scheme_from_name(const std::string& name) {
  if (name == "hybrid") return PartitionScheme::hybrid;
  if (name == "partitioned") return PartitionScheme::partitioned;
  if (name == "shared") return PartitionScheme::shared;
  throw std::invalid_argument("unknown scheme: " + name);
}

ReorderKind reorder_from_name(const std::string& name) {
  if (name == "nonblocking") return ReorderKind::nonblocking;
  if (name == "locked") return ReorderKind::locked;
  throw std::invalid_argument("unknown reorder kind: " + name);
}

std::vector<Heuristic> resolve_heuristics(const std::string& name, Heuristic single_default) {
  if (name == "all") return {single_default};
  return {heuristic_from_name(name)};
}

std::vector<Heuristic> all_heuristics(const std::string& name) {
  if (name == "all") return {Heuristic::qst, Heuristic::lp, Heuristic::et, Heuristic::ct};
  return {heuristic_from_name(name)};
}

RuntimeConfig base_config(const BenchOptions& opts, std::size_t workers,
                          std::uint64_t tuples) {
  RuntimeConfig cfg;
  cfg.worker_count = workers;
  cfg.time_slice_us = opts.slice_us;
  cfg.buffer_capacity = opts.buffer_capacity;
  cfg.hybrid_partitions = opts.partitions;
  cfg.scheme = scheme_from_name(opts.scheme);
  cfg.reorder = reorder_from_name(opts.reorder);
  // Aim for ~50 markers per run so the 20th-80th percentile window keeps a
  // usable sample.
  cfg.marker_interval = std::max<std::uint64_t>(1, tuples / 50);
  cfg.validate();
  return cfg;
}

struct RunInputs {
  PipelineFactory factory;
  InputGen gen;
  std::uint64_t tuples;
  double rate_tps = 0.0;
};

/// One gated run: parallel egress must match the 1-worker reference
/// before any number is recorded.
BenchRow gated_run(const std::string& experiment, const std::string& query, Heuristic h,
                   const RuntimeConfig& cfg, const RunInputs& in, const std::string& scheme_label,
                   double sigma, double cost_us) {
  const auto reference = data_only(reference_egress(in.factory, cfg, in.gen, in.tuples));

  Engine engine(in.factory, cfg, h);
  const auto result = engine.run_count(in.gen, in.tuples, in.rate_tps);
  if (data_only(result.egress) != reference)
    throw GateFailure(experiment + "/" + query + "/" + heuristic_name(h) + "/w" +
                      std::to_string(cfg.worker_count) + ": egress differs from reference");

  BenchRow row;
  row.experiment = experiment;
  row.query = query;
  row.heuristic = heuristic_name(h);
  row.workers = cfg.worker_count;
  row.scheme = scheme_label;
  row.sigma = sigma;
  row.cost_us = cost_us;
  if (result.metrics) {
    row.throughput_tps = result.metrics->throughput_tps;
    row.latency_ms = result.metrics->latency_ms;
  } else {
    row.throughput_tps = result.wall_s > 0 ? double(in.tuples) / result.wall_s : 0.0;
    row.latency_ms = 0.0;
  }
  return row;
}

SkewConfig skew_of(const BenchOptions& opts, double sigma) {
  return {.sigma = sigma, .key_space = 10000};
}

/// Single partitioned-stateful operator with range partitioning: the
/// partition-scheme experiments measure the queue scheme itself, not a
/// query chain.
RunInputs ps_inputs(const BenchOptions& opts, const RuntimeConfig& cfg, double sigma,
                    double cost_us, std::uint64_t tuples, double rate_tps) {
  const std::uint64_t key_space = 10000;
  const std::size_t buckets = cfg.scheme == PartitionScheme::partitioned
                                  ? cfg.worker_count
                                  : cfg.hybrid_partitions;
  ParametricParams params{.cost_us = cost_us, .selectivity = opts.selectivity};
  PipelineFactory factory = [params, buckets, key_space] {
    PipelineSpec spec;
    spec.operators.push_back(make_parametric_partitioned(
        params, buckets,
        [key_space, buckets](Key k) { return range_partition(k, key_space, buckets); }));
    return spec;
  };
  return {std::move(factory), make_input_gen({.sigma = sigma, .key_space = key_space}, opts.seed),
          tuples, rate_tps};
}

std::vector<BenchRow> run_heuristics(const BenchOptions& opts) {
  const auto workers = opts.workers.empty() ? std::vector<std::size_t>{1, 2, 4, 8} : opts.workers;
  std::vector<BenchRow> rows;
  for (Heuristic h : all_heuristics(opts.heuristic))
    for (std::size_t w : workers) {
      const auto cfg = base_config(opts, w, opts.tuples);
      QueryKnobs knobs;
      knobs.cost_us = opts.cost_us;
      knobs.selectivity = opts.selectivity;
      RunInputs in{query_factory(query_def(opts.query), knobs, cfg),
                   make_input_gen(skew_of(opts, opts.sigma), opts.seed), opts.tuples};
      rows.push_back(
          gated_run("heuristics", opts.query, h, cfg, in, opts.scheme, opts.sigma, opts.cost_us));
    }
  return rows;
}

std::vector<BenchRow> run_queries(const BenchOptions& opts) {
  const auto workers = opts.workers.empty() ? std::vector<std::size_t>{4} : opts.workers;
  std::vector<BenchRow> rows;
  for (const char* q : {"Q1", "Q2", "Q3", "Q4", "Q15"})
    for (Heuristic h : resolve_heuristics(opts.heuristic, Heuristic::ct))
      for (std::size_t w : workers) {
        const auto cfg = base_config(opts, w, opts.tuples);
        QueryKnobs knobs;
        knobs.cost_us = opts.cost_us;
        knobs.selectivity = opts.selectivity;
        RunInputs in{query_factory(query_def(q), knobs, cfg),
                     make_input_gen(skew_of(opts, opts.sigma), opts.seed), opts.tuples};
        rows.push_back(gated_run("queries", q, h, cfg, in, opts.scheme, opts.sigma, opts.cost_us));
      }
  return rows;
}

std::vector<BenchRow> run_reorder(const BenchOptions& opts, bool high_selectivity) {
  const auto workers = opts.workers.empty() ? std::vector<std::size_t>{1, 2, 4, 8} : opts.workers;
  const double cost = opts.cost_given ? opts.cost_us : 10.0;
  const double sel =
      opts.selectivity_given ? opts.selectivity : (high_selectivity ? 50.0 : 1.0);
  const char* name = high_selectivity ? "reorder-selectivity" : "reorder-scaling";
  std::vector<BenchRow> rows;
  for (const char* kind : {"nonblocking", "locked"})
    for (Heuristic h : resolve_heuristics(opts.heuristic, Heuristic::lp))
      for (std::size_t w : workers) {
        BenchOptions local = opts;
        local.reorder = kind;
        const auto cfg = base_config(local, w, opts.tuples);
        QueryKnobs knobs;
        knobs.cost_us = cost;
        knobs.selectivity = sel;
        RunInputs in{query_factory(query_def("micro"), knobs, cfg),
                     make_input_gen(skew_of(opts, opts.sigma), opts.seed), opts.tuples};
        // The scheme column carries the reorderer under test here.
        rows.push_back(gated_run(name, "micro", h, cfg, in, kind, opts.sigma, cost));
      }
  return rows;
}

std::vector<BenchRow> run_skew(const BenchOptions& opts) {
  const auto workers = opts.workers.empty() ? std::vector<std::size_t>{8} : opts.workers;
  const auto sigmas =
      opts.sigma_given ? std::vector<double>{opts.sigma} : std::vector<double>{0.05, 0.2, 1.0};
  const double cost = opts.cost_given ? opts.cost_us : 10.0;
  std::vector<BenchRow> rows;
  for (const char* scheme : {"hybrid", "partitioned"})
    for (Heuristic h : resolve_heuristics(opts.heuristic, Heuristic::lp))
      for (std::size_t w : workers)
        for (double sigma : sigmas) {
          BenchOptions local = opts;
          local.scheme = scheme;
          const auto cfg = base_config(local, w, opts.tuples);
          const auto in = ps_inputs(opts, cfg, sigma, cost, opts.tuples, 0.0);
          rows.push_back(gated_run("skew", "ps", h, cfg, in, scheme, sigma, cost));
        }
  return rows;
}

std::vector<BenchRow> run_partition_latency(const BenchOptions& opts) {
  const auto workers = opts.workers.empty() ? std::vector<std::size_t>{8} : opts.workers;
  const auto costs = opts.cost_given ? std::vector<double>{opts.cost_us}
                                     : std::vector<double>{10.0, 100.0, 1000.0};
  const double sigma = opts.sigma_given ? opts.sigma : 10.0;  // near-uniform keys
  std::vector<BenchRow> rows;
  for (const char* scheme : {"hybrid", "partitioned"})
    for (Heuristic h : resolve_heuristics(opts.heuristic, Heuristic::lp))
      for (std::size_t w : workers)
        for (double cost : costs) {
          BenchOptions local = opts;
          local.scheme = scheme;
          // Latency is measured under sustainable load: pace ingress at
          // half of one worker's capacity so queueing stays bounded.
          const double rate = 0.5 * 1e6 / cost;
          const std::uint64_t tuples =
              std::max<std::uint64_t>(1000, std::min<std::uint64_t>(opts.tuples,
                                                                    std::uint64_t(rate * 8)));
          const auto cfg = base_config(local, w, tuples);
          const auto in = ps_inputs(opts, cfg, sigma, cost, tuples, rate);
          rows.push_back(gated_run("partition-latency", "ps", h, cfg, in, scheme, sigma, cost));
        }
  return rows;
}

}  // namespace

std::vector<BenchRow> run_experiment(const BenchOptions& opts) {
  if (opts.experiment == "heuristics") return run_heuristics(opts);
  if (opts.experiment == "queries") return run_queries(opts);
  if (opts.experiment == "reorder-scaling") return run_reorder(opts, false);
  if (opts.experiment == "reorder-selectivity") return run_reorder(opts, true);
  if (opts.experiment == "skew") return run_skew(opts);
  if (opts.experiment == "partition-latency") return run_partition_latency(opts);
  throw std::invalid_argument("unknown experiment: " + opts.experiment);
}

void write_csv(const std::vector<BenchRow>& rows, std::ostream& os) {
  os << "experiment,query,heuristic,workers,scheme,sigma,cost_us,throughput_tps,latency_ms\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%zu,%s,%g,%g,%.3f,%.6f\n", r.experiment.c_str(),
                  r.query.c_str(), r.heuristic.c_str(), r.workers, r.scheme.c_str(), r.sigma,
                  r.cost_us, r.throughput_tps, r.latency_ms);
    os << buf;
  }
}

void write_json(const std::vector<BenchRow>& rows, std::ostream& os) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"experiment", r.experiment},
                   {"query", r.query},
                   {"heuristic", r.heuristic},
                   {"workers", r.workers},
                   {"scheme", r.scheme},
                   {"sigma", r.sigma},
                   {"cost_us", r.cost_us},
                   {"throughput_tps", r.throughput_tps},
                   {"latency_ms", r.latency_ms}});
  os << arr.dump(2) << "\n";
}

int bench_main(const BenchOptions& opts) {
  std::vector<BenchRow> rows;
  try {
    rows = run_experiment(opts);
  } catch (const GateFailure& e) {
    std::cerr << "correctness gate failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (opts.out.empty()) {
    write_csv(rows, std::cout);
  } else {
    std::ofstream f(opts.out);
    if (!f) {
      std::cerr << "cannot open " << opts.out << "\n";
      return 1;
    }
    write_csv(rows, f);
  }
  if (!opts.json_out.empty()) {
    std::ofstream f(opts.json_out);
    if (!f) {
      std::cerr << "cannot open " << opts.json_out << "\n";
      return 1;
    }
    write_json(rows, f);
  }
  return 0;
}

}  // namespace osr::bench
