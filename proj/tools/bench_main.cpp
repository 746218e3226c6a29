#include <CLI11.hpp>

#include "experiments.hpp"

int main(int argc, char** argv) {
  osr::bench::BenchOptions opts;
  CLI::App app{"osr benchmark harness"};

  app.add_option("--experiment", opts.experiment,
                 "heuristics | reorder-scaling | reorder-selectivity | skew | "
                 "partition-latency | queries")
      ->capture_default_str();
  app.add_option("--query", opts.query, "Q1 | Q2 | Q3 | Q4 | Q15 | micro")
      ->capture_default_str();
  app.add_option("--heuristic", opts.heuristic, "qst | lp | et | ct | all")
      ->capture_default_str();
  app.add_option("--workers", opts.workers, "worker counts (repeat or comma-separate)")
      ->delimiter(',');
  app.add_option("--slice-us", opts.slice_us, "scheduler time slice")->capture_default_str();
  app.add_option("--buffer-capacity", opts.buffer_capacity, "reorder buffer slots (power of two)")
      ->capture_default_str();
  app.add_option("--partitions", opts.partitions, "hybrid-queue partition count")
      ->capture_default_str();
  app.add_option("--scheme", opts.scheme, "hybrid | partitioned | shared")
      ->capture_default_str();
  app.add_option("--reorder", opts.reorder, "nonblocking | locked")->capture_default_str();
  auto* sigma_opt = app.add_option("--sigma", opts.sigma, "key skew (Gaussian sigma)")
                        ->capture_default_str();
  auto* cost_opt = app.add_option("--cost-us", opts.cost_us, "per-tuple operator cost")
                       ->capture_default_str();
  auto* sel_opt = app.add_option("--selectivity", opts.selectivity, "outputs per input")
                      ->capture_default_str();
  app.add_option("--tuples", opts.tuples, "input tuples per run")->capture_default_str();
  app.add_option("--seed", opts.seed, "workload seed")->capture_default_str();
  app.add_option("--out", opts.out, "CSV output path (default stdout)");
  app.add_option("--json-out", opts.json_out, "optional structured mirror of the rows");

  CLI11_PARSE(app, argc, argv);
  opts.sigma_given = sigma_opt->count() > 0;
  opts.cost_given = cost_opt->count() > 0;
  opts.selectivity_given = sel_opt->count() > 0;

  return osr::bench::bench_main(opts);
}
