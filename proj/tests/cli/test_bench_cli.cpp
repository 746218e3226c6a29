#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "experiments.hpp"

using namespace osr::bench;

namespace {

BenchOptions small_opts() {
  BenchOptions opts;
  opts.tuples = 2000;
  opts.cost_us = 1;
  opts.cost_given = true;
  return opts;
}

}  // namespace

TEST_CASE("heuristics matrix: Q1 x 4 heuristics x 4 worker counts = 16 rows") {
  auto opts = small_opts();
  opts.experiment = "heuristics";
  opts.query = "Q1";
  const auto rows = run_experiment(opts);
  REQUIRE(rows.size() == 16);
  for (const auto& r : rows) {
    CHECK(r.experiment == "heuristics");
    CHECK(r.query == "Q1");
    CHECK(r.throughput_tps > 0);
  }
}

TEST_CASE("single heuristic and worker count narrows the matrix") {
  auto opts = small_opts();
  opts.heuristic = "ct";
  opts.workers = {2};
  const auto rows = run_experiment(opts);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].heuristic == "ct");
  CHECK(rows[0].workers == 2);
}

TEST_CASE("reorder-scaling covers both reorderers") {
  auto opts = small_opts();
  opts.experiment = "reorder-scaling";
  opts.workers = {1, 2};
  const auto rows = run_experiment(opts);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].scheme == "nonblocking");
  CHECK(rows[2].scheme == "locked");
  for (const auto& r : rows) CHECK(r.query == "micro");
}

TEST_CASE("skew sweeps both schemes over three sigmas") {
  auto opts = small_opts();
  opts.experiment = "skew";
  opts.workers = {2};
  const auto rows = run_experiment(opts);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].sigma == doctest::Approx(0.05));
  CHECK(rows[1].sigma == doctest::Approx(0.2));
  CHECK(rows[2].sigma == doctest::Approx(1.0));
  CHECK(rows[0].scheme == "hybrid");
  CHECK(rows[3].scheme == "partitioned");
}

TEST_CASE("partition-latency rows carry the swept cost") {
  auto opts = small_opts();
  opts.experiment = "partition-latency";
  opts.workers = {2};
  opts.cost_us = 10;
  const auto rows = run_experiment(opts);
  REQUIRE(rows.size() == 2);  // cost pinned -> one per scheme
  for (const auto& r : rows) {
    CHECK(r.cost_us == doctest::Approx(10));
    CHECK(r.latency_ms > 0);
  }
}

TEST_CASE("queries experiment emits one row per query shape") {
  auto opts = small_opts();
  opts.experiment = "queries";
  opts.heuristic = "lp";
  opts.workers = {2};
  const auto rows = run_experiment(opts);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].query == "Q1");
  CHECK(rows[4].query == "Q15");
}

TEST_CASE("unknown experiment is rejected before any run") {
  auto opts = small_opts();
  opts.experiment = "nope";
  CHECK_THROWS_AS(run_experiment(opts), std::invalid_argument);
}

TEST_CASE("csv schema is exact") {
  std::vector<BenchRow> rows{{.experiment = "heuristics",
                              .query = "Q1",
                              .heuristic = "ct",
                              .workers = 4,
                              .scheme = "hybrid",
                              .sigma = 1.0,
                              .cost_us = 100,
                              .throughput_tps = 12345.6,
                              .latency_ms = 7.25}};
  std::ostringstream os;
  write_csv(rows, os);
  std::istringstream is(os.str());
  std::string header, line;
  std::getline(is, header);
  CHECK(header == "experiment,query,heuristic,workers,scheme,sigma,cost_us,throughput_tps,latency_ms");
  std::getline(is, line);
  CHECK(line == "heuristics,Q1,ct,4,hybrid,1,100,12345.600,7.250000");
}

TEST_CASE("bench_main writes csv and json files and exits 0") {
  auto opts = small_opts();
  opts.heuristic = "lp";
  opts.workers = {1};
  opts.out = "bench_cli_test.csv";
  opts.json_out = "bench_cli_test.json";
  CHECK(bench_main(opts) == 0);

  std::ifstream csv(opts.out);
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "experiment,query,heuristic,workers,scheme,sigma,cost_us,throughput_tps,latency_ms");
  std::size_t data_lines = 0;
  for (std::string line; std::getline(csv, line);)
    if (!line.empty()) ++data_lines;
  CHECK(data_lines == 1);

  std::ifstream json(opts.json_out);
  REQUIRE(json.good());
  std::remove(opts.out.c_str());
  std::remove(opts.json_out.c_str());
}
