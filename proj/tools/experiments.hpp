#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace osr::bench {

/// Parsed CLI options. The *_given flags distinguish "user pinned this
/// value" from "use the experiment's default sweep".
struct BenchOptions {
  std::string experiment = "heuristics";
  std::string query = "Q1";
  std::string heuristic = "all";
  std::vector<std::size_t> workers;  // empty -> experiment default
  std::uint64_t slice_us = 1000;
  std::size_t buffer_capacity = 1024;
  std::size_t partitions = 100;
  std::string scheme = "hybrid";
  std::string reorder = "nonblocking";
  double sigma = 1.0;
  bool sigma_given = false;
  double cost_us = 100.0;
  bool cost_given = false;
  double selectivity = 1.0;
  bool selectivity_given = false;
  std::uint64_t tuples = 20000;
  std::uint64_t seed = 1;
  std::string out;       // CSV path; empty -> stdout
  std::string json_out;  // optional structured mirror
};

struct BenchRow {
  std::string experiment;
  std::string query;
  std::string heuristic;
  std::size_t workers = 0;
  std::string scheme;
  double sigma = 0.0;
  double cost_us = 0.0;
  double throughput_tps = 0.0;
  double latency_ms = 0.0;
};

/// Thrown when a parallel run's egress differs from the 1-worker
/// reference; performance numbers are never recorded past this.
struct GateFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Executes the named experiment's run matrix. Every configuration is
/// gated on egress equality with the sequential reference before its row
/// is recorded. Throws GateFailure / std::invalid_argument.
std::vector<BenchRow> run_experiment(const BenchOptions& opts);

void write_csv(const std::vector<BenchRow>& rows, std::ostream& os);
void write_json(const std::vector<BenchRow>& rows, std::ostream& os);

/// Full CLI behaviour minus argument parsing: run, emit, map failures to
/// the exit code.
int bench_main(const BenchOptions& opts);

}  // namespace osr::bench
