#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osr/config.hpp"
#include "osr/engine.hpp"
#include "osr/operator_spec.hpp"
#include "osr/parametric.hpp"

namespace osr {

/// Skewed key generation: draws from Normal(0, sigma) truncated to
/// [-1, 1] (rejection) and maps affinely onto [0, key_space). Small sigma
/// piles keys onto the middle of the range; large sigma approaches
/// uniform.
struct SkewConfig {
  double sigma = 1.0;
  std::uint64_t key_space = 10000;
};

std::vector<Key> gen_gaussian_keys(const SkewConfig& cfg, std::size_t n, std::uint64_t seed);

/// Chain shapes of the emulated streaming queries (data-source stages are
/// not modelled). "micro" is a single stateless operator.
struct QueryDef {
  std::string id;                 // Q1, Q2, Q3, Q4, Q15, micro
  std::vector<OpKind> shape;
};

QueryDef query_def(const std::string& id);  // throws on unknown id

/// Per-stage overrides; stages without an entry use the defaults.
struct QueryKnobs {
  double cost_us = 100.0;
  double selectivity = 1.0;
  std::size_t state_size = 64;
  std::uint64_t key_space = 10000;
  std::vector<ParametricParams> stage_overrides;  // empty or one per stage
  bool range_partitioning = false;
};

/// Builds a fresh pipeline of parametric operators in the query's chain.
/// Partitioned stages get p from cfg (hybrid_partitions, or worker_count
/// under the partitioned-queue baseline).
PipelineSpec build_query(const QueryDef& def, const QueryKnobs& knobs,
                         const RuntimeConfig& cfg);

/// Factory wrapper so each engine run starts with fresh operator state.
PipelineFactory query_factory(QueryDef def, QueryKnobs knobs, RuntimeConfig cfg);

/// Deterministic input stream: value = mixed index, key drawn from the
/// skew config.
InputGen make_input_gen(const SkewConfig& skew, std::uint64_t seed);

}  // namespace osr
