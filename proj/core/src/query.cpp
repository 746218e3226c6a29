#include "osr/workload.hpp"

#include <stdexcept>

namespace osr {

QueryDef query_def(const std::string& id) {
  using K = OpKind;
  if (id == "Q1") return {id, {K::stateless, K::partitioned, K::partitioned, K::stateful}};
  if (id == "Q2")
    return {id, {K::stateless, K::partitioned, K::stateless, K::partitioned, K::stateful}};
  if (id == "Q3") return {id, {K::stateless, K::partitioned, K::partitioned}};
  if (id == "Q4") return {id, {K::stateless, K::partitioned, K::stateless, K::stateful}};
  if (id == "Q15") return {id, {K::stateless, K::stateless, K::partitioned}};
  if (id == "micro") return {id, {K::stateless}};
  throw std::invalid_argument("unknown query id: " + id);
}

PipelineSpec build_query(const QueryDef& def, const QueryKnobs& knobs,
                         const RuntimeConfig& cfg) {
  if (!knobs.stage_overrides.empty() && knobs.stage_overrides.size() != def.shape.size())
    throw std::invalid_argument("stage_overrides must match the stage count");

  PipelineSpec spec;
  for (std::size_t i = 0; i < def.shape.size(); ++i) {
    ParametricParams p;
    p.cost_us = knobs.cost_us;
    p.selectivity = knobs.selectivity;
    p.state_size = knobs.state_size;
    if (!knobs.stage_overrides.empty()) p = knobs.stage_overrides[i];

    switch (def.shape[i]) {
      case OpKind::stateless:
        spec.operators.push_back(make_parametric_stateless(p));
        break;
      case OpKind::stateful:
        spec.operators.push_back(make_parametric_stateful(p));
        break;
      case OpKind::partitioned: {
        const std::size_t buckets = cfg.scheme == PartitionScheme::partitioned
                                        ? cfg.worker_count
                                        : cfg.hybrid_partitions;
        std::function<std::size_t(Key)> part;
        if (knobs.range_partitioning) {
          const std::uint64_t space = knobs.key_space;
          part = [space, buckets](Key k) { return range_partition(k, space, buckets); };
        }
        spec.operators.push_back(make_parametric_partitioned(p, buckets, part));
        break;
      }
    }
  }
  return spec;
}

PipelineFactory query_factory(QueryDef def, QueryKnobs knobs, RuntimeConfig cfg) {
  return [def = std::move(def), knobs = std::move(knobs), cfg = std::move(cfg)]() {
    return build_query(def, knobs, cfg);
  };
}

}  // namespace osr
