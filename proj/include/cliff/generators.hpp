#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cliff/isa.hpp"

namespace cliff {

// Latency families: dependent-load chains sized to a cache level (L1Lat,
// L2Lat, MemLat). Axis = chain length; response = Slope.
CliffFamily gen_latency_cliff(FeatureId target, const std::vector<long>& chain_lengths);

// Bandwidth families: p independent instructions of the target class per
// iteration (DecodeBw, LdPipeBw, StPipeBw, FmulBw, FpDispatchBw). Axis =
// p; response = Plateau. LoadWbBw uses a coalesced-fill drain construction
// with response = Slope instead: a plateau cannot separate writeback
// bandwidth from the load-pipe count when the two are equal.
CliffFamily gen_bandwidth_cliff(FeatureId target, const std::vector<long>& widths);

// Capacity families: 3-deep dependent memory-miss load chain blocker plus p
// always-ready fillers (RobSize, LqSize, SqSize, IntPrf, FpPrf). Axis = p;
// response = Inflection; family.overhead holds the empirically pinned
// correction so value = change-point + overhead.
CliffFamily gen_capacity_cliff(FeatureId target, const std::vector<long>& fill_counts,
                               std::optional<Op> filler = std::nullopt);

// Three-stage reorder-buffer compression study.
struct RobSuite {
  struct Stage1Entry {
    CliffFamily family;
    std::string fragment;  // e.g. "beq+ld+st"
    std::string expected_bottleneck;  // "LQ","SQ","IntPrf","FpPrf","ROB","none"
  };
  std::vector<Stage1Entry> stage1;   // fragment permutations
  std::vector<CliffFamily> stage2;   // 130-branch prefix + per-class fillers
  CliffFamily stage3;                // jump + N nops groups, axis = N
};
RobSuite gen_rob_compression_suite();

// Bank families: A = stride sweep (axis = stride bytes, infers bank count),
// B = same-word vs different-word pairwise.
std::pair<CliffFamily, CliffFamily> gen_bank_cliffs(
    const std::vector<long>& strides = {8, 16, 32, 64, 128});

// Correlated-branch history family. Axis = filler branch count between the
// source branch and its correlated consumer; judged on mispredict counts.
CliffFamily gen_phr_cliff(const std::vector<long>& filler_branch_counts);

// Trigger/non-trigger pairs for MoveElim, FmaddSplit, AtomicFlow,
// StaStdSplit, NukeReplay.
CliffFamily gen_special_case_pair(FeatureId feature);

// Desk-scale workload suite with pairwise-distinct dominant Top-Down
// attributions under the reference config.
std::vector<Snippet> gen_workload_suite();

// Aliasing store/load workload for the memory-dependence-speculation gain
// experiment (simulated under both Conservative and StoreSet policies).
Snippet gen_storeset_alias_workload();

// One family per requested feature with default axes, honoring overrides.
std::vector<CliffFamily> gen_all(
    const std::set<FeatureId>& features,
    const std::map<FeatureId, std::vector<long>>& axis_overrides = {});

std::vector<long> default_axis(FeatureId f);

}  // namespace cliff
