#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cliff/analysis.hpp"
#include "cliff/config.hpp"
#include "cliff/generators.hpp"
#include "cliff/sim.hpp"
#include "cliff/skp.hpp"

namespace cliff {

struct Campaign {
  std::string oracle_path;
  std::string model_path;
  std::set<FeatureId> features;  // empty = all
  std::string outdir;
  std::map<FeatureId, std::vector<long>> axis_overrides;
  long seed = 0;
  bool calibrate = false;
  double flag_threshold_pct = 5.0;
};

// Simulates every family snippet (parallel fan-out when OpenMP is enabled;
// results merged by index, so output is independent of scheduling).
std::vector<RunResult> run_family(const CoreConfig& cfg, const CliffFamily& family);

// Full pipeline: generate -> simulate under oracle and model -> infer ->
// diff -> report, plus calibration artifacts when requested. Returns the
// final discrepancy report (post-calibration when calibrate is set).
DiscrepancyReport run_campaign(const Campaign& c);

struct SkpRun {
  std::string config_path;
  std::string workload_dir;  // empty = shipped suite; else *.json snippets
  std::string outdir;
  double eps1 = 0.15;
  double eps2 = 0.10;
  int min_pts = 2;
  double exclusion_threshold = 0.05;
};

ClusterReport run_skp(const SkpRun& r);

std::set<FeatureId> parse_feature_list(const std::string& spec);  // "all", list, @file

}  // namespace cliff
