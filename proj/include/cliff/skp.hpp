#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliff/isa.hpp"
#include "cliff/sim.hpp"

namespace cliff {

// Rows = workloads, columns = Top-Down counters, values = slot shares.
struct FeatureMatrix {
  std::vector<std::string> workloads;
  std::vector<std::string> counters;
  std::vector<std::vector<double>> values;  // [workload][counter]
};

std::vector<std::string> validate_matrix(const FeatureMatrix& m);

FeatureMatrix build_matrix(const std::map<std::string, RunResult>& results);
std::string matrix_to_csv(const FeatureMatrix& m);
FeatureMatrix matrix_from_csv(const std::string& csv);

constexpr int kNoiseLabel = -1;

// Standard density-reachability DBSCAN over Euclidean distance; cluster ids
// are assigned in input-index order, noise = kNoiseLabel.
std::vector<int> dbscan(const std::vector<std::vector<double>>& points, double eps,
                        int min_pts);

struct ClusterReport {
  struct Round1Cluster {
    std::vector<std::string> members;
    std::string dominant;  // dominant level-1 category name
  };
  struct Round2Cluster {
    std::vector<std::string> members;
    std::vector<std::string> key_counters;  // top counters by mean share
  };
  std::vector<Round1Cluster> round1;
  std::vector<std::string> round1_noise;
  std::vector<Round2Cluster> round2;
  std::vector<FeatureId> prioritized;
  std::vector<std::string> excluded;  // counters judged minor
  std::string note;
};

// Round 1 clusters level-1 shares and tags dominants; round 2 re-clusters
// the backend-dominant members on level-2 shares (DBSCAN noise points are
// kept as singleton clusters so sparse suites still yield priorities).
// Counters below the exclusion threshold are dropped; the rest map to
// FeatureIds through counter_feature_map(), ordered by mean share.
ClusterReport two_round_cluster(const std::map<std::string, RunResult>& results,
                                double eps1 = 0.15, double eps2 = 0.10, int min_pts = 2,
                                double exclusion_threshold = 0.05);

const std::map<std::string, std::vector<FeatureId>>& counter_feature_map();

void to_json(nlohmann::json& j, const ClusterReport& r);

}  // namespace cliff
