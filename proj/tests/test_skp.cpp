#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "cliff/generators.hpp"
#include "cliff/skp.hpp"

using namespace cliff;

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// independent density-reachability reference: cores by neighbor count (self
// included), clusters as connected components of the core-core graph, border
// points adjacent to some core, the rest noise
struct Reference {
  std::vector<char> core;
  std::vector<int> core_component;  // -1 for non-core
  std::vector<char> noise;
};

Reference reference_dbscan(const std::vector<std::vector<double>>& pts, double eps,
                           int min_pts) {
  size_t n = pts.size();
  Reference ref;
  ref.core.assign(n, 0);
  ref.core_component.assign(n, -1);
  ref.noise.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    int cnt = 0;
    for (size_t j = 0; j < n; ++j)
      if (dist(pts[i], pts[j]) <= eps) cnt++;
    ref.core[i] = cnt >= min_pts;
  }
  int comp = 0;
  for (size_t i = 0; i < n; ++i) {
    if (!ref.core[i] || ref.core_component[i] != -1) continue;
    std::vector<size_t> stack{i};
    ref.core_component[i] = comp;
    while (!stack.empty()) {
      size_t u = stack.back();
      stack.pop_back();
      for (size_t v = 0; v < n; ++v)
        if (ref.core[v] && ref.core_component[v] == -1 && dist(pts[u], pts[v]) <= eps) {
          ref.core_component[v] = comp;
          stack.push_back(v);
        }
    }
    comp++;
  }
  for (size_t i = 0; i < n; ++i) {
    if (ref.core[i]) continue;
    bool adjacent = false;
    for (size_t j = 0; j < n; ++j)
      if (ref.core[j] && dist(pts[i], pts[j]) <= eps) adjacent = true;
    ref.noise[i] = !adjacent;
  }
  return ref;
}

std::map<std::string, RunResult> run_suite() {
  CoreConfig cfg;
  std::map<std::string, RunResult> results;
  for (const Snippet& s : gen_workload_suite()) results[s.label] = simulate(cfg, s);
  return results;
}

}  // namespace

TEST_CASE("dbscan matches density-reachability reference on random instances") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 8 + rng() % 33;
    double eps = 0.08 + 0.22 * coord(rng);
    int min_pts = 2 + static_cast<int>(rng() % 3);
    std::vector<std::vector<double>> pts;
    for (size_t i = 0; i < n; ++i) pts.push_back({coord(rng), coord(rng), coord(rng), coord(rng)});

    std::vector<int> labels = dbscan(pts, eps, min_pts);
    Reference ref = reference_dbscan(pts, eps, min_pts);
    CAPTURE(trial);

    for (size_t i = 0; i < n; ++i) {
      // noise is exact
      CHECK((labels[i] == kNoiseLabel) == static_cast<bool>(ref.noise[i]));
      if (ref.core[i]) {
        // core labels partition exactly by density-connected component
        for (size_t j = i + 1; j < n; ++j)
          if (ref.core[j])
            CHECK((labels[i] == labels[j]) ==
                  (ref.core_component[i] == ref.core_component[j]));
      } else if (!ref.noise[i]) {
        // border points carry the label of an adjacent core
        bool ok = false;
        for (size_t j = 0; j < n; ++j)
          if (ref.core[j] && labels[j] == labels[i] && dist(pts[i], pts[j]) <= eps) ok = true;
        CHECK(ok);
      }
    }
    int nclusters = *std::max_element(labels.begin(), labels.end()) + 1;
    int ncomponents = 0;
    for (size_t i = 0; i < n; ++i)
      ncomponents = std::max(ncomponents, ref.core_component[i] + 1);
    CHECK(nclusters == ncomponents);
  }
}

TEST_CASE("dbscan is permutation-consistent") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 24; ++i) pts.push_back({coord(rng), coord(rng), coord(rng), coord(rng)});
  std::vector<int> base = dbscan(pts, 0.2, 2);
  std::set<int> base_clusters(base.begin(), base.end());

  std::vector<size_t> perm(pts.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<double>> shuffled;
  for (size_t i : perm) shuffled.push_back(pts[i]);
  std::vector<int> out = dbscan(shuffled, 0.2, 2);

  std::set<int> out_clusters(out.begin(), out.end());
  CHECK(out_clusters.size() == base_clusters.size());
  // the set of core-noise decisions is order-independent
  for (size_t k = 0; k < perm.size(); ++k)
    CHECK((out[k] == kNoiseLabel) == (base[perm[k]] == kNoiseLabel));
}

TEST_CASE("dbscan rejects bad parameters") {
  CHECK_THROWS(dbscan({{0, 0}}, 0.0, 2));
  CHECK_THROWS(dbscan({{0, 0}}, 0.1, 0));
  // min_pts above the population: everything is noise
  auto labels = dbscan({{0, 0}, {0.01, 0}, {1, 1}}, 0.1, 5);
  for (int l : labels) CHECK(l == kNoiseLabel);
}

TEST_CASE("feature matrix: build, validate, csv round trip") {
  auto results = run_suite();
  FeatureMatrix m = build_matrix(results);
  CHECK(m.workloads.size() == results.size());
  CHECK(m.counters.size() == static_cast<size_t>(kNumL1 + kNumL2));
  CHECK(validate_matrix(m).empty());

  FeatureMatrix back = matrix_from_csv(matrix_to_csv(m));
  CHECK(back.workloads == m.workloads);
  CHECK(back.counters == m.counters);
  REQUIRE(back.values.size() == m.values.size());
  for (size_t i = 0; i < m.values.size(); ++i)
    for (size_t j = 0; j < m.values[i].size(); ++j)
      CHECK(back.values[i][j] == doctest::Approx(m.values[i][j]).epsilon(1e-7));

  FeatureMatrix broken = m;
  broken.values.pop_back();
  CHECK_FALSE(validate_matrix(broken).empty());
  broken = m;
  broken.values[0][2] += 0.5;  // level-1 shares no longer sum to 1
  CHECK_FALSE(validate_matrix(broken).empty());
  CHECK_THROWS(matrix_from_csv(""));
}

TEST_CASE("counter map covers the level-2 schema") {
  const auto& m = counter_feature_map();
  for (int i = 0; i < kNumL2; ++i) CHECK(m.count(l2_name(static_cast<L2Cat>(i))));
  CHECK(m.at("LoadMemBound") == std::vector<FeatureId>{FeatureId::MemLat});
}

TEST_CASE("two-round clustering on the shipped suite prioritizes the memory subsystem") {
  ClusterReport rep = two_round_cluster(run_suite());
  bool backend_cluster = false;
  for (const auto& c : rep.round1)
    if (c.dominant == "BackendBound" && c.members.size() >= 2) backend_cluster = true;
  CHECK(backend_cluster);
  CHECK_FALSE(rep.prioritized.empty());
  CHECK(std::count(rep.prioritized.begin(), rep.prioritized.end(), FeatureId::MemLat) == 1);
  // every workload lands somewhere
  size_t placed = rep.round1_noise.size();
  for (const auto& c : rep.round1) placed += c.members.size();
  CHECK(placed == run_suite().size());
}

TEST_CASE("retiring-only suite yields no priorities, with a note") {
  std::map<std::string, RunResult> results;
  for (int i = 0; i < 3; ++i) {
    RunResult r;
    r.topdown.level1 = {0.01, 0.0, 0.01, 0.98};
    results["wl" + std::to_string(i)] = r;
  }
  ClusterReport rep = two_round_cluster(results);
  CHECK(rep.prioritized.empty());
  CHECK_FALSE(rep.note.empty());

  CHECK_THROWS(two_round_cluster(results, 0.15, 0.10, /*min_pts=*/5));
}

TEST_CASE("cluster report serializes") {
  ClusterReport rep = two_round_cluster(run_suite());
  nlohmann::json j = rep;
  CHECK(j.contains("round1"));
  CHECK(j.contains("round2"));
  CHECK(j.contains("prioritized"));
  for (const auto& f : j["prioritized"]) CHECK_NOTHROW(feature_from_name(f.get<std::string>()));
}
