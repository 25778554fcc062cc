#include "cliff/skp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cliff {

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

std::vector<std::string> validate_matrix(const FeatureMatrix& m) {
  std::vector<std::string> out;
  if (m.values.size() != m.workloads.size()) out.push_back("row count mismatch");
  for (const auto& row : m.values) {
    if (row.size() != m.counters.size()) out.push_back("column count mismatch");
    for (double v : row)
      if (!std::isfinite(v)) out.push_back("non-finite share");
  }
  // the level-1 block (first kNumL1 columns when present) must sum to 1
  if (m.counters.size() >= static_cast<size_t>(kNumL1)) {
    bool l1_block = true;
    for (int i = 0; i < kNumL1; ++i)
      if (m.counters[i] != l1_name(static_cast<L1Cat>(i))) l1_block = false;
    if (l1_block)
      for (const auto& row : m.values) {
        double s = 0;
        for (int i = 0; i < kNumL1; ++i) s += row[i];
        if (std::abs(s - 1.0) > 1e-9) out.push_back("level-1 shares do not sum to 1");
      }
  }
  return out;
}

FeatureMatrix build_matrix(const std::map<std::string, RunResult>& results) {
  FeatureMatrix m;
  for (int i = 0; i < kNumL1; ++i) m.counters.push_back(l1_name(static_cast<L1Cat>(i)));
  for (int i = 0; i < kNumL2; ++i) m.counters.push_back(l2_name(static_cast<L2Cat>(i)));
  for (const auto& [label, r] : results) {
    m.workloads.push_back(label);
    std::vector<double> row;
    for (int i = 0; i < kNumL1; ++i) row.push_back(r.topdown.level1[i]);
    for (int i = 0; i < kNumL2; ++i) row.push_back(r.topdown.level2_backend[i]);
    m.values.push_back(std::move(row));
  }
  return m;
}

std::string matrix_to_csv(const FeatureMatrix& m) {
  std::ostringstream os;
  os << "workload";
  for (const auto& c : m.counters) os << "," << c;
  os << "\n";
  os.precision(9);
  for (size_t i = 0; i < m.workloads.size(); ++i) {
    os << m.workloads[i];
    for (double v : m.values[i]) os << "," << v;
    os << "\n";
  }
  return os.str();
}

FeatureMatrix matrix_from_csv(const std::string& csv) {
  FeatureMatrix m;
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty matrix csv");
  std::istringstream hs(line);
  std::string cell;
  std::getline(hs, cell, ',');  // "workload"
  while (std::getline(hs, cell, ',')) m.counters.push_back(cell);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::getline(ls, cell, ',');
    m.workloads.push_back(cell);
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    m.values.push_back(std::move(row));
  }
  auto errs = validate_matrix(m);
  if (!errs.empty()) throw std::invalid_argument("bad matrix csv: " + errs.front());
  return m;
}

std::vector<int> dbscan(const std::vector<std::vector<double>>& points, double eps,
                        int min_pts) {
  if (eps <= 0 || min_pts < 1) throw std::invalid_argument("dbscan: bad parameters");
  size_t n = points.size();
  std::vector<int> labels(n, kNoiseLabel);
  std::vector<char> visited(n, 0);
  auto neighbors = [&](size_t i) {
    std::vector<size_t> out;
    for (size_t j = 0; j < n; ++j)
      if (dist(points[i], points[j]) <= eps) out.push_back(j);
    return out;
  };
  int next_cluster = 0;
  for (size_t i = 0; i < n; ++i) {
    if (visited[i]) continue;
    visited[i] = 1;
    auto nb = neighbors(i);
    if (static_cast<int>(nb.size()) < min_pts) continue;  // noise unless adopted later
    int cid = next_cluster++;
    labels[i] = cid;
    std::deque<size_t> queue(nb.begin(), nb.end());
    while (!queue.empty()) {
      size_t q = queue.front();
      queue.pop_front();
      if (labels[q] == kNoiseLabel) labels[q] = cid;  // border point adoption
      if (visited[q]) continue;
      visited[q] = 1;
      labels[q] = cid;
      auto qn = neighbors(q);
      if (static_cast<int>(qn.size()) >= min_pts)
        for (size_t x : qn) queue.push_back(x);
    }
  }
  return labels;
}

const std::map<std::string, std::vector<FeatureId>>& counter_feature_map() {
  static const std::map<std::string, std::vector<FeatureId>> m = {
      {"LoadL1Bound", {FeatureId::L1Lat, FeatureId::DcacheBankConflict, FeatureId::LdPipeBw}},
      {"LoadL2Bound", {FeatureId::L2Lat}},
      {"LoadL3Bound", {}},
      {"LoadMemBound", {FeatureId::MemLat}},
      {"StoreL1Bound", {FeatureId::StPipeBw, FeatureId::SqSize}},
      {"DTlbStall", {}},
      {"IntDQBandwidth", {FeatureId::DecodeBw}},
      {"FVDQBandwidth", {FeatureId::FpDispatchBw, FeatureId::FmulBw}},
      {"MemDQBound", {FeatureId::LqSize, FeatureId::SqSize, FeatureId::LoadWbBw}},
      {"MemCommitLimit", {FeatureId::RobSize}},
      {"ScalarLongExecute", {FeatureId::FmaddSplit, FeatureId::AtomicFlow}},
  };
  return m;
}

ClusterReport two_round_cluster(const std::map<std::string, RunResult>& results, double eps1,
                                double eps2, int min_pts, double exclusion_threshold) {
  if (static_cast<int>(results.size()) < min_pts)
    throw std::invalid_argument("two_round_cluster: fewer workloads than min_pts");

  std::vector<std::string> labels;
  std::vector<std::vector<double>> l1, l2;
  for (const auto& [name, r] : results) {
    labels.push_back(name);
    l1.emplace_back(r.topdown.level1.begin(), r.topdown.level1.end());
    l2.emplace_back(r.topdown.level2_backend.begin(), r.topdown.level2_backend.end());
  }

  ClusterReport rep;
  std::vector<int> r1 = dbscan(l1, eps1, min_pts);
  int nclusters = *std::max_element(r1.begin(), r1.end()) + 1;
  std::vector<size_t> backend_members;
  for (int c = 0; c < nclusters; ++c) {
    ClusterReport::Round1Cluster cluster;
    std::array<double, kNumL1> mean{};
    size_t count = 0;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (r1[i] != c) continue;
      cluster.members.push_back(labels[i]);
      for (int k = 0; k < kNumL1; ++k) mean[k] += l1[i][k];
      count++;
    }
    int dom = 0;
    for (int k = 1; k < kNumL1; ++k)
      if (mean[k] > mean[dom]) dom = k;
    cluster.dominant = l1_name(static_cast<L1Cat>(dom));
    if (dom == static_cast<int>(L1Cat::BackendBound))
      for (size_t i = 0; i < labels.size(); ++i)
        if (r1[i] == c) backend_members.push_back(i);
    rep.round1.push_back(std::move(cluster));
    (void)count;
  }
  for (size_t i = 0; i < labels.size(); ++i)
    if (r1[i] == kNoiseLabel) rep.round1_noise.push_back(labels[i]);

  if (backend_members.empty()) {
    rep.note = "no backend-dominant cluster; nothing to prioritize";
    return rep;
  }

  std::vector<std::vector<double>> pts;
  for (size_t i : backend_members) pts.push_back(l2[i]);
  std::vector<int> r2 = dbscan(pts, eps2, min_pts);
  // singleton fallback: keep DBSCAN noise as one-member clusters so a suite
  // of mutually distinct bottlenecks still produces priorities
  int next = r2.empty() ? 0 : *std::max_element(r2.begin(), r2.end()) + 1;
  for (int& lab : r2)
    if (lab == kNoiseLabel) lab = next++;

  std::array<double, kNumL2> mean_share{};
  for (int c = 0; c < next; ++c) {
    ClusterReport::Round2Cluster cluster;
    std::array<double, kNumL2> mean{};
    size_t count = 0;
    for (size_t k = 0; k < backend_members.size(); ++k) {
      if (r2[k] != c) continue;
      cluster.members.push_back(labels[backend_members[k]]);
      for (int j = 0; j < kNumL2; ++j) mean[j] += pts[k][j];
      count++;
    }
    if (count == 0) continue;
    for (int j = 0; j < kNumL2; ++j) mean[j] /= count;
    std::vector<int> order(kNumL2);
    for (int j = 0; j < kNumL2; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return mean[a] > mean[b]; });
    for (int j = 0; j < 3; ++j)
      if (mean[order[j]] >= exclusion_threshold)
        cluster.key_counters.push_back(l2_name(static_cast<L2Cat>(order[j])));
    rep.round2.push_back(std::move(cluster));
  }
  for (size_t k = 0; k < backend_members.size(); ++k)
    for (int j = 0; j < kNumL2; ++j) mean_share[j] += pts[k][j];
  for (int j = 0; j < kNumL2; ++j) mean_share[j] /= backend_members.size();

  std::vector<int> order(kNumL2);
  for (int j = 0; j < kNumL2; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return mean_share[a] > mean_share[b]; });
  std::set<FeatureId> seen;
  for (int j : order) {
    const char* name = l2_name(static_cast<L2Cat>(j));
    if (mean_share[j] < exclusion_threshold) {
      rep.excluded.push_back(name);
      continue;
    }
    for (FeatureId f : counter_feature_map().at(name))
      if (seen.insert(f).second) rep.prioritized.push_back(f);
  }
  return rep;
}

void to_json(nlohmann::json& j, const ClusterReport& r) {
  nlohmann::json round1 = nlohmann::json::array();
  for (const auto& c : r.round1)
    round1.push_back({{"members", c.members}, {"dominant", c.dominant}});
  nlohmann::json round2 = nlohmann::json::array();
  for (const auto& c : r.round2)
    round2.push_back({{"members", c.members}, {"key_counters", c.key_counters}});
  std::vector<std::string> prioritized;
  for (FeatureId f : r.prioritized) prioritized.emplace_back(feature_name(f));
  j = nlohmann::json{{"schema_version", 1}, {"round1", round1},
                     {"round1_noise", r.round1_noise}, {"round2", round2},
                     {"prioritized", prioritized}, {"excluded", r.excluded},
                     {"note", r.note}};
}

}  // namespace cliff
