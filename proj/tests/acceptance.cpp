// End-to-end acceptance gate: one pass/fail line per criterion, nonzero exit
// on any failure. Everything here goes through the public API only.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cliff/campaign.hpp"

using namespace cliff;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void verdict(int num, const std::string& what, bool ok, const std::string& detail = "") {
  std::printf("criterion %2d [%s] %s%s%s\n", num, ok ? "PASS" : "FAIL", what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) g_failures++;
}

std::string presets() { return std::string(CLIFF_SOURCE_DIR) + "/presets/"; }

fs::path fresh_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("cliff-acceptance-" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::map<FeatureId, double> infer_all(const CoreConfig& cfg) {
  std::map<FeatureId, double> out;
  std::set<FeatureId> features;
  for (FeatureId f : all_features()) features.insert(f);
  for (const auto& fam : gen_all(features))
    out[fam.feature] = infer_feature(fam, run_family(cfg, fam)).value;
  return out;
}

double storeset_gain(const CoreConfig& cfg) {
  Snippet w = gen_storeset_alias_workload();
  CoreConfig speculative = cfg;
  speculative.mem_dep_policy = MemDepPolicy::StoreSet;
  CoreConfig conservative = cfg;
  conservative.mem_dep_policy = MemDepPolicy::Conservative;
  double fast = simulate(speculative, w).cycles;
  double slow = simulate(conservative, w).cycles;
  return (slow - fast) / slow * 100.0;
}

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// --- criteria ---

void criterion_1(const std::map<FeatureId, double>& oracle_inf) {
  std::ostringstream why;
  bool ok = true;
  auto exact = [&](FeatureId f, double want) {
    double got = oracle_inf.at(f);
    if (got != want) {
      ok = false;
      why << feature_name(f) << "=" << got << " want " << want << "; ";
    }
  };
  auto near = [&](FeatureId f, double want, double tol) {
    double got = oracle_inf.at(f);
    if (std::abs(got - want) > tol) {
      ok = false;
      why << feature_name(f) << "=" << got << " want " << want << "+/-" << tol << "; ";
    }
  };
  exact(FeatureId::RobSize, 160);
  exact(FeatureId::LqSize, 72);
  exact(FeatureId::SqSize, 56);
  exact(FeatureId::IntPrf, 224);
  exact(FeatureId::FpPrf, 192);
  exact(FeatureId::DcacheBankCount, 8);
  exact(FeatureId::RobCompressMax, 6);
  exact(FeatureId::LoadWbBw, 3);
  near(FeatureId::L1Lat, 4, 1);
  near(FeatureId::L2Lat, 16, 1);
  near(FeatureId::MemLat, 227, 1);
  near(FeatureId::LdPipeBw, 3, 0.05 * 3);
  near(FeatureId::StPipeBw, 2, 0.05 * 2);
  near(FeatureId::FmulBw, 3, 0.05 * 3);
  near(FeatureId::FpDispatchBw, 3, 0.05 * 3);
  verdict(1, "oracle parameter recovery", ok, why.str());
}

void criterion_2(const CoreConfig& oracle) {
  std::ostringstream why;
  bool ok = true;
  RobSuite suite = gen_rob_compression_suite();
  for (const auto& e : suite.stage1) {
    auto rs = run_family(oracle, e.family);
    Series s = family_series(e.family, rs);
    auto cp = detect_change_point(s);
    if (e.expected_bottleneck == "none") {
      if (cp) {
        ok = false;
        why << e.fragment << ": unexpected cliff; ";
      }
      continue;
    }
    std::string got = bottleneck_class(rs.back());
    if (!cp || got != e.expected_bottleneck) {
      ok = false;
      why << e.fragment << ": got " << got << " want " << e.expected_bottleneck << "; ";
    }
  }
  auto rs3 = run_family(oracle, suite.stage3);
  double base = rs3[0].cycles;
  for (size_t i = 0; i < suite.stage3.axis.size(); ++i) {
    long n = suite.stage3.axis[i];
    bool flat = rs3[i].cycles <= base * 1.02;
    if (n <= 6 && !flat) {
      ok = false;
      why << "group of " << n << " not at baseline; ";
    }
    if (n == 7 && rs3[i].cycles <= rs3[i - 1].cycles) {
      ok = false;
      why << "no drop at group of 7; ";
    }
  }
  verdict(2, "rob-compression case study bottlenecks", ok, why.str());
}

fs::path criterion_3() {
  fs::path out = fresh_dir("campaign");
  Campaign c;
  c.oracle_path = presets() + "oracle-kmh.json";
  c.model_path = presets() + "model-before.json";
  c.outdir = out.string();
  c.calibrate = true;
  DiscrepancyReport after = run_campaign(c);

  DiscrepancyReport before =
      nlohmann::json::parse(slurp(out / "discrepancy.json")).get<DiscrepancyReport>();
  std::set<FeatureId> flagged;
  for (const auto& row : before.rows)
    if (row.flagged) flagged.insert(row.feature);
  const FeatureId required[] = {
      FeatureId::RobSize,     FeatureId::RobCompressExists,
      FeatureId::LqSize,      FeatureId::SqSize,
      FeatureId::L2Lat,       FeatureId::MemLat,
      FeatureId::LoadWbBw,    FeatureId::DcacheBankConflict,
      FeatureId::NukeReplay,  FeatureId::StaStdSplit,
  };
  std::ostringstream why;
  bool ok = true;
  for (FeatureId f : required)
    if (!flagged.count(f)) {
      ok = false;
      why << feature_name(f) << " not flagged; ";
    }
  if (after.aggregate_pct > 2.0) {
    ok = false;
    why << "post-calibration aggregate " << after.aggregate_pct << "% > 2%; ";
  }
  verdict(3, "discrepancy flags and calibration convergence", ok, why.str());
  return out;
}

void criterion_4(const CoreConfig& oracle, const fs::path& campaign_out) {
  CoreConfig model = load_config(presets() + "model-before.json");
  CoreConfig after = load_config((campaign_out / "model-after.json").string());
  double g_oracle = storeset_gain(oracle);
  double g_model = storeset_gain(model);
  double g_after = storeset_gain(after);
  std::ostringstream why;
  why << "gain oracle " << g_oracle << " model " << g_model << " after " << g_after;
  bool ok = std::abs(g_model - g_oracle) >= 10.0 && g_model > g_oracle &&
            std::abs(g_after - g_oracle) <= 1.0;
  verdict(4, "store-set speedup bias closes after calibration", ok, why.str());
}

void criterion_5(const CoreConfig& oracle, const std::map<FeatureId, double>& oracle_inf) {
  auto [stride_fam, pair_fam] = gen_bank_cliffs();
  auto ratio_under = [&](const CoreConfig& cfg) {
    auto rs = run_family(cfg, pair_fam);
    return rs[0].op_rate(Op::Load) / rs[1].op_rate(Op::Load);  // same-word / spread
  };
  double r_oracle = ratio_under(oracle);
  CoreConfig unbanked = oracle;
  unbanked.dcache_banks = 0;
  double r_ideal = ratio_under(unbanked);
  double banks = oracle_inf.at(FeatureId::DcacheBankCount);
  std::ostringstream why;
  why << "ratio oracle " << r_oracle << " unbanked " << r_ideal << " banks " << banks;
  verdict(5, "bank-conflict contrast and bank-count inference",
          r_oracle <= 0.55 && r_ideal >= 0.95 && banks == 8, why.str());
}

void criterion_6(const CoreConfig& oracle) {
  CliffFamily fam = gen_phr_cliff(default_axis(FeatureId::PhrLen));
  long step = fam.axis[1] - fam.axis[0];
  std::ostringstream why;
  bool ok = true;
  for (int len : {60, 120, 200}) {
    CoreConfig cfg = oracle;
    cfg.phr_len = len;
    double got = infer_feature(fam, run_family(cfg, fam)).value;
    why << len << "->" << got << " ";
    if (std::abs(got - len) > step) ok = false;
  }
  verdict(6, "history-length inflection within one axis step", ok, why.str());
}

void criterion_7() {
  CoreConfig boom = load_config(presets() + "boom-small.json");
  double lq = infer_feature(gen_all({FeatureId::LqSize}).front(),
                            run_family(boom, gen_all({FeatureId::LqSize}).front()))
                  .value;
  double sq = infer_feature(gen_all({FeatureId::SqSize}).front(),
                            run_family(boom, gen_all({FeatureId::SqSize}).front()))
                  .value;
  std::ostringstream why;
  why << "LQ " << lq << " SQ " << sq;
  verdict(7, "narrow-core queue sizes recovered exactly", lq == 24 && sq == 24, why.str());
}

bool dbscan_matches_reference() {
  std::mt19937 rng(97);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 8 + rng() % 33;
    double eps = 0.08 + 0.22 * coord(rng);
    int min_pts = 2 + static_cast<int>(rng() % 3);
    std::vector<std::vector<double>> pts;
    for (size_t i = 0; i < n; ++i)
      pts.push_back({coord(rng), coord(rng), coord(rng), coord(rng)});
    std::vector<int> labels = dbscan(pts, eps, min_pts);

    std::vector<char> core(n, 0);
    for (size_t i = 0; i < n; ++i) {
      int cnt = 0;
      for (size_t j = 0; j < n; ++j)
        if (euclid(pts[i], pts[j]) <= eps) cnt++;
      core[i] = cnt >= min_pts;
    }
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (size_t i = 0; i < n; ++i) {
      if (!core[i] || comp[i] != -1) continue;
      std::vector<size_t> stack{i};
      comp[i] = ncomp;
      while (!stack.empty()) {
        size_t u = stack.back();
        stack.pop_back();
        for (size_t v = 0; v < n; ++v)
          if (core[v] && comp[v] == -1 && euclid(pts[u], pts[v]) <= eps) {
            comp[v] = ncomp;
            stack.push_back(v);
          }
      }
      ncomp++;
    }
    for (size_t i = 0; i < n; ++i) {
      if (core[i]) {
        for (size_t j = i + 1; j < n; ++j)
          if (core[j] && (labels[i] == labels[j]) != (comp[i] == comp[j])) return false;
        if (labels[i] == kNoiseLabel) return false;
      } else {
        bool adjacent = false, adopted = false;
        for (size_t j = 0; j < n; ++j)
          if (core[j] && euclid(pts[i], pts[j]) <= eps) {
            adjacent = true;
            if (labels[j] == labels[i]) adopted = true;
          }
        if (adjacent != (labels[i] != kNoiseLabel)) return false;
        if (adjacent && !adopted) return false;
      }
    }
  }
  return true;
}

bool change_point_matches_reference() {
  std::mt19937 rng(181);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int n = 12 + static_cast<int>(rng() % 29);
    int knee = 3 + static_cast<int>(rng() % (n - 7));
    double base = 50 + double(rng() % 200);
    double slope = base * (0.05 + 0.15 * (double(rng() % 100) / 100.0));
    std::uniform_real_distribution<double> noise(-0.02 * base, 0.02 * base);
    Series s;
    for (int i = 0; i < n; ++i) {
      double v = i <= knee ? base : base + slope * (i - knee);
      s.points.push_back({i + 1, v + noise(rng)});
    }
    auto cp = detect_change_point(s);
    if (!cp) continue;
    checked++;

    // exhaustive two-segment least-squares reference
    auto sse = [&](int lo, int hi) {
      int m = hi - lo;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (int i = lo; i < hi; ++i) {
        double x = s.points[i].pressure, y = s.points[i].value;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      double denom = m * sxx - sx * sx;
      double b = denom == 0 ? 0 : (m * sxy - sx * sy) / denom;
      double a = (sy - b * sx) / m;
      double out = 0;
      for (int i = lo; i < hi; ++i) {
        double r = s.points[i].value - (a + b * s.points[i].pressure);
        out += r * r;
      }
      return out;
    };
    int best_k = -1;
    double best = std::numeric_limits<double>::max();
    for (int k = 1; k + 3 <= n; ++k) {
      double v = sse(0, k + 1) + sse(k + 1, n);
      if (v < best) {
        best = v;
        best_k = k;
      }
    }
    if (std::abs(cp->pressure - s.points[best_k].pressure) > 1) return false;
  }
  return checked >= 80;
}

void criterion_8() {
  bool db = dbscan_matches_reference();
  bool cp = change_point_matches_reference();
  std::ostringstream why;
  if (!db) why << "dbscan mismatch; ";
  if (!cp) why << "change-point mismatch; ";
  verdict(8, "analyzers match brute-force references", db && cp, why.str());
}

void criterion_9() {
  Campaign base;
  base.oracle_path = presets() + "oracle-kmh.json";
  base.model_path = presets() + "model-before.json";
  base.features = {FeatureId::LqSize, FeatureId::MemLat, FeatureId::MoveElim,
                   FeatureId::PhrLen, FeatureId::DcacheBankCount};
  base.calibrate = true;
  fs::path a = fresh_dir("det-a");
  fs::path b = fresh_dir("det-b");
  Campaign ca = base, cb = base;
  ca.outdir = a.string();
  cb.outdir = b.string();
  run_campaign(ca);
  run_campaign(cb);
  bool ok = true;
  std::ostringstream why;
  size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    fs::path rel = fs::relative(e.path(), a);
    files++;
    if (slurp(e.path()) != slurp(b / rel)) {
      ok = false;
      why << rel.string() << " differs; ";
    }
  }
  if (files < 12) {
    ok = false;
    why << "only " << files << " artifacts; ";
  }
  verdict(9, "identical campaign inputs give byte-identical artifacts", ok, why.str());
}

void criterion_10() {
  fs::path out = fresh_dir("skp");
  SkpRun r;
  r.config_path = presets() + "oracle-kmh.json";
  r.outdir = out.string();
  ClusterReport rep = run_skp(r);
  bool backend = false;
  for (const auto& c : rep.round1)
    if (c.dominant == "BackendBound" && c.members.size() >= 2) backend = true;
  bool mem = std::count(rep.prioritized.begin(), rep.prioritized.end(), FeatureId::MemLat) > 0;
  std::ostringstream why;
  if (!backend) why << "no backend-dominant cluster; ";
  if (!mem) why << "MemLat not prioritized; ";
  verdict(10, "workload suite clusters toward the memory subsystem", backend && mem,
          why.str());
}

}  // namespace

int main() {
  CoreConfig oracle = load_config(presets() + "oracle-kmh.json");
  std::map<FeatureId, double> oracle_inf = infer_all(oracle);

  criterion_1(oracle_inf);
  criterion_2(oracle);
  fs::path campaign_out = criterion_3();
  criterion_4(oracle, campaign_out);
  criterion_5(oracle, oracle_inf);
  criterion_6(oracle);
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();

  if (g_failures) {
    std::printf("ACCEPTANCE: %d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("ACCEPTANCE: all 10 criteria passed\n");
  return 0;
}
