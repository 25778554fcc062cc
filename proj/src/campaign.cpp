#include "cliff/campaign.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace cliff {

namespace {

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

std::string series_csv(const Series& s) {
  std::ostringstream os;
  os.precision(9);
  os << "pressure,value\n";
  for (const auto& p : s.points) os << p.pressure << "," << p.value << "\n";
  return os.str();
}

struct RoleResults {
  std::vector<std::vector<RunResult>> per_family;
  std::vector<InferredFeature> inferred;
};

RoleResults run_role(const CoreConfig& cfg, const std::vector<CliffFamily>& families) {
  RoleResults out;
  out.per_family.resize(families.size());
  // flatten (family, pressure) pairs for the parallel fan-out
  std::vector<std::pair<int, int>> jobs;
  for (size_t f = 0; f < families.size(); ++f) {
    out.per_family[f].resize(families[f].snippets.size());
    for (size_t p = 0; p < families[f].snippets.size(); ++p)
      jobs.emplace_back(static_cast<int>(f), static_cast<int>(p));
  }
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(jobs.size()); ++i) {
    auto [f, p] = jobs[i];
    out.per_family[f][p] = simulate(cfg, families[f].snippets[p]);
  }
  for (size_t f = 0; f < families.size(); ++f)
    out.inferred.push_back(infer_feature(families[f], out.per_family[f]));
  return out;
}

void write_role_artifacts(const fs::path& outdir, const std::string& role,
                          const std::vector<CliffFamily>& families, const RoleResults& rr) {
  for (size_t f = 0; f < families.size(); ++f)
    write_file(outdir / "series" / (families[f].name + "." + role + ".csv"),
               series_csv(family_series(families[f], rr.per_family[f])));
  nlohmann::json inferred = {{"schema_version", 1}, {"features", rr.inferred}};
  write_file(outdir / ("inferred_" + role + ".json"), inferred.dump(2) + "\n");
}

}  // namespace

std::vector<RunResult> run_family(const CoreConfig& cfg, const CliffFamily& family) {
  std::vector<RunResult> out(family.snippets.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(family.snippets.size()); ++i)
    out[i] = simulate(cfg, family.snippets[i]);
  return out;
}

DiscrepancyReport run_campaign(const Campaign& c) {
  CoreConfig oracle = load_config(c.oracle_path);
  CoreConfig model = load_config(c.model_path);

  std::set<FeatureId> features = c.features;
  if (features.empty())
    for (FeatureId f : all_features()) features.insert(f);
  for (const auto& [f, axis] : c.axis_overrides)
    if (!features.count(f))
      throw std::invalid_argument(std::string("axis override for unselected feature ") +
                                  feature_name(f));

  std::vector<CliffFamily> families = gen_all(features, c.axis_overrides);

  fs::path outdir(c.outdir);
  fs::create_directories(outdir / "families");
  fs::create_directories(outdir / "series");

  for (const auto& fam : families)
    write_file(outdir / "families" / (fam.name + ".family.json"),
               nlohmann::json(fam).dump(2) + "\n");

  RoleResults oracle_rr = run_role(oracle, families);
  RoleResults model_rr = run_role(model, families);
  write_role_artifacts(outdir, "oracle", families, oracle_rr);
  write_role_artifacts(outdir, "model", families, model_rr);

  DiscrepancyReport report =
      diff_targets(oracle_rr.inferred, model_rr.inferred, c.flag_threshold_pct);
  write_file(outdir / "discrepancy.json", nlohmann::json(report).dump(2) + "\n");
  write_file(outdir / "report.txt", render_report(report));

  nlohmann::json manifest = {{"schema_version", 1},
                             {"seed", c.seed},
                             {"oracle_config", nlohmann::json(oracle)},
                             {"model_config", nlohmann::json(model)},
                             {"calibrate", c.calibrate}};
  write_file(outdir / "manifest.json", manifest.dump(2) + "\n");

  if (!c.calibrate) return report;

  CoreConfig after = auto_calibrate(model, report, oracle_rr.inferred);
  save_config(after, (outdir / "model-after.json").string());
  RoleResults after_rr = run_role(after, families);
  write_role_artifacts(outdir, "model_after", families, after_rr);
  DiscrepancyReport report_after =
      diff_targets(oracle_rr.inferred, after_rr.inferred, c.flag_threshold_pct);
  write_file(outdir / "discrepancy_after.json", nlohmann::json(report_after).dump(2) + "\n");
  write_file(outdir / "report_after.txt", render_report(report_after));
  return report_after;
}

ClusterReport run_skp(const SkpRun& r) {
  CoreConfig cfg = load_config(r.config_path);
  std::vector<Snippet> suite;
  if (r.workload_dir.empty()) {
    suite = gen_workload_suite();
  } else {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(r.workload_dir))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      std::ifstream in(p);
      nlohmann::json j;
      in >> j;
      Snippet s = j.get<Snippet>();
      if (s.label.empty()) s.label = p.stem().string();
      suite.push_back(std::move(s));
    }
  }
  if (static_cast<int>(suite.size()) < r.min_pts)
    throw std::invalid_argument("run_skp: fewer workloads than min_pts");

  std::vector<RunResult> results(suite.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(suite.size()); ++i)
    results[i] = simulate(cfg, suite[i]);

  std::map<std::string, RunResult> by_label;
  for (size_t i = 0; i < suite.size(); ++i) by_label[suite[i].label] = results[i];

  ClusterReport report =
      two_round_cluster(by_label, r.eps1, r.eps2, r.min_pts, r.exclusion_threshold);

  fs::path outdir(r.outdir);
  fs::create_directories(outdir);
  write_file(outdir / "feature_matrix.csv", matrix_to_csv(build_matrix(by_label)));
  write_file(outdir / "cluster_report.json", nlohmann::json(report).dump(2) + "\n");
  std::vector<std::string> names;
  for (FeatureId f : report.prioritized) names.emplace_back(feature_name(f));
  nlohmann::json pri = {{"schema_version", 1}, {"features", names}};
  write_file(outdir / "prioritized.json", pri.dump(2) + "\n");
  return report;
}

std::set<FeatureId> parse_feature_list(const std::string& spec) {
  std::set<FeatureId> out;
  if (spec.empty() || spec == "all") {
    for (FeatureId f : all_features()) out.insert(f);
    return out;
  }
  if (spec[0] == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw std::runtime_error("cannot open feature list: " + spec.substr(1));
    nlohmann::json j;
    in >> j;
    for (const auto& name : j.at("features"))
      out.insert(feature_from_name(name.get<std::string>()));
    return out;
  }
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) out.insert(feature_from_name(tok));
  if (out.empty()) throw std::invalid_argument("empty feature list");
  return out;
}

}  // namespace cliff
