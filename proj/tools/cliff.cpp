#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>

#include "cliff/campaign.hpp"

namespace fs = std::filesystem;
using namespace cliff;

namespace {

std::string default_outdir() {
  const char* env = std::getenv("CLIFF_OUTDIR");
  return env ? env : "cliff-out";
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  nlohmann::json j;
  in >> j;
  return j;
}

void write_text(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path().empty() ? "." : p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

std::vector<InferredFeature> read_inferred(const fs::path& p) {
  std::vector<InferredFeature> out;
  for (const auto& j : read_json(p).at("features")) out.push_back(j.get<InferredFeature>());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"microarchitecture calibration via single-feature benchmark families"};
  app.require_subcommand(1);

  std::string oracle, model, features = "all", outdir = default_outdir();
  std::string config, workloads;
  long seed = 0;
  bool calibrate = false;
  double flag_threshold = 5.0, eps1 = 0.15, eps2 = 0.10;
  int min_pts = 2;

  auto* gen = app.add_subcommand("gen", "generate benchmark families as JSON");
  gen->add_option("--features", features, "feature list, 'all', or @file");
  gen->add_option("--outdir", outdir, "artifact directory");

  auto* run = app.add_subcommand("run", "full campaign: generate, simulate, infer, diff");
  run->add_option("--oracle", oracle, "reference config JSON")->required();
  run->add_option("--model", model, "config under calibration")->required();
  run->add_option("--features", features, "feature list, 'all', or @file");
  run->add_option("--outdir", outdir, "artifact directory");
  run->add_option("--seed", seed, "recorded in the manifest");
  run->add_flag("--calibrate", calibrate, "also calibrate and re-run");
  run->add_option("--flag-threshold-pct", flag_threshold, "discrepancy flag threshold");

  auto* skp = app.add_subcommand("skp", "cluster Top-Down vectors to prioritize features");
  skp->add_option("--config", config, "config JSON to run workloads under")->required();
  skp->add_option("--workloads", workloads, "directory of snippet JSONs (default: shipped suite)");
  skp->add_option("--outdir", outdir, "artifact directory");
  skp->add_option("--eps1", eps1, "round-1 DBSCAN radius");
  skp->add_option("--eps2", eps2, "round-2 DBSCAN radius");
  skp->add_option("--min-pts", min_pts, "DBSCAN core-point threshold");

  auto* analyze = app.add_subcommand("analyze", "re-diff inferred_{oracle,model}.json");
  analyze->add_option("--outdir", outdir, "directory holding the inferred JSONs");
  analyze->add_option("--flag-threshold-pct", flag_threshold, "discrepancy flag threshold");

  auto* cal = app.add_subcommand("calibrate", "apply oracle inferences to a model config");
  cal->add_option("--model", model, "config under calibration")->required();
  cal->add_option("--outdir", outdir, "directory holding discrepancy.json + inferred_oracle.json");

  auto* report = app.add_subcommand("report", "render discrepancy.json as a table");
  report->add_option("--outdir", outdir, "directory holding discrepancy.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      auto fams = gen_all(parse_feature_list(features));
      fs::create_directories(fs::path(outdir) / "families");
      for (const auto& fam : fams)
        write_text(fs::path(outdir) / "families" / (fam.name + ".family.json"),
                   nlohmann::json(fam).dump(2) + "\n");
      std::printf("wrote %zu families to %s/families\n", fams.size(), outdir.c_str());
    } else if (run->parsed()) {
      Campaign c;
      c.oracle_path = oracle;
      c.model_path = model;
      c.features = parse_feature_list(features);
      c.outdir = outdir;
      c.seed = seed;
      c.calibrate = calibrate;
      c.flag_threshold_pct = flag_threshold;
      DiscrepancyReport rep = run_campaign(c);
      std::printf("%s", render_report(rep).c_str());
    } else if (skp->parsed()) {
      SkpRun r;
      r.config_path = config;
      r.workload_dir = workloads;
      r.outdir = outdir;
      r.eps1 = eps1;
      r.eps2 = eps2;
      r.min_pts = min_pts;
      ClusterReport rep = run_skp(r);
      if (rep.prioritized.empty())
        std::printf("no backend-dominant cluster; prioritized list is empty\n");
      else
        for (FeatureId f : rep.prioritized) std::printf("%s\n", feature_name(f));
    } else if (analyze->parsed()) {
      auto o = read_inferred(fs::path(outdir) / "inferred_oracle.json");
      auto m = read_inferred(fs::path(outdir) / "inferred_model.json");
      DiscrepancyReport rep = diff_targets(o, m, flag_threshold);
      write_text(fs::path(outdir) / "discrepancy.json", nlohmann::json(rep).dump(2) + "\n");
      write_text(fs::path(outdir) / "report.txt", render_report(rep));
      std::printf("%s", render_report(rep).c_str());
    } else if (cal->parsed()) {
      CoreConfig before = load_config(model);
      DiscrepancyReport rep = read_json(fs::path(outdir) / "discrepancy.json");
      auto o = read_inferred(fs::path(outdir) / "inferred_oracle.json");
      CoreConfig after = auto_calibrate(before, rep, o);
      save_config(after, (fs::path(outdir) / "model-after.json").string());
      std::printf("wrote %s/model-after.json\n", outdir.c_str());
    } else if (report->parsed()) {
      DiscrepancyReport rep = read_json(fs::path(outdir) / "discrepancy.json");
      std::printf("%s", render_report(rep).c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
