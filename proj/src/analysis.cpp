#include "cliff/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cliff {

namespace {

struct Ols {
  double slope = 0, intercept = 0, sse = 0;
};

Ols ols(const std::vector<SeriesPoint>& pts, size_t lo, size_t hi) {  // [lo, hi)
  size_t n = hi - lo;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = lo; i < hi; ++i) {
    sx += pts[i].pressure;
    sy += pts[i].value;
    sxx += double(pts[i].pressure) * pts[i].pressure;
    sxy += double(pts[i].pressure) * pts[i].value;
  }
  Ols o;
  double denom = n * sxx - sx * sx;
  if (denom != 0) {
    o.slope = (n * sxy - sx * sy) / denom;
    o.intercept = (sy - o.slope * sx) / n;
  } else {
    o.intercept = sy / n;
  }
  for (size_t i = lo; i < hi; ++i) {
    double r = pts[i].value - (o.slope * pts[i].pressure + o.intercept);
    o.sse += r * r;
  }
  return o;
}

double ipc_of(const RunResult& r, std::optional<Op> op) {
  return op ? r.op_rate(*op) : r.ipc;
}

Series cycles_series(const CliffFamily& fam, const std::vector<RunResult>& rs) {
  Series s;
  s.kind = ValueKind::Cycles;
  for (size_t i = 0; i < rs.size(); ++i)
    s.points.push_back({fam.axis[i], static_cast<double>(rs[i].cycles)});
  return s;
}

Series ipc_series(const CliffFamily& fam, const std::vector<RunResult>& rs,
                  std::optional<Op> op) {
  Series s;
  s.kind = ValueKind::Ipc;
  for (size_t i = 0; i < rs.size(); ++i) s.points.push_back({fam.axis[i], ipc_of(rs[i], op)});
  return s;
}

[[noreturn]] void fail(const CliffFamily& fam, const std::string& why) {
  throw std::runtime_error("inference failed for family '" + fam.name + "': " + why);
}

}  // namespace

std::vector<std::string> validate_series(const Series& s, size_t min_pts) {
  std::vector<std::string> out;
  if (s.points.size() < min_pts) out.push_back("series too short");
  for (size_t i = 1; i < s.points.size(); ++i)
    if (s.points[i].pressure <= s.points[i - 1].pressure)
      out.push_back("pressures not strictly increasing");
  for (const auto& p : s.points)
    if (!std::isfinite(p.value)) out.push_back("non-finite value");
  return out;
}

std::optional<ChangePoint> detect_change_point(const Series& s) {
  if (!validate_series(s, 4).empty()) throw std::invalid_argument("change point: bad series");
  const auto& pts = s.points;
  size_t n = pts.size();
  Ols single = ols(pts, 0, n);
  double best_sse = std::numeric_limits<double>::infinity();
  size_t best_k = 0;
  // left segment [0, k], right segment [k+1, n); both need >= 2 points
  for (size_t k = 1; k + 2 < n; ++k) {
    double sse = ols(pts, 0, k + 1).sse + ols(pts, k + 1, n).sse;
    if (sse < best_sse - 1e-12) {
      best_sse = sse;
      best_k = k;
    }
  }
  if (single.sse <= 0) return std::nullopt;
  double improvement = 1.0 - best_sse / single.sse;
  if (improvement < 0.10) return std::nullopt;
  return ChangePoint{pts[best_k].pressure, improvement};
}

PlateauResult detect_plateau(const Series& s) {
  if (!validate_series(s, 2).empty()) throw std::invalid_argument("plateau: bad series");
  const auto& pts = s.points;
  size_t n = pts.size();
  for (size_t i = 0; i + 2 <= n; ++i) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0;
    for (size_t j = i; j < n; ++j) {
      lo = std::min(lo, pts[j].value);
      hi = std::max(hi, pts[j].value);
      sum += pts[j].value;
    }
    double mean = sum / (n - i);
    if (mean != 0 && (hi - lo) / std::abs(mean) < 0.02)
      return PlateauResult{mean, pts[i].pressure};
  }
  throw std::runtime_error("no plateau: no qualifying suffix");
}

SlopeFit fit_slope(const Series& s) {
  if (!validate_series(s, 3).empty()) throw std::invalid_argument("slope: bad series");
  if (s.points.front().pressure == s.points.back().pressure)
    throw std::invalid_argument("slope: degenerate pressure axis");
  Ols o = ols(s.points, 0, s.points.size());
  return SlopeFit{o.slope, o.intercept, std::sqrt(o.sse / s.points.size())};
}

PairwiseVerdict pairwise_verdict(const RunResult& a, const RunResult& b,
                                 double threshold_pct) {
  double hi = std::max(a.ipc, b.ipc);
  double delta = hi > 0 ? std::abs(a.ipc - b.ipc) / hi * 100.0 : 0.0;
  return PairwiseVerdict{delta > threshold_pct, delta};
}

bool feature_is_boolean(FeatureId f) {
  switch (f) {
    case FeatureId::RobCompressExists:
    case FeatureId::DcacheBankConflict:
    case FeatureId::MoveElim:
    case FeatureId::FmaddSplit:
    case FeatureId::StaStdSplit:
    case FeatureId::NukeReplay:
      return true;
    default:
      return false;
  }
}

Series family_series(const CliffFamily& fam, const std::vector<RunResult>& rs) {
  switch (fam.feature) {
    case FeatureId::DecodeBw: return ipc_series(fam, rs, std::nullopt);
    case FeatureId::LdPipeBw: return ipc_series(fam, rs, Op::Load);
    case FeatureId::StPipeBw: return ipc_series(fam, rs, Op::Store);
    case FeatureId::FmulBw: return ipc_series(fam, rs, Op::FpMul);
    case FeatureId::FpDispatchBw: return ipc_series(fam, rs, Op::FpAlu);
    case FeatureId::DcacheBankCount:
    case FeatureId::DcacheBankConflict: return ipc_series(fam, rs, Op::Load);
    case FeatureId::PhrLen: {
      Series s;
      s.kind = ValueKind::EventCount;
      for (size_t i = 0; i < rs.size(); ++i)
        s.points.push_back({fam.axis[i], static_cast<double>(rs[i].event("mispredicts"))});
      return s;
    }
    default: return cycles_series(fam, rs);
  }
}

InferredFeature infer_feature(const CliffFamily& fam, const std::vector<RunResult>& rs) {
  if (rs.size() != fam.axis.size()) fail(fam, "results do not cover the axis");
  InferredFeature out;
  out.feature = fam.feature;
  out.method = fam.response_shape;
  out.corrected_by = fam.overhead;
  out.confidence = 1.0;

  long measure = fam.snippets.empty() ? 1 : fam.snippets.front().measure_iterations;

  switch (fam.feature) {
    case FeatureId::L1Lat:
    case FeatureId::L2Lat:
    case FeatureId::MemLat: {
      SlopeFit fit = fit_slope(cycles_series(fam, rs));
      out.value = std::round(fit.slope / measure);
      out.confidence = 1.0 / (1.0 + fit.residual / measure);
      break;
    }
    case FeatureId::LoadWbBw: {
      SlopeFit fit = fit_slope(cycles_series(fam, rs));
      if (fit.slope <= 0) fail(fam, "non-positive drain slope");
      out.value = std::round(measure / fit.slope);
      out.confidence = 1.0 / (1.0 + fit.residual / measure);
      break;
    }
    case FeatureId::DecodeBw: {
      out.value = detect_plateau(ipc_series(fam, rs, std::nullopt)).value;
      break;
    }
    case FeatureId::LdPipeBw:
      out.value = detect_plateau(ipc_series(fam, rs, Op::Load)).value;
      break;
    case FeatureId::StPipeBw:
      out.value = detect_plateau(ipc_series(fam, rs, Op::Store)).value;
      break;
    case FeatureId::FmulBw:
      out.value = detect_plateau(ipc_series(fam, rs, Op::FpMul)).value;
      break;
    case FeatureId::FpDispatchBw:
      out.value = detect_plateau(ipc_series(fam, rs, Op::FpAlu)).value;
      break;
    case FeatureId::RobSize:
    case FeatureId::LqSize:
    case FeatureId::SqSize:
    case FeatureId::IntPrf:
    case FeatureId::FpPrf: {
      Series s = cycles_series(fam, rs);
      auto cp = detect_change_point(s);
      if (!cp) fail(fam, "no change point where Inflection expected");
      // the two-segment fit proves a cliff exists but a convex post-knee
      // curve drags its split rightward; the capacity itself is the last
      // pressure still at the flat level
      double flat = s.points.front().value;
      long p_star = s.points.front().pressure;
      for (const auto& pt : s.points)
        if (pt.value <= flat * 1.002) p_star = pt.pressure;
      out.value = p_star + fam.overhead;
      out.confidence = cp->confidence;
      break;
    }
    case FeatureId::RobCompressExists: {
      PairwiseVerdict v = pairwise_verdict(rs[0], rs[1]);
      out.value = v.present && rs[0].ipc > rs[1].ipc ? 1 : 0;
      out.confidence = v.delta_pct / 100.0;
      break;
    }
    case FeatureId::RobCompressCondition: {
      // point 0 is the blocker-only baseline; class k counts as
      // compression-eligible when its cycles stay at baseline
      double base = rs[0].cycles;
      long count = 0;
      for (size_t i = 1; i < rs.size(); ++i)
        if (rs[i].cycles <= base * 1.02) count++;
      out.value = count;
      break;
    }
    case FeatureId::RobCompressMax: {
      double base = rs[0].cycles;
      long best = fam.axis[0];
      for (size_t i = 1; i < rs.size(); ++i) {
        if (rs[i].cycles <= base * 1.02)
          best = fam.axis[i];
        else
          break;
      }
      out.value = best;
      break;
    }
    case FeatureId::DcacheBankCount: {
      double peak = 0;
      for (const auto& r : rs) peak = std::max(peak, r.op_rate(Op::Load));
      out.value = 0;
      for (size_t i = 0; i < rs.size(); ++i) {
        // full serialization: throughput collapses to ~1 load/cycle
        if (rs[i].op_rate(Op::Load) <= std::min(1.2, 0.6 * peak)) {
          out.value = fam.axis[i] / 8;
          break;
        }
      }
      break;
    }
    case FeatureId::DcacheBankConflict: {
      double a = rs[0].op_rate(Op::Load), b = rs[1].op_rate(Op::Load);
      double hi = std::max(a, b);
      double delta = hi > 0 ? std::abs(a - b) / hi * 100.0 : 0.0;
      out.value = delta > 10.0 ? 1 : 0;
      out.confidence = delta / 100.0;
      break;
    }
    case FeatureId::MoveElim: {
      PairwiseVerdict v = pairwise_verdict(rs[0], rs[1]);
      out.value = v.present && rs[0].ipc > rs[1].ipc ? 1 : 0;
      out.confidence = v.delta_pct / 100.0;
      break;
    }
    case FeatureId::FmaddSplit: {
      PairwiseVerdict v = pairwise_verdict(rs[0], rs[1]);
      out.value = v.present ? 1 : 0;
      out.confidence = v.delta_pct / 100.0;
      break;
    }
    case FeatureId::AtomicFlow: {
      long atomics = snippet_stats(fam.snippets[0]).count(Op::Atomic);
      if (atomics == 0) fail(fam, "no atomics in trigger snippet");
      out.value = double(rs[0].cycles - rs[1].cycles) / (atomics * measure);
      break;
    }
    case FeatureId::NukeReplay:
      // only a flush leaves a nuke behind; when store addresses resolve at
      // dispatch the load can never outrun them and the toggle is invisible
      // (reported absent, zero confidence)
      out.value = rs[0].event("nukes") > 0 ? 1 : 0;
      out.confidence = out.value > 0 ? 1.0 : (rs[0].ipc >= rs[1].ipc * 0.9 ? 1.0 : 0.0);
      break;
    case FeatureId::StaStdSplit: {
      // a triggered nuke proves the split; so does an aliasing run as fast
      // as the clean one (speculation went unpunished)
      PairwiseVerdict v = pairwise_verdict(rs[0], rs[1]);
      out.value = (rs[0].event("nukes") > 0 || !v.present) ? 1 : 0;
      break;
    }
    case FeatureId::PhrLen: {
      long total = fam.snippets[0].warmup_iterations + fam.snippets[0].measure_iterations;
      double threshold = 0.1 * total;
      bool found = false;
      for (size_t i = 0; i < rs.size(); ++i) {
        if (rs[i].event("mispredicts") > threshold) {
          out.value = fam.axis[i];
          found = true;
          break;
        }
      }
      if (!found) fail(fam, "no mispredict inflection inside the axis");
      break;
    }
  }
  return out;
}

DiscrepancyReport diff_targets(const std::vector<InferredFeature>& oracle,
                               const std::vector<InferredFeature>& model,
                               double threshold_pct) {
  std::map<FeatureId, const InferredFeature*> by_id;
  for (const auto& m : model) by_id[m.feature] = &m;
  if (by_id.size() != oracle.size()) throw std::invalid_argument("mismatched feature sets");
  DiscrepancyReport rep;
  rep.threshold_pct = threshold_pct;
  double sum = 0;
  for (const auto& o : oracle) {
    auto it = by_id.find(o.feature);
    if (it == by_id.end()) throw std::invalid_argument("mismatched feature sets");
    const InferredFeature& m = *it->second;
    double rel;
    if (feature_is_boolean(o.feature)) {
      rel = o.value == m.value ? 0.0 : (m.value - o.value) * 100.0;
    } else if (o.value == 0.0) {
      rel = m.value == 0.0 ? 0.0 : (m.value > 0 ? 100.0 : -100.0);
    } else {
      rel = (m.value - o.value) / o.value * 100.0;
    }
    rep.rows.push_back({o.feature, o.value, m.value, rel, std::abs(rel) > threshold_pct});
    sum += std::abs(rel);
  }
  rep.aggregate_pct = rep.rows.empty() ? 0.0 : sum / rep.rows.size();
  return rep;
}

double feature_relative_error(double delta_oracle_pct, double delta_model_pct) {
  return std::abs(delta_model_pct - delta_oracle_pct);
}

CoreConfig auto_calibrate(const CoreConfig& model_cfg, const DiscrepancyReport& report,
                          const std::vector<InferredFeature>& oracle_inferences) {
  CoreConfig c = model_cfg;
  auto oracle_value = [&](FeatureId f) -> std::optional<double> {
    for (const auto& inf : oracle_inferences)
      if (inf.feature == f) return inf.value;
    return std::nullopt;
  };
  for (const auto& row : report.rows) {
    if (!row.flagged) continue;
    double v = row.oracle_value;
    long n = std::lround(v);
    switch (row.feature) {
      case FeatureId::L1Lat: c.l1_lat = static_cast<int>(n); break;
      case FeatureId::L2Lat: c.l2_lat = static_cast<int>(n); break;
      case FeatureId::MemLat: c.mem_lat = static_cast<int>(n); break;
      case FeatureId::DecodeBw:
        c.fetch_decode_width = static_cast<int>(n);
        c.dispatch_bw_int = static_cast<int>(n);
        break;
      case FeatureId::LdPipeBw: c.ld_pipes = static_cast<int>(n); break;
      case FeatureId::StPipeBw: c.st_pipes = static_cast<int>(n); break;
      case FeatureId::FmulBw: c.fmul_bw = static_cast<int>(n); break;
      case FeatureId::FpDispatchBw: c.dispatch_bw_fp = static_cast<int>(n); break;
      case FeatureId::LoadWbBw: c.load_wb_bw = static_cast<int>(n); break;
      case FeatureId::RobSize: c.rob_size = static_cast<int>(n); break;
      case FeatureId::RobCompressExists:
        c.rob_compression_enabled = v > 0.5;
        break;
      case FeatureId::RobCompressCondition:
        // a count cannot identify the classes; adopt the canonical set
        c.compressible_classes = {Op::Nop, Op::IntAlu, Op::FpAlu};
        break;
      case FeatureId::RobCompressMax: c.rob_compress_max = static_cast<int>(n); break;
      case FeatureId::LqSize: c.lq_size = static_cast<int>(n); break;
      case FeatureId::SqSize: c.sq_size = static_cast<int>(n); break;
      case FeatureId::IntPrf: c.int_prf = static_cast<int>(n); break;
      case FeatureId::FpPrf: c.fp_prf = static_cast<int>(n); break;
      case FeatureId::DcacheBankCount: c.dcache_banks = static_cast<int>(n); break;
      case FeatureId::DcacheBankConflict: {
        // presence bit; the bank count itself comes from the stride sweep
        if (v > 0.5) {
          auto banks = oracle_value(FeatureId::DcacheBankCount);
          c.dcache_banks = banks ? static_cast<int>(std::lround(*banks)) : 8;
        } else {
          c.dcache_banks = 0;
        }
        break;
      }
      case FeatureId::MoveElim: c.move_elim = v > 0.5; break;
      case FeatureId::FmaddSplit: c.fmadd_split = v > 0.5; break;
      case FeatureId::AtomicFlow:
        // the measured per-atomic cost carries a fixed 0.75-cycle pipeline
        // residue on a 6-wide core; subtract it so the transfer is an
        // absolute (and therefore idempotent) assignment
        c.atomic_serialize_lat = static_cast<int>(std::lround(v - 0.75));
        if (c.atomic_serialize_lat < 1) c.atomic_serialize_lat = 1;
        break;
      case FeatureId::StaStdSplit: c.sta_std_split = v > 0.5; break;
      case FeatureId::NukeReplay: c.nuke_replay = v > 0.5; break;
      case FeatureId::PhrLen: c.phr_len = static_cast<int>(n); break;
    }
  }
  return c;
}

std::string bottleneck_class(const RunResult& r) {
  const std::pair<const char*, const char*> keys[] = {
      {"rob_full_cycles", "ROB"},
      {"lq_full_cycles", "LQ"},
      {"sq_full_cycles", "SQ"},
      {"int_prf_stall_cycles", "IntPrf"},
      {"fp_prf_stall_cycles", "FpPrf"},
  };
  long best = 0;
  const char* verdict = "none";
  for (const auto& [key, name] : keys) {
    long v = r.event(key);
    if (v > best) {
      best = v;
      verdict = name;
    }
  }
  return best >= 16 ? verdict : "none";
}

void to_json(nlohmann::json& j, const InferredFeature& f) {
  j = nlohmann::json{{"feature", feature_name(f.feature)},
                     {"value", f.value},
                     {"method", shape_name(f.method)},
                     {"confidence", f.confidence},
                     {"corrected_by", f.corrected_by}};
}

void from_json(const nlohmann::json& j, InferredFeature& f) {
  f.feature = feature_from_name(j.at("feature").get<std::string>());
  f.value = j.at("value").get<double>();
  f.method = shape_from_name(j.at("method").get<std::string>());
  f.confidence = j.value("confidence", 0.0);
  f.corrected_by = j.value("corrected_by", 0L);
}

void to_json(nlohmann::json& j, const DiscrepancyReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"feature", feature_name(row.feature)},
                    {"oracle", row.oracle_value},
                    {"model", row.model_value},
                    {"rel_error_pct", row.rel_error_pct},
                    {"flagged", row.flagged}});
  j = nlohmann::json{{"schema_version", 1},
                     {"rows", rows},
                     {"aggregate_pct", r.aggregate_pct},
                     {"threshold_pct", r.threshold_pct},
                     {"aggregate_convention",
                      "mean of absolute relative errors; boolean features contribute 0 or 100"}};
}

void from_json(const nlohmann::json& j, DiscrepancyReport& r) {
  r.rows.clear();
  for (const auto& row : j.at("rows"))
    r.rows.push_back({feature_from_name(row.at("feature").get<std::string>()),
                      row.at("oracle").get<double>(), row.at("model").get<double>(),
                      row.at("rel_error_pct").get<double>(), row.at("flagged").get<bool>()});
  r.aggregate_pct = j.at("aggregate_pct").get<double>();
  r.threshold_pct = j.at("threshold_pct").get<double>();
}

std::string render_report(const DiscrepancyReport& r) {
  std::ostringstream os;
  os << "feature                 oracle      model  rel-error%  flag\n";
  os << "-----------------------------------------------------------\n";
  char buf[128];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%-20s %9.2f %10.2f %11.2f  %s\n",
                  feature_name(row.feature), row.oracle_value, row.model_value,
                  row.rel_error_pct, row.flagged ? "FLAG" : "");
    os << buf;
  }
  std::snprintf(buf, sizeof buf,
                "aggregate error: %.2f%% (mean |rel|, booleans 0/100; flag threshold %.1f%%)\n",
                r.aggregate_pct, r.threshold_pct);
  os << buf;
  return os.str();
}

}  // namespace cliff
