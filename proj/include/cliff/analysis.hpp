#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliff/config.hpp"
#include "cliff/isa.hpp"
#include "cliff/sim.hpp"

namespace cliff {

enum class ValueKind { Cycles, Ipc, EventCount };

struct SeriesPoint {
  long pressure;
  double value;
};

struct Series {
  std::vector<SeriesPoint> points;
  ValueKind kind = ValueKind::Cycles;
};

std::vector<std::string> validate_series(const Series& s, size_t min_pts = 3);

struct ChangePoint {
  long pressure;       // last pressure of the flat segment
  double confidence;   // residual-improvement score in [0,1]
};

// Exhaustive two-segment piecewise-linear least-squares change-point search;
// none when the best split improves the single-line residual by < 10%.
std::optional<ChangePoint> detect_change_point(const Series& s);

struct PlateauResult {
  double value;
  long onset;
};

// Mean of the maximal suffix whose relative spread is < 2%; throws when no
// suffix of length >= 2 qualifies.
PlateauResult detect_plateau(const Series& s);

struct SlopeFit {
  double slope;
  double intercept;
  double residual;  // root-mean-square residual
};

SlopeFit fit_slope(const Series& s);

struct PairwiseVerdict {
  bool present;
  double delta_pct;
};

PairwiseVerdict pairwise_verdict(const RunResult& a, const RunResult& b,
                                 double threshold_pct = 10.0);

struct InferredFeature {
  FeatureId feature = FeatureId::RobSize;
  double value = 0.0;
  ResponseShape method = ResponseShape::Inflection;
  double confidence = 0.0;
  long corrected_by = 0;
};

// Dispatches on the family's response shape (with per-feature special
// cases); results must cover the full axis in order.
InferredFeature infer_feature(const CliffFamily& family, const std::vector<RunResult>& results);

// The measurement series inference reads for this family (cycles, IPC of
// the pressured class, or event counts) — also what the series CSVs carry.
Series family_series(const CliffFamily& family, const std::vector<RunResult>& results);

// True for features whose inferred value is a 0/1 presence bit.
bool feature_is_boolean(FeatureId f);

struct DiscrepancyReport {
  struct Row {
    FeatureId feature;
    double oracle_value;
    double model_value;
    double rel_error_pct;  // signed; booleans contribute 0 or +/-100
    bool flagged;
  };
  std::vector<Row> rows;
  double aggregate_pct = 0.0;  // mean of |rel_error_pct|
  double threshold_pct = 5.0;
};

DiscrepancyReport diff_targets(const std::vector<InferredFeature>& oracle,
                               const std::vector<InferredFeature>& model,
                               double threshold_pct = 5.0);

// |delta_model - delta_oracle| in percentage points.
double feature_relative_error(double delta_oracle_pct, double delta_model_pct);

// Copies every flagged feature's oracle-inferred value into the matching
// config parameter; pure and idempotent.
CoreConfig auto_calibrate(const CoreConfig& model_cfg, const DiscrepancyReport& report,
                          const std::vector<InferredFeature>& oracle_inferences);

// Dominant saturated structure for a capacity snippet run: "ROB", "LQ",
// "SQ", "IntPrf", "FpPrf", or "none" when nothing stalled dispatch.
std::string bottleneck_class(const RunResult& r);

void to_json(nlohmann::json& j, const InferredFeature& f);
void from_json(const nlohmann::json& j, InferredFeature& f);
void to_json(nlohmann::json& j, const DiscrepancyReport& r);
void from_json(const nlohmann::json& j, DiscrepancyReport& r);

std::string render_report(const DiscrepancyReport& r);

}  // namespace cliff
