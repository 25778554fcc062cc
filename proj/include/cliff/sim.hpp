#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "cliff/config.hpp"
#include "cliff/isa.hpp"

namespace cliff {

enum class L1Cat { FrontendBound, BadSpeculation, BackendBound, Retiring };
constexpr int kNumL1 = 4;
const char* l1_name(L1Cat c);

// Backend sub-categories. DTlbStall and LoadL3Bound are carried for schema
// compatibility but never attributed by this model.
enum class L2Cat {
  LoadL1Bound,
  LoadL2Bound,
  LoadL3Bound,
  LoadMemBound,
  StoreL1Bound,
  DTlbStall,
  IntDQBandwidth,
  FVDQBandwidth,
  MemDQBound,
  MemCommitLimit,
  ScalarLongExecute,
};
constexpr int kNumL2 = 11;
const char* l2_name(L2Cat c);

struct TopDownVector {
  std::array<double, kNumL1> level1{};
  std::array<double, kNumL2> level2_backend{};

  double l1(L1Cat c) const { return level1[static_cast<int>(c)]; }
  double l2(L2Cat c) const { return level2_backend[static_cast<int>(c)]; }
  L1Cat dominant_l1() const;
  L2Cat dominant_l2() const;
};

struct RunResult {
  long cycles = 0;   // measured region only
  long retired = 0;  // measured region only
  double ipc = 0.0;
  std::array<double, kNumOps> op_ipc{};
  TopDownVector topdown;
  std::map<std::string, long> events;  // whole run, warmup included

  double op_rate(Op op) const { return op_ipc[static_cast<int>(op)]; }
  long event(const std::string& name) const {
    auto it = events.find(name);
    return it == events.end() ? 0 : it->second;
  }
};

void to_json(nlohmann::json& j, const TopDownVector& t);
void to_json(nlohmann::json& j, const RunResult& r);

// Deterministic cycle-stepped out-of-order core timing model. Pure function
// of its arguments; throws on invalid config or snippet.
RunResult simulate(const CoreConfig& cfg, const Snippet& s);

}  // namespace cliff
