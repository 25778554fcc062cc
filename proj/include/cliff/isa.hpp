#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cliff {

// Abstract instruction classes. Only class / dependency / address structure
// matters to the timing model; there is no binary encoding.
enum class Op {
  Nop,
  IntAlu,
  IntMove,
  FpAlu,
  FpMul,
  FpMadd,
  Load,
  Store,
  Atomic,
  CondBranch,
  UncondJump,
};
constexpr int kNumOps = 11;

enum class FuFamily { Int, Fp, Mem, Branch };

struct OpTraits {
  int default_latency;
  bool compressible;
  FuFamily fu;
};

const OpTraits& traits(Op op);
const char* op_name(Op op);
Op op_from_name(const std::string& name);

inline bool is_mem(Op op) { return op == Op::Load || op == Op::Store || op == Op::Atomic; }
inline bool is_branch(Op op) { return op == Op::CondBranch || op == Op::UncondJump; }
inline bool is_fp(Op op) { return op == Op::FpAlu || op == Op::FpMul || op == Op::FpMadd; }

// Architectural register namespace: 0..31 int, 32..63 fp.
constexpr int kIntRegs = 32;
constexpr int kFpRegs = 32;
constexpr int kRegSpace = kIntRegs + kFpRegs;
inline int int_reg(int i) { return i; }
inline int fp_reg(int i) { return kIntRegs + i; }
inline bool is_fp_reg(int r) { return r >= kIntRegs; }

struct BranchMeta {
  bool taken = false;
  // Index of an earlier CondBranch in the same snippet body whose outcome
  // this branch correlates with. Prediction of this branch degrades once the
  // source falls out of the global history window.
  std::optional<int> correlated_with;

  bool operator==(const BranchMeta&) const = default;
};

struct Instruction {
  Op op = Op::Nop;
  std::optional<int> dest;
  std::vector<int> sources;
  std::optional<std::uint64_t> addr;  // byte offset into the snippet footprint
  // Per-iteration address advance; effective address wraps inside the
  // footprint (rounded up to a line). Zero means the same address every
  // iteration.
  std::uint64_t addr_stride = 0;
  std::optional<BranchMeta> branch_meta;

  bool operator==(const Instruction&) const = default;
};

// A loop-structured sequence of abstract instructions. The body implicitly
// ends with a loop-closing backward CondBranch (taken on every iteration but
// the last); generators account for its ROB/branch cost via family overhead.
struct Snippet {
  long warmup_iterations = 0;
  long measure_iterations = 1;
  std::vector<Instruction> body;
  std::uint64_t footprint_bytes = 0;
  std::string label;
};

struct Violation {
  int index;  // offending instruction index, -1 for snippet-level problems
  std::string message;
};

std::vector<Violation> validate_snippet(const Snippet& s);

struct SnippetStats {
  std::array<long, kNumOps> op_counts{};
  int chain_depth = 0;        // longest register RAW chain in the body
  long distinct_addresses = 0;  // distinct static base addresses

  long count(Op op) const { return op_counts[static_cast<int>(op)]; }
};

SnippetStats snippet_stats(const Snippet& s);

// Microarchitectural features a Cliff family can target.
enum class FeatureId {
  L1Lat,
  L2Lat,
  MemLat,
  DecodeBw,
  LdPipeBw,
  StPipeBw,
  FmulBw,
  FpDispatchBw,
  LoadWbBw,
  RobSize,
  RobCompressExists,
  RobCompressCondition,
  RobCompressMax,
  LqSize,
  SqSize,
  IntPrf,
  FpPrf,
  DcacheBankCount,
  DcacheBankConflict,
  MoveElim,
  FmaddSplit,
  AtomicFlow,
  StaStdSplit,
  NukeReplay,
  PhrLen,
};
constexpr int kNumFeatures = 25;

const char* feature_name(FeatureId f);
FeatureId feature_from_name(const std::string& name);
std::vector<FeatureId> all_features();

enum class ResponseShape { Inflection, Plateau, Slope, Pairwise };
const char* shape_name(ResponseShape s);
ResponseShape shape_from_name(const std::string& name);

// A set of snippets indexed by a pressure axis. Snippets differ only along
// the declared pressure dimension.
struct CliffFamily {
  FeatureId feature = FeatureId::RobSize;
  std::vector<long> axis;
  std::vector<Snippet> snippets;
  ResponseShape response_shape = ResponseShape::Inflection;
  // Fixed per-snippet resource cost (blocker entries, loop branch, in-flight
  // chain head) that the analyzer adds back when reporting capacities.
  long overhead = 0;
  std::string name;
};

std::vector<Violation> validate_family(const CliffFamily& f);

void to_json(nlohmann::json& j, const Instruction& in);
void from_json(const nlohmann::json& j, Instruction& in);
void to_json(nlohmann::json& j, const Snippet& s);
void from_json(const nlohmann::json& j, Snippet& s);
void to_json(nlohmann::json& j, const CliffFamily& f);
void from_json(const nlohmann::json& j, CliffFamily& f);

}  // namespace cliff
