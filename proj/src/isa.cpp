#include "cliff/isa.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace cliff {

namespace {

const std::array<OpTraits, kNumOps> kTraits = {{
    /* Nop        */ {1, true, FuFamily::Int},
    /* IntAlu     */ {1, true, FuFamily::Int},
    /* IntMove    */ {1, false, FuFamily::Int},
    /* FpAlu      */ {2, true, FuFamily::Fp},
    /* FpMul      */ {3, false, FuFamily::Fp},
    /* FpMadd     */ {3, false, FuFamily::Fp},
    /* Load       */ {4, false, FuFamily::Mem},
    /* Store      */ {1, false, FuFamily::Mem},
    /* Atomic     */ {1, false, FuFamily::Mem},
    /* CondBranch */ {1, false, FuFamily::Branch},
    /* UncondJump */ {1, false, FuFamily::Branch},
}};

const std::array<const char*, kNumOps> kOpNames = {
    "Nop",  "IntAlu", "IntMove", "FpAlu", "FpMul",      "FpMadd",
    "Load", "Store",  "Atomic",  "CondBranch", "UncondJump",
};

const std::array<const char*, kNumFeatures> kFeatureNames = {
    "L1Lat",        "L2Lat",      "MemLat",
    "DecodeBw",     "LdPipeBw",   "StPipeBw",
    "FmulBw",       "FpDispatchBw", "LoadWbBw",
    "RobSize",      "RobCompressExists", "RobCompressCondition",
    "RobCompressMax", "LqSize",   "SqSize",
    "IntPrf",       "FpPrf",      "DcacheBankCount",
    "DcacheBankConflict", "MoveElim", "FmaddSplit",
    "AtomicFlow",   "StaStdSplit", "NukeReplay",
    "PhrLen",
};

}  // namespace

const OpTraits& traits(Op op) { return kTraits[static_cast<int>(op)]; }

const char* op_name(Op op) { return kOpNames[static_cast<int>(op)]; }

Op op_from_name(const std::string& name) {
  for (int i = 0; i < kNumOps; ++i)
    if (name == kOpNames[i]) return static_cast<Op>(i);
  throw std::invalid_argument("unknown op class: " + name);
}

const char* feature_name(FeatureId f) { return kFeatureNames[static_cast<int>(f)]; }

FeatureId feature_from_name(const std::string& name) {
  for (int i = 0; i < kNumFeatures; ++i)
    if (name == kFeatureNames[i]) return static_cast<FeatureId>(i);
  throw std::invalid_argument("unknown feature: " + name);
}

std::vector<FeatureId> all_features() {
  std::vector<FeatureId> v;
  for (int i = 0; i < kNumFeatures; ++i) v.push_back(static_cast<FeatureId>(i));
  return v;
}

const char* shape_name(ResponseShape s) {
  switch (s) {
    case ResponseShape::Inflection: return "Inflection";
    case ResponseShape::Plateau: return "Plateau";
    case ResponseShape::Slope: return "Slope";
    case ResponseShape::Pairwise: return "Pairwise";
  }
  return "?";
}

ResponseShape shape_from_name(const std::string& name) {
  for (auto s : {ResponseShape::Inflection, ResponseShape::Plateau,
                 ResponseShape::Slope, ResponseShape::Pairwise})
    if (name == shape_name(s)) return s;
  throw std::invalid_argument("unknown response shape: " + name);
}

std::vector<Violation> validate_snippet(const Snippet& s) {
  std::vector<Violation> out;
  if (s.body.empty()) out.push_back({-1, "body is empty"});
  if (s.measure_iterations < 1) out.push_back({-1, "measure_iterations < 1"});
  if (s.warmup_iterations < 0) out.push_back({-1, "warmup_iterations < 0"});
  for (int i = 0; i < static_cast<int>(s.body.size()); ++i) {
    const Instruction& in = s.body[i];
    if (is_mem(in.op)) {
      if (!in.addr) {
        out.push_back({i, std::string(op_name(in.op)) + " without addr"});
      } else if (*in.addr >= s.footprint_bytes) {
        out.push_back({i, "addr outside footprint"});
      }
    } else if (in.addr) {
      out.push_back({i, std::string(op_name(in.op)) + " with addr"});
    }
    if (in.dest && (*in.dest < 0 || *in.dest >= kRegSpace))
      out.push_back({i, "dest register out of range"});
    for (int src : in.sources)
      if (src < 0 || src >= kRegSpace) out.push_back({i, "source register out of range"});
    if (in.branch_meta && !is_branch(in.op))
      out.push_back({i, "branch_meta on non-branch"});
    if (in.branch_meta && in.branch_meta->correlated_with) {
      int c = *in.branch_meta->correlated_with;
      if (c < 0 || c >= i || s.body[c].op != Op::CondBranch)
        out.push_back({i, "correlated_with must point to an earlier CondBranch"});
    }
  }
  return out;
}

SnippetStats snippet_stats(const Snippet& s) {
  if (!validate_snippet(s).empty())
    throw std::invalid_argument("snippet_stats: invalid snippet '" + s.label + "'");
  SnippetStats st;
  std::set<std::uint64_t> addrs;
  // depth[i] = longest RAW chain ending at instruction i
  std::vector<int> depth(s.body.size(), 1);
  std::array<int, kRegSpace> writer;
  writer.fill(-1);
  for (size_t i = 0; i < s.body.size(); ++i) {
    const Instruction& in = s.body[i];
    st.op_counts[static_cast<int>(in.op)]++;
    if (in.addr) addrs.insert(*in.addr);
    for (int src : in.sources)
      if (writer[src] >= 0) depth[i] = std::max(depth[i], depth[writer[src]] + 1);
    if (in.dest) writer[*in.dest] = static_cast<int>(i);
    st.chain_depth = std::max(st.chain_depth, depth[i]);
  }
  st.distinct_addresses = static_cast<long>(addrs.size());
  return st;
}

std::vector<Violation> validate_family(const CliffFamily& f) {
  std::vector<Violation> out;
  size_t min_pts = f.response_shape == ResponseShape::Pairwise ? 2 : 3;
  if (f.axis.size() != f.snippets.size())
    out.push_back({-1, "axis/snippet length mismatch"});
  if (f.axis.size() < min_pts) out.push_back({-1, "axis too short"});
  for (size_t i = 1; i < f.axis.size(); ++i)
    if (f.axis[i] <= f.axis[i - 1]) out.push_back({-1, "axis not strictly increasing"});
  for (size_t i = 0; i < f.snippets.size(); ++i)
    for (const Violation& v : validate_snippet(f.snippets[i]))
      out.push_back({v.index, "snippet " + std::to_string(i) + ": " + v.message});
  return out;
}

void to_json(nlohmann::json& j, const Instruction& in) {
  j = nlohmann::json{{"op", op_name(in.op)}};
  if (in.dest) j["dest"] = *in.dest;
  if (!in.sources.empty()) j["sources"] = in.sources;
  if (in.addr) j["addr"] = *in.addr;
  if (in.addr_stride) j["addr_stride"] = in.addr_stride;
  if (in.branch_meta) {
    nlohmann::json b{{"taken", in.branch_meta->taken}};
    if (in.branch_meta->correlated_with)
      b["correlated_with"] = *in.branch_meta->correlated_with;
    j["branch_meta"] = b;
  }
}

void from_json(const nlohmann::json& j, Instruction& in) {
  in = Instruction{};
  in.op = op_from_name(j.at("op").get<std::string>());
  if (j.contains("dest")) in.dest = j["dest"].get<int>();
  if (j.contains("sources")) in.sources = j["sources"].get<std::vector<int>>();
  if (j.contains("addr")) in.addr = j["addr"].get<std::uint64_t>();
  if (j.contains("addr_stride")) in.addr_stride = j["addr_stride"].get<std::uint64_t>();
  if (j.contains("branch_meta")) {
    BranchMeta b;
    b.taken = j["branch_meta"].at("taken").get<bool>();
    if (j["branch_meta"].contains("correlated_with"))
      b.correlated_with = j["branch_meta"]["correlated_with"].get<int>();
    in.branch_meta = b;
  }
}

void to_json(nlohmann::json& j, const Snippet& s) {
  j = nlohmann::json{
      {"schema_version", 1},
      {"warmup_iterations", s.warmup_iterations},
      {"measure_iterations", s.measure_iterations},
      {"body", s.body},
      {"footprint_bytes", s.footprint_bytes},
      {"label", s.label},
  };
}

void from_json(const nlohmann::json& j, Snippet& s) {
  s = Snippet{};
  s.warmup_iterations = j.at("warmup_iterations").get<long>();
  s.measure_iterations = j.at("measure_iterations").get<long>();
  s.body = j.at("body").get<std::vector<Instruction>>();
  s.footprint_bytes = j.at("footprint_bytes").get<std::uint64_t>();
  s.label = j.value("label", "");
}

void to_json(nlohmann::json& j, const CliffFamily& f) {
  j = nlohmann::json{
      {"schema_version", 1},
      {"feature", feature_name(f.feature)},
      {"axis", f.axis},
      {"snippets", f.snippets},
      {"response_shape", shape_name(f.response_shape)},
      {"overhead", f.overhead},
      {"name", f.name},
  };
}

void from_json(const nlohmann::json& j, CliffFamily& f) {
  f = CliffFamily{};
  f.feature = feature_from_name(j.at("feature").get<std::string>());
  f.axis = j.at("axis").get<std::vector<long>>();
  f.snippets = j.at("snippets").get<std::vector<Snippet>>();
  f.response_shape = shape_from_name(j.at("response_shape").get<std::string>());
  f.overhead = j.value("overhead", 0L);
  f.name = j.value("name", "");
}

}  // namespace cliff
