#include "cliff/generators.hpp"

#include <stdexcept>

namespace cliff {

namespace {

// Empirically pinned capacity-correction constants: knee pressure + offset =
// structure size, invariant across the shipped configs (verified by the
// inference-soundness tests).
constexpr long kRobOverhead = 3;
constexpr long kLqOverhead = 2;
constexpr long kSqOverhead = 0;
constexpr long kIntPrfOverhead = 34;  // 32 architectural + blocker chain regs
constexpr long kFpPrfOverhead = 32;

constexpr std::uint64_t kMiB = 1ull << 20;
constexpr std::uint64_t kStreamFootprint = 8 * kMiB;   // always misses to memory
constexpr std::uint64_t kL2Footprint = 128 * 1024;     // L2-resident after one pass
constexpr std::uint64_t kIslandBase = 4 * kMiB;        // L1-resident side area

Instruction make_load(int dest, std::vector<int> srcs, std::uint64_t addr,
                      std::uint64_t stride = 0) {
  Instruction in;
  in.op = Op::Load;
  in.dest = dest;
  in.sources = std::move(srcs);
  in.addr = addr;
  in.addr_stride = stride;
  return in;
}

Instruction make_store(std::vector<int> srcs, std::uint64_t addr, std::uint64_t stride = 0) {
  Instruction in;
  in.op = Op::Store;
  in.sources = std::move(srcs);
  in.addr = addr;
  in.addr_stride = stride;
  return in;
}

Instruction make_op(Op op, std::optional<int> dest, std::vector<int> srcs) {
  Instruction in;
  in.op = op;
  in.dest = dest;
  in.sources = std::move(srcs);
  return in;
}

Instruction make_branch(bool taken, std::optional<int> correlated = std::nullopt) {
  Instruction in;
  in.op = Op::CondBranch;
  BranchMeta m;
  m.taken = taken;
  m.correlated_with = correlated;
  in.branch_meta = m;
  return in;
}

// 3-deep cross-iteration dependent load chain streaming through a
// beyond-L2 footprint: each link misses to memory, pinning every iteration
// to ~3 memory latencies while fillers pile up behind it.
void append_blocker(Snippet& s, int depth = 3) {
  for (int b = 0; b < depth; ++b)
    s.body.push_back(
        make_load(int_reg(b == depth - 1 ? 0 : b + 1), {int_reg(b)}, b * 64, depth * 64));
}

Instruction make_filler(Op op, int i) {
  switch (op) {
    case Op::Load:
      return make_load(int_reg(8 + (i % 8)), {}, kIslandBase + (i % 8) * 8);
    case Op::Store:
      return make_store({int_reg(31)}, kIslandBase + (i % 8) * 8);
    case Op::IntAlu:
      return make_op(Op::IntAlu, int_reg(8 + (i % 8)), {int_reg(31)});
    case Op::IntMove:
      return make_op(Op::IntMove, int_reg(8 + (i % 8)), {int_reg(31)});
    case Op::FpAlu:
      return make_op(Op::FpAlu, fp_reg(8 + (i % 8)), {fp_reg(31)});
    case Op::FpMul:
      return make_op(Op::FpMul, fp_reg(8 + (i % 8)), {fp_reg(31)});
    case Op::FpMadd:
      return make_op(Op::FpMadd, fp_reg(8 + (i % 8)), {fp_reg(31)});
    case Op::Nop:
      return make_op(Op::Nop, std::nullopt, {});
    case Op::CondBranch:
      return make_branch(false);
    case Op::UncondJump: {
      Instruction in;
      in.op = Op::UncondJump;
      return in;
    }
    case Op::Atomic: {
      Instruction in;
      in.op = Op::Atomic;
      in.dest = int_reg(8 + (i % 8));
      in.sources = {int_reg(31)};
      in.addr = kIslandBase + (i % 8) * 8;
      return in;
    }
  }
  throw std::invalid_argument("make_filler: bad op");
}

Snippet capacity_snippet(long p, Op filler, const std::string& label, int blocker_depth = 3) {
  Snippet s;
  s.label = label;
  s.warmup_iterations = 4;
  s.measure_iterations = 32;
  s.footprint_bytes = kStreamFootprint;
  append_blocker(s, blocker_depth);
  for (long i = 0; i < p; ++i) s.body.push_back(make_filler(filler, static_cast<int>(i)));
  return s;
}

void check_axis(const std::vector<long>& axis, size_t min_pts) {
  if (axis.size() < min_pts) throw std::invalid_argument("axis too short");
  for (size_t i = 1; i < axis.size(); ++i)
    if (axis[i] <= axis[i - 1]) throw std::invalid_argument("axis not strictly increasing");
}

}  // namespace

CliffFamily gen_latency_cliff(FeatureId target, const std::vector<long>& chain_lengths) {
  check_axis(chain_lengths, 3);
  for (long c : chain_lengths)
    if (c < 1) throw std::invalid_argument("chain length < 1");
  CliffFamily f;
  f.feature = target;
  f.axis = chain_lengths;
  f.response_shape = ResponseShape::Slope;
  std::uint64_t footprint, stride;
  switch (target) {
    case FeatureId::L1Lat:
      footprint = 16 * 1024;
      stride = 0;  // static addresses, resident after first touch
      f.name = "lat-l1";
      break;
    case FeatureId::L2Lat:
      footprint = kL2Footprint;
      stride = 64;
      f.name = "lat-l2";
      break;
    case FeatureId::MemLat:
      footprint = kStreamFootprint;
      stride = 64;
      f.name = "lat-mem";
      break;
    default:
      throw std::invalid_argument("gen_latency_cliff: unsupported target");
  }
  for (long c : chain_lengths) {
    Snippet s;
    s.label = f.name + "-c" + std::to_string(c);
    s.footprint_bytes = footprint;
    s.measure_iterations = 64;
    if (target == FeatureId::L2Lat) {
      // one warm pass over the footprint so measured iterations hit L2
      long lines = static_cast<long>(footprint / 64);
      s.warmup_iterations = lines / c + 8;
    } else {
      s.warmup_iterations = 8;
    }
    for (long i = 0; i < c; ++i)
      s.body.push_back(make_load(int_reg(2), {int_reg(2)},
                                 stride ? (i * stride) % footprint : (i * 64) % footprint,
                                 stride * c));
    f.snippets.push_back(std::move(s));
  }
  return f;
}

CliffFamily gen_bandwidth_cliff(FeatureId target, const std::vector<long>& widths) {
  check_axis(widths, 3);
  CliffFamily f;
  f.feature = target;
  f.axis = widths;
  f.response_shape = ResponseShape::Plateau;

  if (target == FeatureId::LoadWbBw) {
    // Coalesced-fill drain: an L2-missing leader plus p same-line followers
    // issued inside the outstanding-miss window all complete on the fill and
    // drain at the writeback bandwidth; the next iteration is chained on the
    // last-drained registers, so cycles grow by 1/bw per follower.
    f.response_shape = ResponseShape::Slope;
    f.name = "bw-loadwb";
    long lines = static_cast<long>(kL2Footprint / 64);
    for (long p : widths) {
      if (p < 3) throw std::invalid_argument("LoadWbBw width < 3");
      Snippet s;
      s.label = f.name + "-p" + std::to_string(p);
      s.footprint_bytes = kL2Footprint;
      s.warmup_iterations = lines + 16;
      s.measure_iterations = 64;
      s.body.push_back(make_op(Op::IntAlu, int_reg(5), {int_reg(2), int_reg(3), int_reg(4)}));
      s.body.push_back(make_load(int_reg(1), {int_reg(5)}, 0, 64));
      for (long i = 0; i < p; ++i)
        s.body.push_back(make_load(int_reg(2 + (i % 3)), {int_reg(5)}, 0, 64));
      f.snippets.push_back(std::move(s));
    }
    return f;
  }

  Op op;
  switch (target) {
    case FeatureId::DecodeBw: op = Op::IntAlu; f.name = "bw-decode"; break;
    case FeatureId::LdPipeBw: op = Op::Load; f.name = "bw-ldpipe"; break;
    case FeatureId::StPipeBw: op = Op::Store; f.name = "bw-stpipe"; break;
    case FeatureId::FmulBw: op = Op::FpMul; f.name = "bw-fmul"; break;
    case FeatureId::FpDispatchBw: op = Op::FpAlu; f.name = "bw-fpdispatch"; break;
    default:
      throw std::invalid_argument("gen_bandwidth_cliff: unsupported target");
  }
  for (long p : widths) {
    if (p < 1) throw std::invalid_argument("width < 1");
    Snippet s;
    s.label = f.name + "-p" + std::to_string(p);
    s.footprint_bytes = kIslandBase + 4096;
    s.warmup_iterations = 64;
    s.measure_iterations = 256;
    for (long i = 0; i < p; ++i) s.body.push_back(make_filler(op, static_cast<int>(i)));
    f.snippets.push_back(std::move(s));
  }
  return f;
}

CliffFamily gen_capacity_cliff(FeatureId target, const std::vector<long>& fill_counts,
                               std::optional<Op> filler_opt) {
  check_axis(fill_counts, 3);
  CliffFamily f;
  f.feature = target;
  f.axis = fill_counts;
  f.response_shape = ResponseShape::Inflection;
  Op filler;
  switch (target) {
    case FeatureId::RobSize:
      filler = filler_opt.value_or(Op::CondBranch);
      if (filler != Op::CondBranch && filler != Op::IntMove)
        throw std::invalid_argument("RobSize filler must be incompressible and register-free");
      f.overhead = kRobOverhead;
      f.name = "cap-rob";
      break;
    case FeatureId::LqSize:
      filler = filler_opt.value_or(Op::Load);
      if (filler != Op::Load) throw std::invalid_argument("LqSize filler must be Load");
      f.overhead = kLqOverhead;
      f.name = "cap-lq";
      break;
    case FeatureId::SqSize:
      filler = filler_opt.value_or(Op::Store);
      if (filler != Op::Store) throw std::invalid_argument("SqSize filler must be Store");
      f.overhead = kSqOverhead;
      f.name = "cap-sq";
      break;
    case FeatureId::IntPrf:
      filler = filler_opt.value_or(Op::IntAlu);
      if (filler != Op::IntAlu && filler != Op::Load)
        throw std::invalid_argument("IntPrf filler must write an int register");
      f.overhead = kIntPrfOverhead;
      f.name = "cap-intprf";
      break;
    case FeatureId::FpPrf:
      filler = filler_opt.value_or(Op::FpAlu);
      if (filler != Op::FpAlu && filler != Op::FpMul)
        throw std::invalid_argument("FpPrf filler must write an fp register");
      f.overhead = kFpPrfOverhead;
      f.name = "cap-fpprf";
      break;
    default:
      throw std::invalid_argument("gen_capacity_cliff: unsupported target");
  }
  for (long p : fill_counts) {
    if (p < 0) throw std::invalid_argument("fill count < 0");
    f.snippets.push_back(capacity_snippet(p, filler, f.name + "-p" + std::to_string(p)));
  }
  return f;
}

RobSuite gen_rob_compression_suite() {
  RobSuite suite;

  struct Frag {
    const char* name;
    std::vector<Op> ops;
    const char* expected;
  };
  const std::vector<Frag> frags = {
      {"ld", {Op::Load}, "LQ"},
      {"st", {Op::Store}, "SQ"},
      {"nop", {Op::Nop}, "none"},
      {"fadd", {Op::FpAlu}, "FpPrf"},
      {"add", {Op::IntAlu}, "IntPrf"},
      {"beq", {Op::CondBranch}, "ROB"},
      {"ld+nop", {Op::Load, Op::Nop}, "LQ"},
      {"beq+ld+st", {Op::CondBranch, Op::Load, Op::Store}, "ROB"},
      {"beq+nop+nop", {Op::CondBranch, Op::Nop, Op::Nop}, "ROB"},
      {"beq+add+add", {Op::CondBranch, Op::IntAlu, Op::IntAlu}, "ROB"},
  };
  for (const Frag& fr : frags) {
    CliffFamily fam;
    fam.feature = FeatureId::RobSize;
    fam.response_shape = ResponseShape::Inflection;
    fam.name = std::string("rob-stage1-") + fr.name;
    for (long p = 9; p <= 351; p += 3) {
      fam.axis.push_back(p);
      Snippet s;
      s.label = fam.name + "-p" + std::to_string(p);
      s.warmup_iterations = 4;
      s.measure_iterations = 32;
      s.footprint_bytes = kStreamFootprint;
      append_blocker(s);
      for (long i = 0; i < p; ++i)
        s.body.push_back(make_filler(fr.ops[i % fr.ops.size()], static_cast<int>(i)));
      fam.snippets.push_back(std::move(s));
    }
    suite.stage1.push_back({std::move(fam), fr.name, fr.expected});
  }

  // Stage 2: saturate most of the reorder buffer with 130 incompressible
  // branches, then sweep p instructions of one candidate class; a late cliff
  // marks the class compressible.
  for (Op cls : {Op::Nop, Op::IntAlu, Op::FpAlu, Op::IntMove, Op::Load, Op::CondBranch}) {
    CliffFamily fam;
    fam.feature = FeatureId::RobCompressCondition;
    fam.response_shape = ResponseShape::Inflection;
    fam.name = std::string("rob-stage2-") + op_name(cls);
    for (long p = 2; p <= 120; p += 2) {
      fam.axis.push_back(p);
      Snippet s;
      s.label = fam.name + "-p" + std::to_string(p);
      s.warmup_iterations = 4;
      s.measure_iterations = 32;
      s.footprint_bytes = kStreamFootprint;
      append_blocker(s, 1);
      for (int i = 0; i < 130; ++i) s.body.push_back(make_branch(false));
      for (long i = 0; i < p; ++i) s.body.push_back(make_filler(cls, static_cast<int>(i)));
      fam.snippets.push_back(std::move(s));
    }
    suite.stage2.push_back(std::move(fam));
  }

  // Stage 3: G groups of (jump + N nops); the jump breaks fetch continuity
  // so each group costs one entry for the jump plus however many entries the
  // nops pack into. Capacity in groups is flat while N fits one entry.
  {
    CliffFamily fam;
    fam.feature = FeatureId::RobCompressMax;
    fam.response_shape = ResponseShape::Inflection;
    fam.name = "rob-stage3";
    const long G = 70;
    for (long n = 1; n <= 8; ++n) {
      fam.axis.push_back(n);
      Snippet s;
      s.label = fam.name + "-n" + std::to_string(n);
      s.warmup_iterations = 4;
      s.measure_iterations = 32;
      s.footprint_bytes = kStreamFootprint;
      append_blocker(s, 1);
      for (long g = 0; g < G; ++g) {
        s.body.push_back(make_filler(Op::UncondJump, 0));
        for (long i = 0; i < n; ++i) s.body.push_back(make_op(Op::Nop, std::nullopt, {}));
      }
      fam.snippets.push_back(std::move(s));
    }
    suite.stage3 = std::move(fam);
  }
  return suite;
}

std::pair<CliffFamily, CliffFamily> gen_bank_cliffs(const std::vector<long>& strides) {
  check_axis(strides, 3);
  bool has8 = false, has64 = false;
  for (long s : strides) has8 |= s == 8, has64 |= s == 64;
  if (!has8 || !has64) throw std::invalid_argument("stride axis must include 8 and 64");

  CliffFamily a;
  a.feature = FeatureId::DcacheBankCount;
  a.response_shape = ResponseShape::Plateau;
  a.name = "bank-stride";
  for (long s : strides) {
    a.axis.push_back(s);
    Snippet sn;
    sn.label = a.name + "-s" + std::to_string(s);
    sn.footprint_bytes = 8 * 128 + 64;
    sn.warmup_iterations = 16;
    sn.measure_iterations = 256;
    for (int i = 0; i < 8; ++i)
      sn.body.push_back(make_load(int_reg(8 + i), {}, static_cast<std::uint64_t>(i) * s));
    a.snippets.push_back(std::move(sn));
  }

  CliffFamily b;
  b.feature = FeatureId::DcacheBankConflict;
  b.response_shape = ResponseShape::Pairwise;
  b.name = "bank-pair";
  b.axis = {0, 1};
  for (int variant = 0; variant < 2; ++variant) {
    Snippet sn;
    sn.label = variant == 0 ? "bank-pair-sameword" : "bank-pair-diffword";
    sn.footprint_bytes = 4096;
    sn.warmup_iterations = 16;
    sn.measure_iterations = 256;
    for (int i = 0; i < 8; ++i)
      sn.body.push_back(make_load(int_reg(8 + i), {}, variant == 0 ? 0 : i * 8));
    b.snippets.push_back(std::move(sn));
  }
  return {std::move(a), std::move(b)};
}

CliffFamily gen_phr_cliff(const std::vector<long>& filler_branch_counts) {
  check_axis(filler_branch_counts, 3);
  CliffFamily f;
  f.feature = FeatureId::PhrLen;
  f.response_shape = ResponseShape::Inflection;
  f.name = "phr";
  for (long p : filler_branch_counts) {
    f.axis.push_back(p);
    Snippet s;
    s.label = f.name + "-p" + std::to_string(p);
    s.footprint_bytes = 64;
    s.warmup_iterations = 2;
    s.measure_iterations = 200;
    s.body.push_back(make_branch(false));  // history source
    for (long i = 0; i < p; ++i) s.body.push_back(make_branch(false));
    s.body.push_back(make_branch(false, 0));  // correlated consumer
    f.snippets.push_back(std::move(s));
  }
  return f;
}

namespace {

// Shared trigger/twin pair for the memory-order features: a store whose
// data arrives late off an fp chain, then a load to the same (trigger) or a
// different (twin) word, feeding an add chain that closes the loop.
Snippet alias_snippet(bool aliasing, const std::string& label) {
  Snippet s;
  s.label = label;
  s.footprint_bytes = 4096;
  s.warmup_iterations = 8;
  s.measure_iterations = 256;
  s.body.push_back(make_op(Op::FpMul, fp_reg(2), {fp_reg(2), int_reg(9)}));
  s.body.push_back(make_op(Op::FpMul, fp_reg(3), {fp_reg(2)}));
  s.body.push_back(make_op(Op::FpMul, fp_reg(4), {fp_reg(3)}));
  s.body.push_back(make_store({fp_reg(4)}, 0));
  s.body.push_back(make_load(int_reg(2), {}, aliasing ? 0 : 64));
  s.body.push_back(make_op(Op::IntAlu, int_reg(9), {int_reg(2)}));
  for (int i = 0; i < 5; ++i)
    s.body.push_back(make_op(Op::IntAlu, int_reg(9), {int_reg(9)}));
  return s;
}

}  // namespace

CliffFamily gen_special_case_pair(FeatureId feature) {
  CliffFamily f;
  f.feature = feature;
  f.response_shape = ResponseShape::Pairwise;
  f.axis = {0, 1};
  auto chain = [](Op op, int reg, int n, const std::string& label) {
    Snippet s;
    s.label = label;
    s.footprint_bytes = 64;
    s.warmup_iterations = 8;
    s.measure_iterations = 256;
    for (int i = 0; i < n; ++i) s.body.push_back(make_op(op, reg, {reg}));
    return s;
  };
  switch (feature) {
    case FeatureId::MoveElim:
      f.name = "pair-moveelim";
      f.snippets.push_back(chain(Op::IntMove, int_reg(2), 48, "pair-moveelim-move"));
      f.snippets.push_back(chain(Op::IntAlu, int_reg(2), 48, "pair-moveelim-add"));
      break;
    case FeatureId::FmaddSplit:
      f.name = "pair-fmaddsplit";
      f.snippets.push_back(chain(Op::FpMadd, fp_reg(2), 48, "pair-fmaddsplit-madd"));
      f.snippets.push_back(chain(Op::FpMul, fp_reg(2), 48, "pair-fmaddsplit-mul"));
      break;
    case FeatureId::AtomicFlow: {
      f.name = "pair-atomic";
      for (int variant = 0; variant < 2; ++variant) {
        Snippet s;
        s.label = variant == 0 ? "pair-atomic-trigger" : "pair-atomic-nop";
        s.footprint_bytes = 4096;
        s.warmup_iterations = 4;
        s.measure_iterations = 64;
        for (int i = 0; i < 8; ++i)
          s.body.push_back(variant == 0 ? make_filler(Op::Atomic, i)
                                        : make_op(Op::Nop, std::nullopt, {}));
        if (variant == 0)
          for (auto& in : s.body) in.addr = (*in.addr) % 4096;
        f.snippets.push_back(std::move(s));
      }
      break;
    }
    case FeatureId::NukeReplay:
      f.name = "pair-nuke";
      f.snippets.push_back(alias_snippet(true, "pair-nuke-alias"));
      f.snippets.push_back(alias_snippet(false, "pair-nuke-clean"));
      break;
    case FeatureId::StaStdSplit:
      f.name = "pair-stastd";
      f.snippets.push_back(alias_snippet(true, "pair-stastd-alias"));
      f.snippets.push_back(alias_snippet(false, "pair-stastd-clean"));
      break;
    case FeatureId::RobCompressExists: {
      f.name = "pair-robcompress";
      for (int variant = 0; variant < 2; ++variant) {
        Snippet s;
        s.label = variant == 0 ? "pair-robcompress-nop" : "pair-robcompress-beq";
        s.warmup_iterations = 4;
        s.measure_iterations = 32;
        s.footprint_bytes = kStreamFootprint;
        append_blocker(s, 1);
        for (int i = 0; i < 400; ++i)
          s.body.push_back(variant == 0 ? make_op(Op::Nop, std::nullopt, {})
                                        : make_branch(false));
        f.snippets.push_back(std::move(s));
      }
      break;
    }
    default:
      throw std::invalid_argument("gen_special_case_pair: unsupported feature");
  }
  return f;
}

std::vector<Snippet> gen_workload_suite() {
  std::vector<Snippet> out;

  auto chase = [](std::uint64_t footprint, int pad_nops, long warm, const std::string& label) {
    Snippet s;
    s.label = label;
    s.footprint_bytes = footprint;
    s.warmup_iterations = warm;
    s.measure_iterations = 256;
    s.body.push_back(make_load(int_reg(2), {int_reg(2)}, 0, 64));
    for (int i = 0; i < pad_nops; ++i) s.body.push_back(make_op(Op::Nop, std::nullopt, {}));
    return s;
  };
  out.push_back(chase(kStreamFootprint, 100, 4, "wl-pointer-chase-mem"));
  out.push_back(chase(kL2Footprint, 10, kL2Footprint / 64 + 8, "wl-streaming-l2"));

  {
    Snippet s;
    s.label = "wl-store-heavy";
    s.footprint_bytes = 4096;
    s.warmup_iterations = 16;
    s.measure_iterations = 256;
    for (int i = 0; i < 8; ++i) s.body.push_back(make_store({int_reg(31)}, i * 8));
    out.push_back(std::move(s));
  }
  {
    Snippet s;
    s.label = "wl-fpmul-heavy";
    s.footprint_bytes = 64;
    s.warmup_iterations = 16;
    s.measure_iterations = 256;
    for (int i = 0; i < 8; ++i)
      s.body.push_back(make_op(Op::FpMul, fp_reg(8 + i), {fp_reg(31)}));
    out.push_back(std::move(s));
  }
  {
    Snippet s;  // repeated correlated branches past the history window
    s.label = "wl-branchy-phr";
    s.footprint_bytes = 64;
    s.warmup_iterations = 2;
    s.measure_iterations = 200;
    s.body.push_back(make_branch(false));
    for (int i = 0; i < 130; ++i) s.body.push_back(make_branch(false));
    for (int i = 0; i < 10; ++i) s.body.push_back(make_branch(false, 0));
    out.push_back(std::move(s));
  }
  {
    Snippet s;
    s.label = "wl-balanced";
    s.footprint_bytes = 4096;
    s.warmup_iterations = 16;
    s.measure_iterations = 256;
    for (int i = 0; i < 3; ++i)
      s.body.push_back(make_op(Op::IntAlu, int_reg(8 + i), {int_reg(31)}));
    s.body.push_back(make_load(int_reg(12), {}, 0));
    s.body.push_back(make_op(Op::FpAlu, fp_reg(8), {fp_reg(31)}));
    out.push_back(std::move(s));
  }
  return out;
}

Snippet gen_storeset_alias_workload() {
  // The store walks a 1 KiB ring while the load pins word 0, so they collide
  // once every 16 iterations. A core that nukes and trains then holds every
  // later load behind the slow store; one that resolves store addresses at
  // dispatch and never replays sails past all the clean iterations. The
  // conservative policy waits either way, so the measured speculation gain
  // splits the two behaviors.
  Snippet s;
  s.label = "storeset-alias";
  s.footprint_bytes = 1024;
  s.warmup_iterations = 32;
  s.measure_iterations = 256;
  // r3 carries the loop: store data <- fp chain <- previous iteration's load
  s.body.push_back(make_op(Op::FpMul, fp_reg(2), {int_reg(3)}));
  s.body.push_back(make_op(Op::FpMul, fp_reg(3), {fp_reg(2)}));
  s.body.push_back(make_op(Op::FpMul, fp_reg(4), {fp_reg(3)}));
  s.body.push_back(make_store({fp_reg(4)}, 0, 64));
  s.body.push_back(make_load(int_reg(2), {}, 0));
  s.body.push_back(make_op(Op::IntAlu, int_reg(3), {int_reg(2)}));
  for (int i = 0; i < 5; ++i)
    s.body.push_back(make_op(Op::IntAlu, int_reg(3), {int_reg(3)}));
  return s;
}

std::vector<long> default_axis(FeatureId f) {
  auto range = [](long lo, long hi, long step) {
    std::vector<long> v;
    for (long p = lo; p <= hi; p += step) v.push_back(p);
    return v;
  };
  switch (f) {
    case FeatureId::L1Lat:
    case FeatureId::MemLat: return {8, 16, 24, 32};
    case FeatureId::L2Lat: return {4, 8, 12, 16};
    // tails sit at multiples of 12 (minus the loop branch for DecodeBw) so
    // any per-cycle cap in {1,2,3,4,6} divides the work exactly and the
    // plateau is flat instead of rippled by fetch-group alignment
    case FeatureId::DecodeBw: return {1, 2, 3, 4, 5, 11, 23, 35, 47};
    case FeatureId::LdPipeBw:
    case FeatureId::StPipeBw:
    case FeatureId::FmulBw:
    case FeatureId::FpDispatchBw: return {1, 2, 3, 4, 5, 6, 7, 8, 12, 24, 36, 48};
    case FeatureId::LoadWbBw: return range(3, 39, 4);
    case FeatureId::RobSize: return range(60, 360, 1);
    case FeatureId::LqSize: return range(8, 150, 1);
    case FeatureId::SqSize: return range(8, 140, 1);
    case FeatureId::IntPrf: return range(60, 260, 1);
    case FeatureId::FpPrf: return range(60, 230, 1);
    case FeatureId::DcacheBankCount: return {8, 16, 32, 64, 128};
    case FeatureId::PhrLen: return range(8, 240, 4);
    case FeatureId::RobCompressMax: return range(1, 8, 1);
    case FeatureId::RobCompressCondition: return range(0, 6, 1);
    default: return {0, 1};  // pairwise
  }
}

std::vector<CliffFamily> gen_all(const std::set<FeatureId>& features,
                                 const std::map<FeatureId, std::vector<long>>& overrides) {
  std::vector<CliffFamily> out;
  for (FeatureId f : features) {
    std::vector<long> axis = default_axis(f);
    if (auto it = overrides.find(f); it != overrides.end()) axis = it->second;
    switch (f) {
      case FeatureId::L1Lat:
      case FeatureId::L2Lat:
      case FeatureId::MemLat:
        out.push_back(gen_latency_cliff(f, axis));
        break;
      case FeatureId::DecodeBw:
      case FeatureId::LdPipeBw:
      case FeatureId::StPipeBw:
      case FeatureId::FmulBw:
      case FeatureId::FpDispatchBw:
      case FeatureId::LoadWbBw:
        out.push_back(gen_bandwidth_cliff(f, axis));
        break;
      case FeatureId::RobSize:
      case FeatureId::LqSize:
      case FeatureId::SqSize:
      case FeatureId::IntPrf:
      case FeatureId::FpPrf:
        out.push_back(gen_capacity_cliff(f, axis));
        break;
      case FeatureId::RobCompressMax:
        out.push_back(gen_rob_compression_suite().stage3);
        break;
      case FeatureId::RobCompressCondition: {
        // One point per candidate class behind a 130-branch prefix that pins
        // most of the reorder buffer; a class is compression-eligible when
        // its point stays at the prefix-only baseline. 100 fillers overflow
        // the remaining entries if stored raw but stay far from any register
        // file or queue limit.
        CliffFamily fam;
        fam.feature = f;
        fam.response_shape = ResponseShape::Pairwise;
        fam.name = "rob-condition";
        const std::vector<Op> classes = {Op::Nop,     Op::IntAlu, Op::FpAlu,
                                         Op::IntMove, Op::Load,   Op::CondBranch};
        for (long k = 0; k <= static_cast<long>(classes.size()); ++k) {
          fam.axis.push_back(k);
          Snippet s;
          s.label = "rob-condition-" + std::string(k == 0 ? "base" : op_name(classes[k - 1]));
          s.warmup_iterations = 4;
          s.measure_iterations = 32;
          s.footprint_bytes = kStreamFootprint;
          append_blocker(s, 1);
          // 110 not 130: fp dispatch width 3 packs at most 3 FpAlu per entry,
          // so 100 compressible fp fillers still need ~34 entries
          for (int i = 0; i < 110; ++i) s.body.push_back(make_branch(false));
          if (k > 0)
            for (int i = 0; i < 100; ++i)
              s.body.push_back(make_filler(classes[k - 1], i));
          fam.snippets.push_back(std::move(s));
        }
        out.push_back(std::move(fam));
        break;
      }
      case FeatureId::DcacheBankCount:
        out.push_back(gen_bank_cliffs(axis).first);
        break;
      case FeatureId::DcacheBankConflict:
        out.push_back(gen_bank_cliffs().second);
        break;
      case FeatureId::PhrLen:
        out.push_back(gen_phr_cliff(axis));
        break;
      case FeatureId::RobCompressExists:
      case FeatureId::MoveElim:
      case FeatureId::FmaddSplit:
      case FeatureId::AtomicFlow:
      case FeatureId::StaStdSplit:
      case FeatureId::NukeReplay:
        out.push_back(gen_special_case_pair(f));
        break;
    }
  }
  return out;
}

}  // namespace cliff
