#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliff/isa.hpp"

namespace cliff {

enum class MemDepPolicy { Conservative, StoreSet };

// Every tunable parameter and feature toggle of the timing model.
struct CoreConfig {
  int fetch_decode_width = 6;
  int dispatch_bw_int = 6;
  int dispatch_bw_fp = 3;
  int dispatch_bw_mem = 6;

  int rob_size = 160;
  bool rob_compression_enabled = true;
  int rob_compress_max = 6;
  std::set<Op> compressible_classes = {Op::Nop, Op::IntAlu, Op::FpAlu};

  int lq_size = 72;
  int sq_size = 56;
  int int_prf = 224;
  int fp_prf = 192;

  int ld_pipes = 3;
  int st_pipes = 2;
  int load_wb_bw = 3;

  // Per-class execution latencies; Load latency comes from the cache model.
  std::array<int, kNumOps> fu_latency = [] {
    std::array<int, kNumOps> a{};
    for (int i = 0; i < kNumOps; ++i) a[i] = traits(static_cast<Op>(i)).default_latency;
    return a;
  }();
  int fmul_bw = 3;
  bool fmadd_split = true;
  int fmadd_split_mul_lat = 3;
  int fmadd_split_add_lat = 2;

  std::uint64_t l1_size_bytes = 64 * 1024;
  std::uint64_t l2_size_bytes = 1024 * 1024;
  std::uint64_t line_bytes = 64;
  int l1_lat = 4;
  int l2_lat = 16;
  int mem_lat = 227;

  int dcache_banks = 8;  // 0 = conflict-free idealization
  std::uint64_t bank_word_bytes = 8;

  bool move_elim = true;
  int atomic_serialize_lat = 30;

  MemDepPolicy mem_dep_policy = MemDepPolicy::StoreSet;
  bool nuke_replay = true;
  bool sta_std_split = true;

  int phr_len = 120;
  // Not derivable from measurement on the reference design; placeholders,
  // never used as calibration ground truth.
  int mispredict_penalty = 14;
  int frontend_depth = 10;

  int lat(Op op) const { return fu_latency[static_cast<int>(op)]; }
  bool compressible(Op op) const {
    return rob_compression_enabled && compressible_classes.count(op) > 0;
  }

  std::vector<std::string> validate() const;
};

// Named presets: the reference ("oracle") core and the deliberately
// mismatched model awaiting calibration.
CoreConfig oracle_kmh();
CoreConfig model_before();
CoreConfig boom_small();

void to_json(nlohmann::json& j, const CoreConfig& c);
void from_json(const nlohmann::json& j, CoreConfig& c);

CoreConfig load_config(const std::string& path);
void save_config(const CoreConfig& c, const std::string& path);

}  // namespace cliff
