#include "cliff/config.hpp"

#include <fstream>
#include <stdexcept>

namespace cliff {

std::vector<std::string> CoreConfig::validate() const {
  std::vector<std::string> out;
  auto need = [&](bool ok, const char* msg) {
    if (!ok) out.emplace_back(msg);
  };
  need(fetch_decode_width >= 1, "fetch_decode_width < 1");
  need(dispatch_bw_int >= 1 && dispatch_bw_fp >= 1 && dispatch_bw_mem >= 1,
       "dispatch bandwidth < 1");
  need(rob_size >= 1, "rob_size < 1");
  need(!rob_compression_enabled || rob_compress_max >= 1,
       "rob_compress_max < 1 with compression enabled");
  need(lq_size >= 1 && sq_size >= 1, "queue size < 1");
  need(int_prf >= kIntRegs + 1 && fp_prf >= kFpRegs + 1,
       "physical registers must exceed the architectural namespace");
  need(ld_pipes >= 1 && st_pipes >= 1 && load_wb_bw >= 1, "pipe count < 1");
  need(fmul_bw >= 1, "fmul_bw < 1");
  need(dcache_banks >= 0, "dcache_banks < 0");
  need(l1_lat < l2_lat && l2_lat < mem_lat, "latencies must satisfy l1 < l2 < mem");
  need(l1_size_bytes < l2_size_bytes, "l1 size must be below l2 size");
  need(line_bytes > 0 && bank_word_bytes > 0, "line/bank granularity < 1");
  need(phr_len >= 1, "phr_len < 1");
  need(mispredict_penalty >= 1 && frontend_depth >= 1, "frontend timings < 1");
  return out;
}

CoreConfig oracle_kmh() {
  // Reference design values; see presets/oracle-kmh.json.
  return CoreConfig{};
}

CoreConfig model_before() {
  CoreConfig c;
  c.rob_size = 320;
  c.rob_compression_enabled = false;
  c.rob_compress_max = 1;
  c.lq_size = 128;
  c.sq_size = 96;
  c.load_wb_bw = 8;
  c.l2_lat = 27;
  c.mem_lat = 248;
  c.dispatch_bw_fp = 4;
  c.fmul_bw = 4;
  c.dcache_banks = 0;
  c.fmadd_split = false;
  c.sta_std_split = false;
  c.nuke_replay = false;
  c.atomic_serialize_lat = 10;
  c.phr_len = 200;
  return c;
}

CoreConfig boom_small() {
  CoreConfig c;
  c.fetch_decode_width = 4;
  c.dispatch_bw_int = 4;
  c.dispatch_bw_fp = 2;
  c.dispatch_bw_mem = 4;
  c.rob_size = 96;
  c.rob_compression_enabled = false;
  c.rob_compress_max = 1;
  c.lq_size = 24;
  c.sq_size = 24;
  c.int_prf = 128;
  c.fp_prf = 112;
  c.ld_pipes = 2;
  c.st_pipes = 1;
  c.load_wb_bw = 2;
  c.fmul_bw = 1;
  c.dispatch_bw_fp = 2;
  c.l2_lat = 22;
  c.mem_lat = 120;
  c.dcache_banks = 0;
  c.sta_std_split = false;
  c.phr_len = 60;
  return c;
}

namespace {
const char* policy_name(MemDepPolicy p) {
  return p == MemDepPolicy::Conservative ? "Conservative" : "StoreSet";
}
MemDepPolicy policy_from_name(const std::string& s) {
  if (s == "Conservative") return MemDepPolicy::Conservative;
  if (s == "StoreSet") return MemDepPolicy::StoreSet;
  throw std::invalid_argument("unknown mem_dep_policy: " + s);
}
}  // namespace

void to_json(nlohmann::json& j, const CoreConfig& c) {
  std::vector<std::string> compressible;
  for (Op op : c.compressible_classes) compressible.emplace_back(op_name(op));
  nlohmann::json lat;
  for (int i = 0; i < kNumOps; ++i) lat[op_name(static_cast<Op>(i))] = c.fu_latency[i];
  j = nlohmann::json{
      {"schema_version", 1},
      {"fetch_decode_width", c.fetch_decode_width},
      {"dispatch_bw_int", c.dispatch_bw_int},
      {"dispatch_bw_fp", c.dispatch_bw_fp},
      {"dispatch_bw_mem", c.dispatch_bw_mem},
      {"rob_size", c.rob_size},
      {"rob_compression_enabled", c.rob_compression_enabled},
      {"rob_compress_max", c.rob_compress_max},
      {"compressible_classes", compressible},
      {"lq_size", c.lq_size},
      {"sq_size", c.sq_size},
      {"int_prf", c.int_prf},
      {"fp_prf", c.fp_prf},
      {"ld_pipes", c.ld_pipes},
      {"st_pipes", c.st_pipes},
      {"load_wb_bw", c.load_wb_bw},
      {"fu_latency", lat},
      {"fmul_bw", c.fmul_bw},
      {"fmadd_split", c.fmadd_split},
      {"fmadd_split_mul_lat", c.fmadd_split_mul_lat},
      {"fmadd_split_add_lat", c.fmadd_split_add_lat},
      {"l1_size_bytes", c.l1_size_bytes},
      {"l2_size_bytes", c.l2_size_bytes},
      {"line_bytes", c.line_bytes},
      {"l1_lat", c.l1_lat},
      {"l2_lat", c.l2_lat},
      {"mem_lat", c.mem_lat},
      {"dcache_banks", c.dcache_banks},
      {"bank_word_bytes", c.bank_word_bytes},
      {"move_elim", c.move_elim},
      {"atomic_serialize_lat", c.atomic_serialize_lat},
      {"mem_dep_policy", policy_name(c.mem_dep_policy)},
      {"nuke_replay", c.nuke_replay},
      {"sta_std_split", c.sta_std_split},
      {"phr_len", c.phr_len},
      {"mispredict_penalty", c.mispredict_penalty},
      {"frontend_depth", c.frontend_depth},
  };
}

void from_json(const nlohmann::json& j, CoreConfig& c) {
  c = CoreConfig{};
  c.fetch_decode_width = j.at("fetch_decode_width").get<int>();
  c.dispatch_bw_int = j.at("dispatch_bw_int").get<int>();
  c.dispatch_bw_fp = j.at("dispatch_bw_fp").get<int>();
  c.dispatch_bw_mem = j.at("dispatch_bw_mem").get<int>();
  c.rob_size = j.at("rob_size").get<int>();
  c.rob_compression_enabled = j.at("rob_compression_enabled").get<bool>();
  c.rob_compress_max = j.at("rob_compress_max").get<int>();
  c.compressible_classes.clear();
  for (const auto& name : j.at("compressible_classes"))
    c.compressible_classes.insert(op_from_name(name.get<std::string>()));
  c.lq_size = j.at("lq_size").get<int>();
  c.sq_size = j.at("sq_size").get<int>();
  c.int_prf = j.at("int_prf").get<int>();
  c.fp_prf = j.at("fp_prf").get<int>();
  c.ld_pipes = j.at("ld_pipes").get<int>();
  c.st_pipes = j.at("st_pipes").get<int>();
  c.load_wb_bw = j.at("load_wb_bw").get<int>();
  if (j.contains("fu_latency"))
    for (int i = 0; i < kNumOps; ++i) {
      const char* n = op_name(static_cast<Op>(i));
      if (j["fu_latency"].contains(n)) c.fu_latency[i] = j["fu_latency"][n].get<int>();
    }
  c.fmul_bw = j.at("fmul_bw").get<int>();
  c.fmadd_split = j.at("fmadd_split").get<bool>();
  c.fmadd_split_mul_lat = j.value("fmadd_split_mul_lat", 3);
  c.fmadd_split_add_lat = j.value("fmadd_split_add_lat", 2);
  c.l1_size_bytes = j.at("l1_size_bytes").get<std::uint64_t>();
  c.l2_size_bytes = j.at("l2_size_bytes").get<std::uint64_t>();
  c.line_bytes = j.value("line_bytes", std::uint64_t{64});
  c.l1_lat = j.at("l1_lat").get<int>();
  c.l2_lat = j.at("l2_lat").get<int>();
  c.mem_lat = j.at("mem_lat").get<int>();
  c.dcache_banks = j.at("dcache_banks").get<int>();
  c.bank_word_bytes = j.value("bank_word_bytes", std::uint64_t{8});
  c.move_elim = j.at("move_elim").get<bool>();
  c.atomic_serialize_lat = j.at("atomic_serialize_lat").get<int>();
  c.mem_dep_policy = policy_from_name(j.at("mem_dep_policy").get<std::string>());
  c.nuke_replay = j.at("nuke_replay").get<bool>();
  c.sta_std_split = j.at("sta_std_split").get<bool>();
  c.phr_len = j.at("phr_len").get<int>();
  c.mispredict_penalty = j.value("mispredict_penalty", 14);
  c.frontend_depth = j.value("frontend_depth", 10);
}

CoreConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  in >> j;
  CoreConfig c = j.get<CoreConfig>();
  auto errs = c.validate();
  if (!errs.empty()) throw std::runtime_error("invalid config " + path + ": " + errs.front());
  return c;
}

void save_config(const CoreConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config: " + path);
  out << nlohmann::json(c).dump(2) << "\n";
}

}  // namespace cliff
