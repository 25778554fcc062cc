#include "cliff/sim.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <list>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace cliff {

namespace {

const std::array<const char*, kNumL1> kL1Names = {
    "FrontendBound", "BadSpeculation", "BackendBound", "Retiring"};
const std::array<const char*, kNumL2> kL2Names = {
    "LoadL1Bound",    "LoadL2Bound",  "LoadL3Bound",   "LoadMemBound",
    "StoreL1Bound",   "DTlbStall",    "IntDQBandwidth", "FVDQBandwidth",
    "MemDQBound",     "MemCommitLimit", "ScalarLongExecute"};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Fully associative LRU cache level.
class LruCache {
 public:
  explicit LruCache(std::size_t lines) : capacity_(lines) {}

  bool touch(std::uint64_t line) {
    auto it = map_.find(line);
    if (it == map_.end()) return false;
    order_.splice(order_.begin(), order_, it->second);
    return true;
  }

  void insert(std::uint64_t line) {
    auto it = map_.find(line);
    if (it != map_.end()) {
      order_.splice(order_.begin(), order_, it->second);
      return;
    }
    if (map_.size() >= capacity_) {
      map_.erase(order_.back());
      order_.pop_back();
    }
    order_.push_front(line);
    map_[line] = order_.begin();
  }

 private:
  std::size_t capacity_;
  std::list<std::uint64_t> order_;
  std::unordered_map<std::uint64_t, std::list<std::uint64_t>::iterator> map_;
};

constexpr long kNotDone = -1;

struct DynInstr {
  int body_idx;  // body.size() == implicit loop-closing branch
  long iter;
  Op op;
  int dest = -1;
  std::uint64_t eff_addr = 0;
  bool has_addr = false;
  bool taken_branch = false;
  bool mispredict = false;

  long fetch_c = -1;
  long fetch_group = -1;
  long dispatch_c = -1;
  long issue_c = -1;
  long done_c = kNotDone;
  long addr_resolve_c = -1;  // stores only
  int mem_level = 0;         // loads: 1/2/3 once issued
  bool forwarded = false;

  int rob_entry = -1;
  bool in_lq = false, in_sq = false;
  bool holds_int_prf = false, holds_fp_prf = false;
  long prev_writer = -2;  // rename undo: last_writer[dest] before dispatch
  std::array<long, 3> producers{{-1, -1, -1}};  // captured at dispatch
  bool squashed = false;
};

enum class BlockReason {
  None,
  IntBw,
  FpBw,
  MemBw,
  RobFull,
  LqFull,
  SqFull,
  PrfFull,
};

struct Pipeline {
  const CoreConfig& cfg;
  const Snippet& snip;
  long body_len;
  long iter_len;     // body + loop branch
  long total_iters;
  long total_instrs;
  std::uint64_t footprint_lines;
  std::uint64_t seed;

  std::vector<DynInstr> dyn;
  long fetch_pos = 0, dispatch_pos = 0, commit_pos = 0;

  std::array<long, kRegSpace> last_writer;
  std::vector<int> waiting;                       // dispatched, not completed
  std::vector<std::pair<long, long>> wb_pending;  // (fill cycle, dyn idx)

  // ROB entry table: member count per allocated entry, -1 once freed.
  std::vector<int> entry_members;
  long entries_used = 0;
  long open_entry = -1;
  long open_entry_cycle = -1;
  long open_entry_group = -1;

  long lq_used = 0, sq_used = 0;
  long int_prf_free, fp_prf_free;

  LruCache l1, l2;
  std::unordered_map<std::uint64_t, std::pair<long, int>> outstanding;  // line -> (fill, level)

  // store-set predictor, keyed by body index
  std::unordered_map<int, int> store_set_load_to_store;

  long fetch_blocked_by = -1;  // dyn idx of unresolved mispredicted branch
  long recovery_until = -1;

  // per-cycle scratch
  BlockReason block_reason = BlockReason::None;
  bool frontend_starved = false;

  // accounting
  std::array<long, kNumL1> slots{};
  std::array<long, kNumL2> backend_slots{};
  std::array<long, kNumOps> retired_by_op{};
  long retired_total = 0;
  std::map<std::string, long> events;
  long warmup_instrs;
  long region_start_cycle = -1;
  std::array<long, kNumL1> slots_at_region{};
  std::array<long, kNumL2> backend_at_region{};
  std::array<long, kNumOps> retired_at_region{};

  Pipeline(const CoreConfig& c, const Snippet& s)
      : cfg(c),
        snip(s),
        body_len(static_cast<long>(s.body.size())),
        iter_len(body_len + 1),
        total_iters(s.warmup_iterations + s.measure_iterations),
        total_instrs(iter_len * (s.warmup_iterations + s.measure_iterations)),
        l1(std::max<std::size_t>(1, c.l1_size_bytes / c.line_bytes)),
        l2(std::max<std::size_t>(1, c.l2_size_bytes / c.line_bytes)) {
    std::uint64_t fp = s.footprint_bytes ? s.footprint_bytes : c.line_bytes;
    footprint_lines = (fp + c.line_bytes - 1) / c.line_bytes;
    last_writer.fill(-1);
    int_prf_free = c.int_prf - kIntRegs;
    fp_prf_free = c.fp_prf - kFpRegs;
    warmup_instrs = s.warmup_iterations * iter_len;
    seed = fnv1a(nlohmann::json(c).dump());
    seed = fnv1a(s.label, seed ^ (std::uint64_t)total_instrs);
    events["bank_conflicts"] = 0;
    events["nukes"] = 0;
    events["mispredicts"] = 0;
    events["rob_full_cycles"] = 0;
    events["lq_full_cycles"] = 0;
    events["sq_full_cycles"] = 0;
    events["prf_stall_cycles"] = 0;
    events["int_prf_stall_cycles"] = 0;
    events["fp_prf_stall_cycles"] = 0;
  }

  // Number of conditional branches between the correlated source and this
  // branch within one iteration: the history distance the predictor needs.
  int history_distance(int body_idx) const {
    const auto& meta = snip.body[body_idx].branch_meta;
    int src = *meta->correlated_with;
    int n = 0;
    for (int i = src + 1; i < body_idx; ++i)
      if (snip.body[i].op == Op::CondBranch) ++n;
    return n;
  }

  DynInstr make_dyn(long idx) const {
    DynInstr d;
    d.iter = idx / iter_len;
    d.body_idx = static_cast<int>(idx % iter_len);
    if (d.body_idx == body_len) {
      d.op = Op::CondBranch;
      d.taken_branch = d.iter + 1 < total_iters;
      return d;
    }
    const Instruction& in = snip.body[d.body_idx];
    d.op = in.op;
    d.dest = in.dest ? *in.dest : -1;
    if (in.addr) {
      std::uint64_t span = footprint_lines * cfg.line_bytes;
      d.eff_addr = (*in.addr + static_cast<std::uint64_t>(d.iter) * in.addr_stride) % span;
      d.has_addr = true;
    }
    if (in.branch_meta) d.taken_branch = in.branch_meta->taken;
    return d;
  }

  bool needs_int_prf(const DynInstr& d) const {
    if (d.dest < 0 || is_fp_reg(d.dest)) return false;
    if (d.op == Op::IntMove && cfg.move_elim) return false;
    return true;
  }
  bool needs_fp_prf(const DynInstr& d) const { return d.dest >= 0 && is_fp_reg(d.dest); }

  int dispatch_class(Op op) const {
    if (is_mem(op)) return 2;
    if (is_fp(op)) return 1;
    return 0;
  }

  bool sources_ready(long idx, long now) const {
    const DynInstr& d = dyn[idx];
    for (long w : d.producers) {
      if (w < 0) continue;
      if (dyn[w].done_c == kNotDone || dyn[w].done_c > now) return false;
    }
    return true;
  }

  std::pair<long, int> cache_access(std::uint64_t addr, long now) {
    std::uint64_t line = addr / cfg.line_bytes;
    auto it = outstanding.find(line);
    if (it != outstanding.end()) {
      if (it->second.first > now) return {it->second.first, it->second.second};
      outstanding.erase(it);
    }
    if (l1.touch(line)) return {now + cfg.l1_lat, 1};
    if (l2.touch(line)) {
      l1.insert(line);
      outstanding[line] = {now + cfg.l2_lat, 2};
      return {now + cfg.l2_lat, 2};
    }
    l2.insert(line);
    l1.insert(line);
    outstanding[line] = {now + cfg.mem_lat, 3};
    return {now + cfg.mem_lat, 3};
  }

  void free_resources(DynInstr& d) {
    if (d.in_lq) lq_used--, d.in_lq = false;
    if (d.in_sq) sq_used--, d.in_sq = false;
    if (d.holds_int_prf) int_prf_free++, d.holds_int_prf = false;
    if (d.holds_fp_prf) fp_prf_free++, d.holds_fp_prf = false;
    if (d.rob_entry >= 0) {
      if (--entry_members[d.rob_entry] == 0) entries_used--;
      d.rob_entry = -1;
    }
  }

  void squash_from(long flush_idx, long now) {
    for (long j = dispatch_pos - 1; j >= flush_idx; --j) {
      DynInstr& d = dyn[j];
      if (d.dispatch_c >= 0) {
        if (d.dest >= 0) last_writer[d.dest] = d.prev_writer;
        free_resources(d);
      }
      d.squashed = true;
    }
    dyn.resize(flush_idx);
    fetch_pos = flush_idx;
    dispatch_pos = std::min(dispatch_pos, flush_idx);
    commit_pos = std::min(commit_pos, flush_idx);
    // `waiting` is filtered by the caller (issue_stage) via its flush point.
    std::erase_if(wb_pending, [&](const auto& p) { return p.second >= flush_idx; });
    open_entry = -1;
    fetch_blocked_by = -1;
    recovery_until = now + cfg.frontend_depth;
    events["nukes"]++;
  }

  void commit_stage(long now, int& committed) {
    int budget = cfg.fetch_decode_width;
    while (committed < budget && commit_pos < dispatch_pos) {
      DynInstr& d = dyn[commit_pos];
      if (d.done_c == kNotDone || d.done_c >= now) break;
      free_resources(d);
      if (commit_pos >= warmup_instrs) {
        retired_total++;
        retired_by_op[static_cast<int>(d.op)]++;
      }
      commit_pos++;
      committed++;
      if (commit_pos == warmup_instrs && region_start_cycle < 0) {
        region_start_cycle = now;
        slots_at_region = slots;
        backend_at_region = backend_slots;
        retired_at_region = retired_by_op;
      }
    }
  }

  void writeback_stage(long now) {
    std::sort(wb_pending.begin(), wb_pending.end());
    int granted = 0;
    size_t keep = 0;
    for (size_t i = 0; i < wb_pending.size(); ++i) {
      auto [fill, idx] = wb_pending[i];
      if (fill <= now && granted < cfg.load_wb_bw) {
        dyn[idx].done_c = now;
        granted++;
      } else {
        wb_pending[keep++] = wb_pending[i];
      }
    }
    wb_pending.resize(keep);
  }

  // Memory-order check for a load about to issue. Returns:
  //  0 = free to access the cache, 1 = must wait, 2 = forward from store.
  int load_order_check(long idx, long now, long& forward_ready) {
    const DynInstr& ld = dyn[idx];
    std::uint64_t word = ld.eff_addr / cfg.bank_word_bytes;
    if (cfg.mem_dep_policy == MemDepPolicy::Conservative) {
      for (long j = commit_pos; j < idx; ++j) {
        const DynInstr& st = dyn[j];
        if ((st.op == Op::Store || st.op == Op::Atomic) &&
            (st.done_c == kNotDone || st.done_c > now))
          return 1;
      }
      // all older stores complete; forward if one wrote this word
      for (long j = idx - 1; j >= commit_pos; --j) {
        const DynInstr& st = dyn[j];
        if (st.op == Op::Store && st.has_addr && st.eff_addr / cfg.bank_word_bytes == word) {
          forward_ready = st.done_c;
          return 2;
        }
      }
      return 0;
    }
    // Store-set policy: honor learned pairs, honor resolved aliases, and
    // speculate past stores whose address is still unknown.
    auto learned = store_set_load_to_store.find(ld.body_idx);
    for (long j = idx - 1; j >= commit_pos; --j) {
      const DynInstr& st = dyn[j];
      if (st.op != Op::Store && st.op != Op::Atomic) continue;
      bool incomplete = st.done_c == kNotDone || st.done_c > now;
      if (learned != store_set_load_to_store.end() && st.body_idx == learned->second &&
          incomplete)
        return 1;
      bool resolved = st.addr_resolve_c >= 0 && st.addr_resolve_c <= now;
      if (resolved && st.has_addr && st.eff_addr / cfg.bank_word_bytes == word) {
        if (incomplete) return 1;
        forward_ready = st.done_c;
        return 2;
      }
    }
    return 0;
  }

  // A store's address became visible: any younger load that already issued
  // against the same word violated memory order.
  void check_violation(long store_idx, long now) {
    const DynInstr& st = dyn[store_idx];
    if (!st.has_addr) return;
    std::uint64_t word = st.eff_addr / cfg.bank_word_bytes;
    long victim = -1;
    for (long j = store_idx + 1; j < dispatch_pos; ++j) {
      const DynInstr& ld = dyn[j];
      if (ld.op == Op::Load && ld.issue_c >= 0 && ld.issue_c < now &&
          ld.eff_addr / cfg.bank_word_bytes == word) {
        victim = j;
        break;
      }
    }
    if (victim < 0) return;
    if (!cfg.nuke_replay) return;
    store_set_load_to_store[dyn[victim].body_idx] = st.body_idx;
    squash_from(victim, now);
  }

  void issue_stage(long now) {
    int ld_issued = 0, st_issued = 0, fmul_issued = 0;
    std::uint64_t banks_used = 0;  // bitmask, dcache_banks <= 64 assumed
    std::vector<int> still;
    still.reserve(waiting.size());
    long flush_point = std::numeric_limits<long>::max();
    for (size_t wi = 0; wi < waiting.size(); ++wi) {
      long idx = waiting[wi];
      if (idx >= flush_point) continue;  // squashed mid-scan by a nuke
      DynInstr& d = dyn[idx];
      if (d.done_c != kNotDone) continue;
      if (!sources_ready(idx, now)) {
        still.push_back(static_cast<int>(idx));
        continue;
      }
      switch (d.op) {
        case Op::Nop:
        case Op::IntAlu:
        case Op::IntMove:
        case Op::FpAlu:
        case Op::CondBranch:
        case Op::UncondJump:
          d.issue_c = now;
          d.done_c = now + cfg.lat(d.op);
          break;
        case Op::FpMul:
          if (fmul_issued >= cfg.fmul_bw) {
            still.push_back(static_cast<int>(idx));
            continue;
          }
          fmul_issued++;
          d.issue_c = now;
          d.done_c = now + cfg.lat(Op::FpMul);
          break;
        case Op::FpMadd:
          d.issue_c = now;
          d.done_c = now + (cfg.fmadd_split
                                ? cfg.fmadd_split_mul_lat + cfg.fmadd_split_add_lat
                                : cfg.lat(Op::FpMadd));
          break;
        case Op::Atomic:
          // serializes: only issues once it is the oldest in-flight instr
          if (idx != commit_pos) {
            still.push_back(static_cast<int>(idx));
            continue;
          }
          d.issue_c = now;
          d.done_c = now + cfg.atomic_serialize_lat;
          break;
        case Op::Store: {
          if (st_issued >= cfg.st_pipes) {
            still.push_back(static_cast<int>(idx));
            continue;
          }
          st_issued++;
          d.issue_c = now;
          d.done_c = now + cfg.lat(Op::Store);
          if (d.addr_resolve_c < 0) {
            d.addr_resolve_c = now;
            std::size_t before = dyn.size();
            check_violation(idx, now);
            if (dyn.size() < before) flush_point = static_cast<long>(dyn.size());
          }
          break;
        }
        case Op::Load: {
          if (ld_issued >= cfg.ld_pipes) {
            still.push_back(static_cast<int>(idx));
            continue;
          }
          long fwd_ready = -1;
          int order = load_order_check(idx, now, fwd_ready);
          if (order == 1) {
            still.push_back(static_cast<int>(idx));
            continue;
          }
          if (order == 2) {
            ld_issued++;
            d.issue_c = now;
            d.forwarded = true;
            d.mem_level = 1;
            wb_pending.emplace_back(now + 2, idx);
            break;
          }
          std::uint64_t line = d.eff_addr / cfg.line_bytes;
          bool coalesced = false;
          {
            auto it = outstanding.find(line);
            coalesced = it != outstanding.end() && it->second.first > now;
          }
          if (!coalesced && cfg.dcache_banks > 0) {
            int bank = static_cast<int>((d.eff_addr / cfg.bank_word_bytes) %
                                        static_cast<std::uint64_t>(cfg.dcache_banks));
            std::uint64_t bit = 1ULL << (bank & 63);
            if (banks_used & bit) {
              events["bank_conflicts"]++;
              still.push_back(static_cast<int>(idx));
              continue;
            }
            banks_used |= bit;
          }
          ld_issued++;
          d.issue_c = now;
          auto [fill, level] = cache_access(d.eff_addr, now);
          d.mem_level = level;
          wb_pending.emplace_back(fill, idx);
          break;
        }
      }
    }
    waiting = std::move(still);
  }

  void dispatch_stage(long now, int& dispatched) {
    block_reason = BlockReason::None;
    frontend_starved = false;
    int budget = cfg.fetch_decode_width;
    int used_int = 0, used_fp = 0, used_mem = 0;
    while (dispatched < budget) {
      if (dispatch_pos >= fetch_pos) {
        frontend_starved = true;
        return;
      }
      DynInstr& d = dyn[dispatch_pos];
      if (d.fetch_c + cfg.frontend_depth > now) {
        frontend_starved = true;
        return;
      }
      int cls = dispatch_class(d.op);
      if (cls == 0 && used_int >= cfg.dispatch_bw_int) {
        block_reason = BlockReason::IntBw;
        return;
      }
      if (cls == 1 && used_fp >= cfg.dispatch_bw_fp) {
        block_reason = BlockReason::FpBw;
        return;
      }
      if (cls == 2 && used_mem >= cfg.dispatch_bw_mem) {
        block_reason = BlockReason::MemBw;
        return;
      }
      bool want_lq = d.op == Op::Load || d.op == Op::Atomic;
      bool want_sq = d.op == Op::Store || d.op == Op::Atomic;
      if (want_lq && lq_used >= cfg.lq_size) {
        block_reason = BlockReason::LqFull;
        events["lq_full_cycles"]++;
        return;
      }
      if (want_sq && sq_used >= cfg.sq_size) {
        block_reason = BlockReason::SqFull;
        events["sq_full_cycles"]++;
        return;
      }
      if (needs_int_prf(d) && int_prf_free <= 0) {
        block_reason = BlockReason::PrfFull;
        events["prf_stall_cycles"]++;
        events["int_prf_stall_cycles"]++;
        return;
      }
      if (needs_fp_prf(d) && fp_prf_free <= 0) {
        block_reason = BlockReason::PrfFull;
        events["prf_stall_cycles"]++;
        events["fp_prf_stall_cycles"]++;
        return;
      }
      // ROB entry: join the open compressed entry when allowed
      bool can_compress = cfg.compressible(d.op);
      bool joined = false;
      if (can_compress && open_entry >= 0 && open_entry_cycle == now &&
          open_entry_group == d.fetch_group &&
          entry_members[open_entry] < cfg.rob_compress_max) {
        d.rob_entry = static_cast<int>(open_entry);
        entry_members[open_entry]++;
        joined = true;
      }
      if (!joined) {
        if (entries_used >= cfg.rob_size) {
          block_reason = BlockReason::RobFull;
          events["rob_full_cycles"]++;
          return;
        }
        entry_members.push_back(1);
        d.rob_entry = static_cast<int>(entry_members.size() - 1);
        entries_used++;
        if (can_compress) {
          open_entry = d.rob_entry;
          open_entry_cycle = now;
          open_entry_group = d.fetch_group;
        } else {
          open_entry = -1;
        }
      }
      // commit point reached: dispatch
      d.dispatch_c = now;
      if (cls == 0) used_int++;
      if (cls == 1) used_fp++;
      if (cls == 2) used_mem++;
      if (want_lq) lq_used++, d.in_lq = true;
      if (want_sq) sq_used++, d.in_sq = true;
      if (needs_int_prf(d)) int_prf_free--, d.holds_int_prf = true;
      if (needs_fp_prf(d)) fp_prf_free--, d.holds_fp_prf = true;
      if (d.body_idx < body_len) {
        const auto& srcs = snip.body[d.body_idx].sources;
        for (std::size_t si = 0; si < srcs.size() && si < d.producers.size(); ++si)
          d.producers[si] = last_writer[srcs[si]];
      }
      if (d.dest >= 0) {
        d.prev_writer = last_writer[d.dest];
        last_writer[d.dest] = dispatch_pos;
      }
      if (d.op == Op::Nop || (d.op == Op::IntMove && cfg.move_elim)) {
        d.done_c = now;  // completes at rename, no FU
      } else if (d.op == Op::Store) {
        d.addr_resolve_c = cfg.sta_std_split ? -1 : now;
        waiting.push_back(static_cast<int>(dispatch_pos));
      } else {
        waiting.push_back(static_cast<int>(dispatch_pos));
      }
      dispatch_pos++;
      dispatched++;
    }
  }

  void fetch_stage(long now) {
    if (fetch_blocked_by >= 0) {
      const DynInstr& b = dyn[fetch_blocked_by];
      if (b.done_c == kNotDone || now < b.done_c + cfg.mispredict_penalty) return;
      recovery_until = std::max(recovery_until, now);
      fetch_blocked_by = -1;
    }
    long cap = static_cast<long>(cfg.fetch_decode_width) * (cfg.frontend_depth + 2);
    int slots_left = cfg.fetch_decode_width;
    while (slots_left > 0 && fetch_pos - dispatch_pos < cap && fetch_pos < total_instrs) {
      DynInstr d = make_dyn(fetch_pos);
      d.fetch_c = now;
      d.fetch_group = now;
      bool stop_after = false;
      if (d.op == Op::UncondJump || (d.op == Op::CondBranch && d.taken_branch))
        stop_after = true;  // taken control flow breaks fetch continuity
      if (d.body_idx < body_len) {
        const auto& meta = snip.body[d.body_idx].branch_meta;
        if (d.op == Op::CondBranch && meta && meta->correlated_with) {
          if (history_distance(d.body_idx) >= cfg.phr_len) {
            std::uint64_t r = splitmix64(seed ^ static_cast<std::uint64_t>(fetch_pos));
            if (r & 1) {
              d.mispredict = true;
              events["mispredicts"]++;
            }
          }
        }
      }
      dyn.push_back(d);
      long idx = fetch_pos++;
      slots_left--;
      if (dyn[idx].mispredict) {
        fetch_blocked_by = idx;
        return;
      }
      if (stop_after) return;
    }
  }

  void account_slots(long now, int committed) {
    int width = cfg.fetch_decode_width;
    slots[static_cast<int>(L1Cat::Retiring)] += committed;
    int rem = width - committed;
    if (rem <= 0) return;
    if (frontend_starved && commit_pos == dispatch_pos) {
      // pipeline drained: attribute to the frontend (or recovery)
      if (fetch_blocked_by >= 0 || now < recovery_until)
        slots[static_cast<int>(L1Cat::BadSpeculation)] += rem;
      else
        slots[static_cast<int>(L1Cat::FrontendBound)] += rem;
      return;
    }
    if (frontend_starved && (fetch_blocked_by >= 0 || now < recovery_until)) {
      slots[static_cast<int>(L1Cat::BadSpeculation)] += rem;
      return;
    }
    slots[static_cast<int>(L1Cat::BackendBound)] += rem;
    L2Cat cat = L2Cat::ScalarLongExecute;
    switch (block_reason) {
      case BlockReason::IntBw: cat = L2Cat::IntDQBandwidth; break;
      case BlockReason::FpBw: cat = L2Cat::FVDQBandwidth; break;
      case BlockReason::MemBw: cat = L2Cat::MemDQBound; break;
      case BlockReason::LqFull: cat = L2Cat::MemDQBound; break;
      case BlockReason::SqFull: cat = L2Cat::StoreL1Bound; break;
      default: {
        // classify by the oldest in-flight (blocking) instruction
        if (commit_pos < dispatch_pos) {
          const DynInstr& head = dyn[commit_pos];
          if (head.done_c != kNotDone && head.done_c < now) {
            cat = L2Cat::MemCommitLimit;
          } else if (head.op == Op::Load) {
            cat = head.mem_level >= 3   ? L2Cat::LoadMemBound
                  : head.mem_level == 2 ? L2Cat::LoadL2Bound
                                        : L2Cat::LoadL1Bound;
          } else if (head.op == Op::Store || head.op == Op::Atomic) {
            cat = L2Cat::StoreL1Bound;
          } else {
            cat = L2Cat::ScalarLongExecute;
          }
        }
        if (block_reason == BlockReason::RobFull || block_reason == BlockReason::PrfFull) {
          // keep the head-derived category: the head is what defers release
        }
        break;
      }
    }
    backend_slots[static_cast<int>(cat)] += rem;
  }

  RunResult run() {
    long now = 0;
    const long cycle_cap = 200'000'000;
    while (commit_pos < total_instrs) {
      int committed = 0;
      commit_stage(now, committed);
      writeback_stage(now);
      issue_stage(now);
      int dispatched = 0;
      dispatch_stage(now, dispatched);
      fetch_stage(now);
      account_slots(now, committed);
      now++;
      if (now > cycle_cap) throw std::runtime_error("simulate: cycle cap exceeded");
    }
    long end_cycle = now;
    RunResult r;
    r.cycles = end_cycle - (region_start_cycle < 0 ? 0 : region_start_cycle);
    if (r.cycles <= 0) r.cycles = 1;
    r.retired = retired_total;
    r.ipc = static_cast<double>(r.retired) / static_cast<double>(r.cycles);
    for (int i = 0; i < kNumOps; ++i)
      r.op_ipc[i] = static_cast<double>(retired_by_op[i] - retired_at_region[i]) /
                    static_cast<double>(r.cycles);
    double total_slots = 0;
    std::array<long, kNumL1> s1{};
    std::array<long, kNumL2> s2{};
    for (int i = 0; i < kNumL1; ++i) {
      s1[i] = slots[i] - slots_at_region[i];
      total_slots += s1[i];
    }
    for (int i = 0; i < kNumL2; ++i) s2[i] = backend_slots[i] - backend_at_region[i];
    if (total_slots > 0) {
      for (int i = 0; i < kNumL1; ++i) r.topdown.level1[i] = s1[i] / total_slots;
      for (int i = 0; i < kNumL2; ++i) r.topdown.level2_backend[i] = s2[i] / total_slots;
    }
    r.events = events;
    return r;
  }
};

}  // namespace

const char* l1_name(L1Cat c) { return kL1Names[static_cast<int>(c)]; }
const char* l2_name(L2Cat c) { return kL2Names[static_cast<int>(c)]; }

L1Cat TopDownVector::dominant_l1() const {
  int best = 0;
  for (int i = 1; i < kNumL1; ++i)
    if (level1[i] > level1[best]) best = i;
  return static_cast<L1Cat>(best);
}

L2Cat TopDownVector::dominant_l2() const {
  int best = 0;
  for (int i = 1; i < kNumL2; ++i)
    if (level2_backend[i] > level2_backend[best]) best = i;
  return static_cast<L2Cat>(best);
}

void to_json(nlohmann::json& j, const TopDownVector& t) {
  nlohmann::json l1, l2;
  for (int i = 0; i < kNumL1; ++i) l1[kL1Names[i]] = t.level1[i];
  for (int i = 0; i < kNumL2; ++i) l2[kL2Names[i]] = t.level2_backend[i];
  j = nlohmann::json{{"level1", l1}, {"level2_backend", l2}};
}

void to_json(nlohmann::json& j, const RunResult& r) {
  nlohmann::json op;
  for (int i = 0; i < kNumOps; ++i)
    if (r.op_ipc[i] != 0.0) op[op_name(static_cast<Op>(i))] = r.op_ipc[i];
  j = nlohmann::json{{"cycles", r.cycles},   {"retired", r.retired}, {"ipc", r.ipc},
                     {"op_ipc", op},         {"topdown", r.topdown}, {"events", r.events}};
}

RunResult simulate(const CoreConfig& cfg, const Snippet& s) {
  auto cfg_errs = cfg.validate();
  if (!cfg_errs.empty())
    throw std::invalid_argument("simulate: invalid config: " + cfg_errs.front());
  auto snip_errs = validate_snippet(s);
  if (!snip_errs.empty())
    throw std::invalid_argument("simulate: invalid snippet '" + s.label +
                                "': " + snip_errs.front().message);
  if (cfg.dcache_banks > 64)
    throw std::invalid_argument("simulate: dcache_banks > 64 unsupported");
  Pipeline p(cfg, s);
  return p.run();
}

}  // namespace cliff
