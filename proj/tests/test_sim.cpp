#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cliff/generators.hpp"
#include "cliff/sim.hpp"

using namespace cliff;

namespace {

Instruction alu(int dest, std::vector<int> srcs) {
  return {Op::IntAlu, dest, std::move(srcs), std::nullopt, 0, std::nullopt};
}

Snippet chain_snippet(Op op, int n, std::uint64_t footprint, long warmup, long measure) {
  Snippet s;
  s.footprint_bytes = footprint;
  s.warmup_iterations = warmup;
  s.measure_iterations = measure;
  for (int i = 0; i < n; ++i)
    s.body.push_back({op, 1, {1}, op == Op::Load ? std::optional<std::uint64_t>(0)
                                                 : std::nullopt,
                      0, std::nullopt});
  return s;
}

}  // namespace

TEST_CASE("single nop pipeline fill") {
  CoreConfig c;
  c.frontend_depth = 5;
  Snippet s;
  s.measure_iterations = 1;
  s.body.push_back({Op::Nop, std::nullopt, {}, std::nullopt, 0, std::nullopt});
  RunResult r = simulate(c, s);
  // frontend pipe (5) + fetch/dispatch/commit hand-off
  CHECK(r.cycles == 9);
  CHECK(r.retired == 2);  // nop + loop-closing branch
}

TEST_CASE("independent alu stream saturates dispatch width") {
  CoreConfig c;
  Snippet s;
  s.measure_iterations = 200;
  // 59 alus + the loop branch = 60 per iteration, an exact 6-wide multiple
  for (int i = 0; i < 59; ++i) s.body.push_back(alu(1 + i % 8, {}));
  RunResult r = simulate(c, s);
  CHECK(r.ipc <= c.fetch_decode_width + 1e-9);
  CHECK(r.ipc == doctest::Approx(6.0).epsilon(0.02));
  CHECK(r.retired == 200 * 60);
}

TEST_CASE("dependent L1 load chain serializes at l1_lat per link") {
  CoreConfig c;
  Snippet s = chain_snippet(Op::Load, 64, 64, 1, 1);
  RunResult r = simulate(c, s);
  CHECK(r.cycles >= 64 * c.l1_lat);
  CHECK(r.cycles <= 64 * c.l1_lat + 40);  // small pipeline constant
}

TEST_CASE("cache levels served by footprint") {
  CoreConfig c;
  // streaming chained loads; footprint decides the service level
  auto lat_of = [&](std::uint64_t footprint) {
    Snippet s;
    s.footprint_bytes = footprint;
    s.warmup_iterations = footprint / 64 + 8;
    s.measure_iterations = 64;
    s.body.push_back({Op::Load, 1, {1}, 0, 64, std::nullopt});
    RunResult r = simulate(c, s);
    return static_cast<double>(r.cycles) / s.measure_iterations;
  };
  CHECK(lat_of(16 * 1024) == doctest::Approx(c.l1_lat).epsilon(0.05));
  CHECK(lat_of(128 * 1024) == doctest::Approx(c.l2_lat).epsilon(0.05));
  CHECK(lat_of(8 * 1024 * 1024) == doctest::Approx(c.mem_lat).epsilon(0.05));
}

TEST_CASE("determinism: identical inputs give bit-identical results") {
  CoreConfig c;
  Snippet s = gen_phr_cliff({8, 120, 240}).snippets[2];  // exercises the seeded path
  nlohmann::json a = simulate(c, s);
  nlohmann::json b = simulate(c, s);
  CHECK(a == b);
}

TEST_CASE("monotone pressure: ipc steady under longer measurement") {
  CoreConfig c;
  Snippet s = chain_snippet(Op::IntAlu, 16, 0, 2, 50);
  double ipc1 = simulate(c, s).ipc;
  s.measure_iterations = 200;
  double ipc2 = simulate(c, s).ipc;
  CHECK(std::abs(ipc1 - ipc2) / ipc2 < 0.01);
}

TEST_CASE("resource ceilings on bandwidth cliff points") {
  CoreConfig c;
  for (FeatureId f : {FeatureId::LdPipeBw, FeatureId::StPipeBw, FeatureId::FmulBw}) {
    CliffFamily fam = gen_bandwidth_cliff(f, {1, 4, 8, 24});
    for (const Snippet& s : fam.snippets) {
      RunResult r = simulate(c, s);
      CHECK(r.op_rate(Op::Load) <= std::min(c.ld_pipes, c.load_wb_bw) + 1e-9);
      CHECK(r.op_rate(Op::Store) <= c.st_pipes + 1e-9);
      CHECK(r.op_rate(Op::FpMul) <= c.fmul_bw + 1e-9);
      CHECK(r.ipc <= c.fetch_decode_width + 1e-9);
    }
  }
}

TEST_CASE("topdown shares well-formed across snippet shapes") {
  CoreConfig c;
  std::vector<Snippet> suite = gen_workload_suite();
  suite.push_back(chain_snippet(Op::IntAlu, 8, 0, 2, 50));
  for (const Snippet& s : suite) {
    RunResult r = simulate(c, s);
    double sum1 = 0;
    for (double v : r.topdown.level1) {
      CHECK(v >= 0.0);
      sum1 += v;
    }
    CHECK(sum1 == doctest::Approx(1.0).epsilon(1e-9));
    double sum2 = 0;
    for (double v : r.topdown.level2_backend) {
      CHECK(v >= 0.0);
      sum2 += v;
    }
    CHECK(sum2 == doctest::Approx(r.topdown.l1(L1Cat::BackendBound)).epsilon(1e-9));
    for (const auto& [name, v] : r.events) CHECK(v >= 0);
    CHECK(r.cycles > 0);
  }
}

TEST_CASE("pure nop stream retires everything") {
  CoreConfig c;
  Snippet s;
  s.measure_iterations = 400;
  for (int i = 0; i < 29; ++i)
    s.body.push_back({Op::Nop, std::nullopt, {}, std::nullopt, 0, std::nullopt});
  RunResult r = simulate(c, s);
  CHECK(r.topdown.l1(L1Cat::Retiring) > 0.95);
}

TEST_CASE("bank conflicts: same word serializes only with banks > 0") {
  // the join alu keeps exactly one load pair in flight, so only same-cycle
  // same-bank collisions can fire
  auto pair_snippet = [](std::uint64_t addr_b) {
    Snippet s;
    s.footprint_bytes = 4096;
    s.warmup_iterations = 4;
    s.measure_iterations = 200;
    s.body.push_back({Op::Load, 1, {3}, 0, 0, std::nullopt});
    s.body.push_back({Op::Load, 2, {3}, addr_b, 0, std::nullopt});
    s.body.push_back({Op::IntAlu, 3, {1, 2}, std::nullopt, 0, std::nullopt});
    return s;
  };
  CoreConfig banked;  // 8 banks
  CoreConfig ideal;
  ideal.dcache_banks = 0;
  RunResult rb = simulate(banked, pair_snippet(0));
  RunResult ri = simulate(ideal, pair_snippet(0));
  CHECK(rb.event("bank_conflicts") > 0);
  CHECK(ri.event("bank_conflicts") == 0);
  CHECK(rb.cycles > ri.cycles);

  // different words on distinct banks never conflict
  RunResult rs = simulate(banked, pair_snippet(8));
  CHECK(rs.event("bank_conflicts") == 0);
  CHECK(rs.cycles < rb.cycles);
}

TEST_CASE("store-set: one nuke then forced in-order forever") {
  CoreConfig c;  // StoreSet + nuke + sta split on
  Snippet w = gen_storeset_alias_workload();
  RunResult r = simulate(c, w);
  CHECK(r.event("nukes") == 1);
  CHECK(r.event("nukes") < w.warmup_iterations + w.measure_iterations);

  CoreConfig no_nuke = c;
  no_nuke.nuke_replay = false;
  CHECK(simulate(no_nuke, w).event("nukes") == 0);
}

TEST_CASE("phr: correlation survives inside the history window only") {
  CoreConfig c;
  CliffFamily fam = gen_phr_cliff({8, 60, 116, 124, 200});
  long total = fam.snippets[0].warmup_iterations + fam.snippets[0].measure_iterations;
  std::vector<long> mis;
  for (const Snippet& s : fam.snippets) mis.push_back(simulate(c, s).event("mispredicts"));
  CHECK(mis[0] == 0);    // distance 8 << phr_len 120
  CHECK(mis[1] == 0);
  CHECK(mis[2] == 0);    // 116 still inside
  CHECK(mis[3] > total / 4);  // 124 outside: ~50% mispredict
  CHECK(mis[4] > total / 4);
}
