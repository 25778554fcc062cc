#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "cliff/config.hpp"
#include "cliff/isa.hpp"

using namespace cliff;

TEST_CASE("op traits and names") {
  CHECK(traits(Op::Nop).compressible);
  CHECK(traits(Op::IntAlu).compressible);
  CHECK(traits(Op::FpAlu).compressible);
  for (Op op : {Op::Load, Op::Store, Op::CondBranch, Op::UncondJump, Op::Atomic, Op::FpMul,
                Op::FpMadd, Op::IntMove})
    CHECK_FALSE(traits(op).compressible);
  for (int i = 0; i < kNumOps; ++i) {
    Op op = static_cast<Op>(i);
    CHECK(op_from_name(op_name(op)) == op);
    CHECK(traits(op).default_latency >= 0);
  }
  CHECK_THROWS(op_from_name("bogus"));
}

TEST_CASE("feature and shape name round trips") {
  CHECK(all_features().size() == kNumFeatures);
  for (FeatureId f : all_features()) CHECK(feature_from_name(feature_name(f)) == f);
  for (ResponseShape s : {ResponseShape::Inflection, ResponseShape::Plateau,
                          ResponseShape::Slope, ResponseShape::Pairwise})
    CHECK(shape_from_name(shape_name(s)) == s);
  CHECK_THROWS(feature_from_name(""));
}

TEST_CASE("snippet validation") {
  Snippet s;
  CHECK_FALSE(validate_snippet(s).empty());  // empty body

  s.body.push_back({Op::IntAlu, 1, {1}, std::nullopt, 0, std::nullopt});
  s.measure_iterations = 4;
  CHECK(validate_snippet(s).empty());

  SUBCASE("mem op needs an in-footprint addr") {
    Instruction ld;
    ld.op = Op::Load;
    ld.dest = 2;
    s.body.push_back(ld);
    CHECK_FALSE(validate_snippet(s).empty());
    s.body.back().addr = 128;
    s.footprint_bytes = 64;
    CHECK_FALSE(validate_snippet(s).empty());
    s.footprint_bytes = 256;
    CHECK(validate_snippet(s).empty());
  }
  SUBCASE("non-mem op must not carry an addr") {
    s.body[0].addr = 0;
    CHECK_FALSE(validate_snippet(s).empty());
  }
  SUBCASE("register range") {
    s.body[0].dest = kRegSpace;
    CHECK_FALSE(validate_snippet(s).empty());
  }
  SUBCASE("correlation must point backward at a CondBranch") {
    Instruction br;
    br.op = Op::CondBranch;
    br.branch_meta = BranchMeta{false, 5};
    s.body.push_back(br);
    CHECK_FALSE(validate_snippet(s).empty());
    s.body.back().branch_meta->correlated_with = 0;  // an IntAlu, still invalid
    CHECK_FALSE(validate_snippet(s).empty());
  }
}

TEST_CASE("snippet stats") {
  Snippet s;
  s.measure_iterations = 1;
  s.footprint_bytes = 1024;
  s.body.push_back({Op::Load, 1, {}, 0, 0, std::nullopt});
  s.body.push_back({Op::IntAlu, 2, {1}, std::nullopt, 0, std::nullopt});
  s.body.push_back({Op::IntAlu, 2, {2}, std::nullopt, 0, std::nullopt});
  s.body.push_back({Op::Store, std::nullopt, {2}, 64, 0, std::nullopt});
  s.body.push_back({Op::Load, 3, {}, 64, 0, std::nullopt});
  SnippetStats st = snippet_stats(s);
  CHECK(st.count(Op::Load) == 2);
  CHECK(st.count(Op::IntAlu) == 2);
  CHECK(st.count(Op::Store) == 1);
  CHECK(st.chain_depth == 4);  // load -> alu -> alu -> store
  CHECK(st.distinct_addresses == 2);
}

TEST_CASE("snippet json round trip") {
  Snippet s;
  s.label = "rt";
  s.warmup_iterations = 2;
  s.measure_iterations = 8;
  s.footprint_bytes = 4096;
  s.body.push_back({Op::Load, 5, {1}, 64, 128, std::nullopt});
  s.body.push_back({Op::CondBranch, std::nullopt, {}, std::nullopt, 0, BranchMeta{true, 0}});
  nlohmann::json j = s;
  Snippet back = j.get<Snippet>();
  CHECK(back.label == s.label);
  CHECK(back.warmup_iterations == s.warmup_iterations);
  CHECK(back.measure_iterations == s.measure_iterations);
  CHECK(back.footprint_bytes == s.footprint_bytes);
  CHECK(back.body == s.body);
}

TEST_CASE("family json round trip") {
  CliffFamily f;
  f.feature = FeatureId::LqSize;
  f.axis = {1, 2, 3};
  f.response_shape = ResponseShape::Inflection;
  f.overhead = 2;
  f.name = "rt-family";
  for (long p : f.axis) {
    Snippet s;
    s.label = "p" + std::to_string(p);
    s.body.push_back({Op::Nop, std::nullopt, {}, std::nullopt, 0, std::nullopt});
    f.snippets.push_back(s);
  }
  nlohmann::json j = f;
  CliffFamily back = j.get<CliffFamily>();
  CHECK(back.feature == f.feature);
  CHECK(back.axis == f.axis);
  CHECK(back.response_shape == f.response_shape);
  CHECK(back.overhead == f.overhead);
  CHECK(back.name == f.name);
  CHECK(back.snippets.size() == f.snippets.size());
}

TEST_CASE("config validation and json round trip") {
  CoreConfig c;
  CHECK(c.validate().empty());
  c.rob_size = 0;
  CHECK_FALSE(c.validate().empty());
  c = CoreConfig{};
  c.dcache_banks = 0;  // explicitly legal: conflict-free idealization
  CHECK(c.validate().empty());
  c.rob_compress_max = 0;
  CHECK_FALSE(c.validate().empty());

  CoreConfig m = model_before();
  nlohmann::json j = m;
  CoreConfig back = j.get<CoreConfig>();
  CHECK(nlohmann::json(back) == j);
}

TEST_CASE("shipped presets match the in-code presets") {
  auto check = [](const CoreConfig& code, const char* file) {
    CoreConfig shipped = load_config(std::string(CLIFF_SOURCE_DIR) + "/presets/" + file);
    CHECK(nlohmann::json(shipped) == nlohmann::json(code));
  };
  check(oracle_kmh(), "oracle-kmh.json");
  check(model_before(), "model-before.json");
  check(boom_small(), "boom-small.json");
}
