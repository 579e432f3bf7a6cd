#include <doctest.h>

#include "faultsym/faultmodel.hpp"
#include "faultsym/generator.hpp"
#include "faultsym/oracle.hpp"
#include "helpers.hpp"

using namespace faultsym;

TEST_SUITE("faultmodel")
{
  TEST_CASE("running example has two targets")
  {
    const FaultedCfg f = testing::faulted(testing::fixture("running_example.fdsl"));
    REQUIRE(f.targets.size() == 2);
    CHECK(f.targets[0].id == 1);
    CHECK(f.targets[0].block == 1);
    CHECK(f.targets[0].skip_dest == 2);
    CHECK(f.targets[1].id == 2);
    CHECK(f.targets[1].block == 2);
    CHECK(f.targets[1].skip_dest == 3);
    CHECK(f.target_at(1) == 1);
    CHECK(f.target_at(3) == 0);
    CHECK(f.target_at(4) == 0);  // assertion guard
    CHECK(f.targets[0].flag_name() == "bFT1");
    CHECK(f.targets[1].flag_instance(3) == "bFT2#3");
  }

  TEST_CASE("straight-line code has no targets")
  {
    const FaultedCfg f = testing::faulted("void main(int x) { int y = x + 1; assert(y != x); }");
    CHECK(f.targets.empty());
    CHECK(print_ir(f) == print_ir(f.base));
  }

  TEST_CASE("a counter loop has two targets")
  {
    const FaultedCfg f = testing::faulted(testing::fixture("loop.fdsl"));
    REQUIRE(f.targets.size() == 2);
    CHECK(f.base.block(f.targets[0].block).term.kind == TermKind::CondJump);
    CHECK(f.base.block(f.targets[1].block).term.kind == TermKind::Jump);
  }

  TEST_CASE("skip destination is the layout successor")
  {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const FaultedCfg f = testing::faulted(random_program(seed));
      std::size_t branches = 0;
      for (const auto& b : f.base.blocks) {
        const bool branch = b.term.kind == TermKind::Jump ||
                            (b.term.kind == TermKind::CondJump && b.term.branch == BranchKind::Program);
        branches += branch ? 1 : 0;
        CHECK((f.target_at(b.id) != 0) == branch);
      }
      CHECK(f.targets.size() == branches);
      for (const auto& t : f.targets) {
        CHECK(t.skip_dest == layout_next(f.base, t.block));
        CHECK_FALSE(t.trivial);
      }
    }
  }

  TEST_CASE("assertion guards become targets only on request")
  {
    const Cfg cfg = lower(parse_and_validate(testing::fixture("running_example.fdsl")));
    CHECK(transform(cfg).targets.size() == 2);
    const FaultedCfg f = transform(cfg, FaultOptions{true});
    REQUIRE(f.targets.size() == 3);
    CHECK(f.targets[2].block == 4);
    CHECK(f.targets[2].skip_dest == 5);
  }

  TEST_CASE("faulted IR goldens")
  {
    for (const char* name : {"running_example", "loop", "budget_gap"}) {
      const FaultedCfg f = testing::faulted(testing::fixture(std::string(name) + ".fdsl"));
      CHECK(print_ir(f) == testing::read_text(std::string(GOLDEN_DIR) + "/" + name + ".faulted.ir"));
    }
    const std::string ir = print_ir(testing::faulted(testing::fixture("running_example.fdsl")));
    CHECK(ir.find("guard bFT1 skip-> BB2") != std::string::npos);
    CHECK(ir.find("guard bFT2 skip-> BB3") != std::string::npos);
  }

  TEST_CASE("flags forced false change nothing")
  {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const FaultedCfg f = testing::faulted(random_program(seed, GenOptions{40, true}));
      for (const Model& in : input_grid(f.base.inputs(), 4)) {
        const Outcome a = interpret(f, in, {}, 500);
        const Outcome b = interpret(f.base, in, 500);
        REQUIRE(a.kind == b.kind);
        REQUIRE(a.store == b.store);
        CHECK(a.activations.empty());
      }
    }
  }

  TEST_CASE("verdict exit codes")
  {
    CHECK(verdict_exit_code(RunVerdict::NoViolation) == 0);
    CHECK(verdict_exit_code(RunVerdict::ViolationFound) == 1);
    CHECK(verdict_exit_code(RunVerdict::Inconclusive) == 2);
    CHECK(std::string(verdict_name(RunVerdict::ViolationFound)) == "ViolationFound");
  }
}
