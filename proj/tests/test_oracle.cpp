#include <doctest.h>

#include "faultsym/oracle.hpp"
#include "helpers.hpp"

using namespace faultsym;

namespace {

Int int_at(const Outcome& o, const std::string& v) { return std::get<Int>(o.store.at(v)); }

}  // namespace

TEST_SUITE("oracle")
{
  TEST_CASE("interpret the running example")
  {
    const FaultedCfg f = testing::faulted(testing::fixture("running_example.fdsl"));
    const Outcome skip = interpret(f, {{"x", Int(1)}}, {{2, 1}}, 100);
    CHECK(skip.kind == OutcomeKind::Bad);
    CHECK(int_at(skip, "m") == 3);
    CHECK(int_at(skip, "n") == 3);
    REQUIRE(skip.activations.size() == 1);
    CHECK(skip.activations[0].target == 2);

    const Outcome plain = interpret(f, {{"x", Int(1)}}, {}, 100);
    CHECK(plain.kind == OutcomeKind::Halt);
    CHECK(int_at(plain, "n") == 1);

    const Outcome zero = interpret(f, {{"x", Int(0)}}, {}, 100);
    CHECK(zero.kind == OutcomeKind::Halt);
    CHECK(int_at(zero, "n") == 2);
    CHECK(zero.guard_log == std::vector<std::pair<int, int>>{{1, 1}});
  }

  TEST_CASE("occurrences are counted per target")
  {
    const FaultedCfg f = testing::faulted(testing::fixture("loop.fdsl"));
    const Outcome o = interpret(f, {{"x", Int(0)}}, {}, 100);
    CHECK(o.guard_log == std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 2}, {2, 2}, {1, 3}});
    // Skipping the third header check runs the body once more.
    const Outcome extra = interpret(f, {{"x", Int(0)}}, {{1, 3}}, 100);
    CHECK(extra.kind == OutcomeKind::Bad);
    CHECK(int_at(extra, "i") == 3);
  }

  TEST_CASE("step limit and division by zero")
  {
    const FaultedCfg spin = testing::faulted("void main() { loop (true) { } }");
    const Outcome o = interpret(spin, {}, {}, 50);
    CHECK(o.kind == OutcomeKind::Truncated);
    CHECK(o.steps <= 51);
    const FaultedCfg d = testing::faulted("void main(int x) { int y = 6 / x; }");
    CHECK(interpret(d, {{"x", Int(0)}}, {}, 50).kind == OutcomeKind::Div0);
    const Outcome q = interpret(d, {{"x", Int(-4)}}, {}, 50);
    CHECK(int_at(q, "y") == -1);
  }

  TEST_CASE("large values fall back to exact arithmetic")
  {
    const FaultedCfg f = testing::faulted(
        "void main(int x) { int y = x; int i = 0; loop (i < 5) { y = y * y * y; i = i + 1; }"
        " assert(y != 0); }");
    const Outcome o = interpret(f, {{"x", Int(3)}}, {}, 500);
    CHECK(o.kind == OutcomeKind::Halt);
    Int expect = 3;
    for (int k = 0; k < 5; ++k) {
      expect = expect * expect * expect;
    }
    CHECK(int_at(o, "y") == expect);
  }

  TEST_CASE("enumerate verdicts")
  {
    const FaultedCfg f = testing::faulted(testing::fixture("running_example.fdsl"));
    OracleOptions o;
    o.input_bound = 2;
    o.budget = 0;
    CHECK(enumerate_verdict(f, o).verdict == RunVerdict::NoViolation);

    o.budget = 1;
    const OracleResult r = enumerate_verdict(f, o);
    CHECK(r.verdict == RunVerdict::ViolationFound);
    CHECK(r.min_faults == 1);
    REQUIRE(r.witnesses.size() == 4);  // every x != 0 in [-2, 2]
    for (const auto& w : r.witnesses) {
      CHECK(std::get<Int>(w.input.at("x")) != 0);
      REQUIRE(w.activations.size() == 1);
      CHECK(w.activations[0].target == 2);
      CHECK(w.activations[0].occ == 1);
    }

    o.budget = 2;
    const OracleResult r2 = enumerate_verdict(f, o);
    CHECK(r2.witnesses.size() == 5);  // x = 0 needs both skips
    CHECK(r2.verdict_for(0) == RunVerdict::NoViolation);
    CHECK(r2.verdict_for(1) == RunVerdict::ViolationFound);

    const FaultedCfg ok = testing::faulted("void main() { assert(true); }");
    for (int b = 0; b <= 2; ++b) {
      o.budget = b;
      CHECK(enumerate_verdict(ok, o).verdict == RunVerdict::NoViolation);
    }
  }

  TEST_CASE("pattern cap makes the verdict inconclusive")
  {
    const FaultedCfg f = testing::faulted(testing::fixture("loop.fdsl"));
    OracleOptions o;
    o.input_bound = 4;
    o.budget = 2;
    o.pattern_cap = 3;
    const OracleResult r = enumerate_verdict(f, o);
    CHECK(r.cap_hit);
    CHECK(r.verdict != RunVerdict::NoViolation);
  }

  TEST_CASE("truncation makes the verdict inconclusive")
  {
    const FaultedCfg f = testing::faulted("void main(int x) { loop (x == x) { } assert(x != x); }");
    OracleOptions o;
    o.input_bound = 1;
    o.budget = 0;
    o.step_limit = 40;
    CHECK(enumerate_verdict(f, o).verdict == RunVerdict::Inconclusive);
  }

  TEST_CASE("replay")
  {
    const FaultedCfg f = testing::faulted(testing::fixture("running_example.fdsl"));
    Witness w{{{"x", Int(1)}}, {{2, 1, 2}}};
    CHECK(replay(f, w, 1).kind == OutcomeKind::Bad);

    Witness tampered = w;
    tampered.activations.clear();
    try {
      replay(f, tampered, 1);
      FAIL("tampered witness replayed");
    } catch (const ReplayMismatch& e) {
      CHECK(e.outcome().kind == OutcomeKind::Halt);
    }

    Witness greedy{{{"x", Int(0)}}, {{1, 1, 1}, {2, 1, 2}}};
    CHECK_THROWS_AS(replay(f, greedy, 1), WitnessRejected);
    CHECK(replay(f, greedy, 2).kind == OutcomeKind::Bad);
  }
}
