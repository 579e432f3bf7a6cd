#include <doctest.h>

#include "faultsym/generator.hpp"
#include "faultsym/oracle.hpp"
#include "helpers.hpp"

using namespace faultsym;

namespace {

const std::string& running_example()
{
  static const std::string src = testing::fixture("running_example.fdsl");
  return src;
}

RunReport run_with(const std::string& src, EngineConfig c, Solver& solver, SummaryStore* store = nullptr)
{
  return explore(testing::faulted(src), c, solver, store);
}

}  // namespace

TEST_SUITE("engine")
{
  TEST_CASE("pruning mode names")
  {
    for (PruningMode m : {PruningMode::None, PruningMode::Fc, PruningMode::FcWp}) {
      CHECK(parse_pruning(pruning_name(m)) == m);
    }
    CHECK_FALSE(parse_pruning("wp"));
  }

  TEST_CASE("running example path counts")
  {
    EnumeratingSolver solver;
    const RunReport fc0 = testing::run(running_example(), 0, PruningMode::Fc, solver);
    CHECK(fc0.verdict == RunVerdict::NoViolation);
    CHECK(fc0.counters.complete_paths == 2);
    CHECK(fc0.counters.pruned_paths == 0);

    const RunReport fc2 = testing::run(running_example(), 2, PruningMode::Fc, solver);
    CHECK(fc2.verdict == RunVerdict::ViolationFound);
    CHECK(fc2.counters.complete_paths == 5);
    CHECK(fc2.counters.violating_paths == 2);
    CHECK(fc2.counters.max_fault_count == 2);

    const RunReport wp2 = testing::run(running_example(), 2, PruningMode::FcWp, solver);
    CHECK(wp2.verdict == RunVerdict::ViolationFound);
    CHECK(wp2.counters.complete_paths == 2);
    CHECK(wp2.counters.pruned_paths == 3);
    REQUIRE(wp2.prune_log.size() == 3);
    CHECK(wp2.prune_log[0].loc == Location::term(4));
    CHECK(wp2.prune_log[0].path == 2);
    CHECK(wp2.prune_log[0].reason == "wp");
    for (const auto& p : wp2.prune_log) {
      CHECK(p.loc == Location::term(4));
    }
  }

  TEST_CASE("witnesses replay")
  {
    EnumeratingSolver solver;
    const FaultedCfg f = testing::faulted(running_example());
    for (PruningMode m : {PruningMode::None, PruningMode::Fc, PruningMode::FcWp}) {
      for (int b = 1; b <= 2; ++b) {
        EngineConfig c;
        c.budget = b;
        c.pruning = m;
        const RunReport r = explore(f, c, solver);
        REQUIRE_FALSE(r.witnesses.empty());
        for (const auto& w : r.witnesses) {
          CHECK(w.activations.size() <= static_cast<std::size_t>(b));
          const Outcome o = replay(f, w, b);
          CHECK(std::get<Int>(o.store.at("m")) == std::get<Int>(o.store.at("n")));
        }
      }
    }
    EngineConfig c;
    c.budget = 1;
    const RunReport r = explore(f, c, solver);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(std::get<Int>(r.witnesses[0].input.at("x")) != 0);
    REQUIRE(r.witnesses[0].activations.size() == 1);
    CHECK(r.witnesses[0].activations[0].target == 2);
    CHECK(r.witnesses[0].activations[0].block == 2);
  }

  TEST_CASE("loop witnesses name the occurrence")
  {
    EnumeratingSolver solver;
    const FaultedCfg f = testing::faulted(testing::fixture("loop.fdsl"));
    EngineConfig c;
    c.budget = 1;
    c.pruning = PruningMode::Fc;
    const RunReport r = explore(f, c, solver);
    CHECK(r.verdict == RunVerdict::ViolationFound);
    std::set<std::pair<int, int>> seen;
    for (const auto& w : r.witnesses) {
      REQUIRE(w.activations.size() == 1);
      seen.insert({w.activations[0].target, w.activations[0].occ});
      CHECK(replay(f, w, 1).kind == OutcomeKind::Bad);
    }
    CHECK(seen.count({1, 3}) == 1);
    CHECK(seen.count({2, 1}) == 1);

    c.budget = 0;
    CHECK(explore(f, c, solver).verdict == RunVerdict::NoViolation);
  }

  TEST_CASE("fault count never exceeds the budget")
  {
    auto owned = make_solver(SolverSpec{"auto"});
    Solver& solver = *owned;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const FaultedCfg f = testing::faulted(random_program(seed));
      for (PruningMode m : {PruningMode::None, PruningMode::Fc, PruningMode::FcWp}) {
        for (int b = 0; b <= 2; ++b) {
          EngineConfig c;
          c.budget = b;
          c.pruning = m;
          c.input_bound = 3;
          const RunReport r = explore(f, c, solver);
          CHECK(r.counters.max_fault_count <= b);
          for (const auto& w : r.witnesses) {
            CHECK(w.activations.size() <= static_cast<std::size_t>(b));
          }
        }
      }
    }
  }

  TEST_CASE("omega matters")
  {
    EnumeratingSolver solver;
    const std::string src = testing::fixture("budget_gap.fdsl");
    EngineConfig c;
    c.budget = 1;
    const RunReport safe = run_with(src, c, solver);
    CHECK(safe.verdict == RunVerdict::ViolationFound);
    REQUIRE(safe.witnesses.size() == 1);
    CHECK(std::get<Int>(safe.witnesses[0].input.at("x")) == 0);
    CHECK(safe.witnesses[0].activations[0].target == 5);

    c.use_omega = false;
    const RunReport unsafe = run_with(src, c, solver);
    CHECK(unsafe.verdict == RunVerdict::NoViolation);
    CHECK(unsafe.counters.pruned_paths > 0);
  }

  TEST_CASE("options that must not change the verdict")
  {
    auto owned = make_solver(SolverSpec{"auto"});
    Solver& solver = *owned;
    for (std::uint64_t seed = 20; seed < 28; ++seed) {
      const FaultedCfg f = testing::faulted(random_program(seed));
      EngineConfig base;
      base.budget = 2;
      base.input_bound = 3;
      const RunReport ref = explore(f, base, solver);

      EngineConfig no_prefix = base;
      no_prefix.prefix_update_on_prune = false;
      CHECK(explore(f, no_prefix, solver).verdict == ref.verdict);

      EngineConfig lazy = base;
      lazy.lazy_feasibility = true;
      CHECK(explore(f, lazy, solver).verdict == ref.verdict);

      EngineConfig trivial = base;
      trivial.skip_trivial_targets = false;
      const RunReport t = explore(f, trivial, solver);
      CHECK(t.verdict == ref.verdict);
      CHECK(t.counters.complete_paths == ref.counters.complete_paths);
    }
  }

  TEST_CASE("division by zero ends the path")
  {
    EnumeratingSolver solver;
    const RunReport r =
        testing::run("void main(int x) { int y = 10 / x; assert(y != 5); }", 0, PruningMode::Fc, solver);
    CHECK(r.counters.div0_paths == 1);
    CHECK(r.verdict == RunVerdict::ViolationFound);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(std::get<Int>(r.witnesses[0].input.at("x")) == 2);
  }

  TEST_CASE("step limit makes the run inconclusive")
  {
    EnumeratingSolver solver;
    EngineConfig c;
    c.budget = 0;
    c.max_steps = 30;
    const RunReport r = run_with("void main(int x) { loop (x == x) { } }", c, solver);
    CHECK(r.counters.truncated_paths == 1);
    CHECK(r.verdict == RunVerdict::Inconclusive);
  }

  TEST_CASE("stop at first and max paths")
  {
    EnumeratingSolver solver;
    EngineConfig c;
    c.budget = 2;
    c.pruning = PruningMode::Fc;
    c.stop_at_first = true;
    const RunReport first = run_with(running_example(), c, solver);
    CHECK(first.verdict == RunVerdict::ViolationFound);
    CHECK(first.witnesses.size() == 1);

    c.stop_at_first = false;
    c.max_paths = 1;
    const RunReport one = run_with(running_example(), c, solver);
    CHECK(one.verdict == RunVerdict::Inconclusive);
    CHECK(one.counters.complete_paths == 1);
  }

  TEST_CASE("summaries after the first path")
  {
    EnumeratingSolver solver;
    EngineConfig c;
    c.budget = 2;
    c.max_paths = 1;
    SummaryStore s;
    run_with(running_example(), c, solver, &s);
    CHECK(s.find(Location::term(4))->wp.to_string() == "(m != n)");
    CHECK(s.find(Location::body(3, 0))->wp.to_string() == "(m != (n + 2))");
    CHECK(s.find(Location::term(1))->wp.to_string() == "((m != (n + 2)) && (x == 0))");
    CHECK(s.find(Location::guard(1))->wp.to_string() == "((m != (n + 2)) && (x == 0) && !F1@1)");
  }

  TEST_CASE("invalid configuration")
  {
    EnumeratingSolver solver;
    const FaultedCfg f = testing::faulted(running_example());
    EngineConfig c;
    c.budget = -1;
    CHECK_THROWS_AS(explore(f, c, solver), std::invalid_argument);
  }

  TEST_CASE("external solver agrees")
  {
    auto ext = testing::external_solver();
    if (!ext) {
      MESSAGE("no SMT-LIB2 solver installed");
      return;
    }
    const RunReport r = testing::run(running_example(), 2, PruningMode::FcWp, *ext);
    CHECK(r.verdict == RunVerdict::ViolationFound);
    CHECK(r.counters.complete_paths == 2);
    CHECK(r.counters.pruned_paths == 3);
    CHECK_FALSE(r.unknown_feasibility);
    const RunReport safe = testing::run(running_example(), 0, PruningMode::FcWp, *ext);
    CHECK(safe.verdict == RunVerdict::NoViolation);
  }
}
