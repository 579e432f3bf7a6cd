#include <doctest.h>

#include <set>
#include <sstream>

#include "faultsym/difffuzz.hpp"
#include "helpers.hpp"

using namespace faultsym;

TEST_SUITE("generator")
{
  TEST_CASE("programs are valid and distinct")
  {
    std::set<std::string> seen;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const std::string src = random_program(seed);
      CHECK_NOTHROW(parse_and_validate(src));
      seen.insert(src);
      CHECK(random_program(seed) == src);
    }
    CHECK(seen.size() == 100);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      CHECK_NOTHROW(parse_and_validate(random_program(seed, GenOptions{60, true})));
    }
  }

  TEST_CASE("check_case on the running example")
  {
    EnumeratingSolver solver;
    FuzzOptions o;
    o.input_bound = 2;
    const CaseResult c = check_case(testing::fixture("running_example.fdsl"), o, solver);
    CHECK(c.problems.empty());
    CHECK(c.targets == 2);
    CHECK(c.oracle == std::vector<RunVerdict>{RunVerdict::NoViolation, RunVerdict::ViolationFound,
                                              RunVerdict::ViolationFound});
    const ModeRun* fc = c.find(PruningMode::Fc, 2);
    const ModeRun* wp = c.find(PruningMode::FcWp, 2);
    REQUIRE(fc != nullptr);
    REQUIRE(wp != nullptr);
    CHECK(wp->counters.complete_paths < fc->counters.complete_paths);
  }

  TEST_CASE("minimizer keeps the failure")
  {
    const std::string src = testing::fixture("running_example.fdsl");
    const auto failing = [](const std::string& s) { return s.find("m - 2") != std::string::npos; };
    const std::string small = minimize_program(src, failing);
    CHECK(failing(small));
    CHECK(small.size() < src.size());
    CHECK_NOTHROW(parse_and_validate(small));
  }

  TEST_CASE("small differential run")
  {
    auto ext = testing::external_solver();
    if (!ext) {
      MESSAGE("no SMT-LIB2 solver installed");
      return;
    }
    FuzzOptions o;
    o.cases = 8;
    o.seed = 3;
    std::ostringstream log;
    const FuzzSummary s = diff_fuzz(o, *ext, &log);
    CHECK(s.disagreements == 0);
    CHECK(s.budget_violations == 0);
    CHECK(s.fault_free_failures == 0);
    CHECK(s.monotonicity_failures == 0);
    CHECK(s.cases.size() == 8);
  }
}
