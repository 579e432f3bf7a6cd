#include <doctest.h>

#include "faultsym/report.hpp"
#include "helpers.hpp"

using namespace faultsym;
using nlohmann::json;

TEST_SUITE("report")
{
  TEST_CASE("report keys")
  {
    EnumeratingSolver solver;
    const RunReport r = testing::run(testing::fixture("running_example.fdsl"), 1, PruningMode::FcWp, solver);
    const json j = report_json(r, true);
    for (const char* k : {"verdict", "witnesses", "counters", "config", "timing_ms", "tool_version", "flags",
                          "prune_log"}) {
      CHECK_MESSAGE(j.contains(k), k);
    }
    CHECK_FALSE(report_json(r).contains("prune_log"));
    CHECK(j["verdict"] == "ViolationFound");
    CHECK(j["config"]["pruning"] == "fc+wp");
    CHECK(j["config"]["budget"] == 1);
    CHECK(j["witnesses"][0]["activations"][0]["target"] == 2);
    CHECK(j["witnesses"][0]["activations"][0]["occurrence"] == 1);
    CHECK(j["witnesses"][0]["activations"][0]["block"] == "BB2");
  }

  TEST_CASE("round trip")
  {
    EnumeratingSolver solver;
    for (int b = 0; b <= 2; ++b) {
      const RunReport r = testing::run(testing::fixture("running_example.fdsl"), b, PruningMode::Fc, solver);
      const json j = report_json(r);
      const RunReport back = report_from_json(json::parse(j.dump()));
      CHECK(back.verdict == r.verdict);
      CHECK(back.witnesses.size() == r.witnesses.size());
      CHECK(back.counters.complete_paths == r.counters.complete_paths);
      CHECK(back.counters.solver_queries == r.counters.solver_queries);
      CHECK(report_json(back) == j);
    }
  }

  TEST_CASE("large values")
  {
    const Int big = Int(1) << 80;
    CHECK(value_json(Value(big)) == big.str());
    CHECK(value_json(Value(Int(-7))) == -7);
    CHECK(value_json(Value(true)) == true);
    RunReport r;
    r.witnesses.push_back({{{"x", big}}, {}});
    const RunReport back = report_from_json(report_json(r));
    CHECK(std::get<Int>(back.witnesses[0].input.at("x")) == big);
  }

  TEST_CASE("deterministic apart from timing")
  {
    EnumeratingSolver s1;
    EnumeratingSolver s2;
    const std::string src = testing::fixture("running_example.fdsl");
    json a = report_json(testing::run(src, 2, PruningMode::FcWp, s1), true);
    json b = report_json(testing::run(src, 2, PruningMode::FcWp, s2), true);
    a.erase("timing_ms");
    b.erase("timing_ms");
    CHECK(a == b);
  }

  TEST_CASE("malformed reports")
  {
    CHECK_THROWS_AS(report_from_json(json::object()), ReportFormatError);
    json j = report_json(RunReport{});
    j["verdict"] = "Maybe";
    CHECK_THROWS_AS(report_from_json(j), ReportFormatError);
    j = report_json(RunReport{});
    j["config"]["pruning"] = "all";
    CHECK_THROWS_AS(report_from_json(j), ReportFormatError);
  }

  TEST_CASE("oracle report")
  {
    OracleOptions o;
    o.input_bound = 2;
    const OracleResult r = enumerate_verdict(testing::faulted(testing::fixture("running_example.fdsl")), o);
    const json j = oracle_json(r, o);
    CHECK(j["verdict"] == "ViolationFound");
    CHECK(j["min_faults"] == 1);
    CHECK(j["witnesses"].size() == 4);
  }
}
