#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sys/wait.h>

#include "helpers.hpp"

namespace {

int run_cli(const std::string& args, const std::string& out = "/dev/null")
{
  const std::string cmd = std::string("\"") + FAULTSYM_BIN + "\" " + args + " >" + out + " 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string tmp_file(const std::string& name)
{
  return (std::filesystem::temp_directory_path() / ("faultsym_cli_" + name)).string();
}

}  // namespace

TEST_SUITE("cli")
{
  TEST_CASE("run exit codes follow the verdict")
  {
    const std::string fx = testing::fixture_path("running_example.fdsl");
    CHECK(run_cli("run " + fx + " --budget 1") == 1);
    CHECK(run_cli("run " + fx + " --budget 0") == 0);
    CHECK(run_cli("run " + fx + " --budget 2 --max-paths 1") == 2);
    CHECK(run_cli("run " + fx + " --budget 1 --pruning none") == 1);
  }

  TEST_CASE("usage and input errors")
  {
    const std::string fx = testing::fixture_path("running_example.fdsl");
    CHECK(run_cli("run " + fx + " --no-such-flag") == 64);
    CHECK(run_cli("run " + fx + " --pruning sometimes") == 64);
    CHECK(run_cli("frobnicate") == 64);
    const std::string bad = tmp_file("bad.fdsl");
    {
      std::ofstream(bad) << "void main( { }\n";
    }
    CHECK(run_cli("run " + bad) == 65);
    CHECK(run_cli("transform " + bad) == 65);
    std::filesystem::remove(bad);
  }

  TEST_CASE("transform prints IR")
  {
    const std::string out = tmp_file("ir.txt");
    CHECK(run_cli("transform " + testing::fixture_path("running_example.fdsl"), out) == 0);
    CHECK(testing::read_text(out) ==
          testing::read_text(std::string(GOLDEN_DIR) + "/running_example.faulted.ir"));
    CHECK(run_cli("transform --plain " + testing::fixture_path("loop.fdsl"), out) == 0);
    CHECK(testing::read_text(out) == testing::read_text(std::string(GOLDEN_DIR) + "/loop.ir"));
    std::filesystem::remove(out);
  }

  TEST_CASE("report file and oracle")
  {
    const std::string rep = tmp_file("report.json");
    const std::string fx = testing::fixture_path("running_example.fdsl");
    CHECK(run_cli("run " + fx + " --budget 2 --log-prunes --report " + rep) == 1);
    const auto j = nlohmann::json::parse(testing::read_text(rep));
    CHECK(j["verdict"] == "ViolationFound");
    CHECK(j["counters"]["complete_paths"] == 2);
    CHECK(j["prune_log"][0]["location"] == "BB4.term");
    std::filesystem::remove(rep);

    CHECK(run_cli("oracle " + fx + " --input-bound 2 --budget 1") == 1);
    CHECK(run_cli("oracle " + fx + " --input-bound 2 --budget 0") == 0);
  }
}
