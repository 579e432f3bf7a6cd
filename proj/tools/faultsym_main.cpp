#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "faultsym/difffuzz.hpp"
#include "faultsym/engine.hpp"
#include "faultsym/frontend.hpp"
#include "faultsym/oracle.hpp"
#include "faultsym/report.hpp"

using namespace faultsym;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitInternal = 70;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw UsageError("cannot read " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text)
{
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    throw UsageError("cannot write " + path);
  }
}

FaultedCfg load(const std::string& path, bool fault_asserts)
{
  return transform(lower(parse_and_validate(read_file(path))), FaultOptions{fault_asserts});
}

struct SolverFlags {
  std::string backend;
  int timeout_ms = 10000;
  int internal_bound = 16;

  std::unique_ptr<Solver> make() const
  {
    SolverSpec s;
    s.text = backend;
    s.timeout = std::chrono::milliseconds(timeout_ms);
    s.internal_bound = internal_bound;
    try {
      return make_solver(s);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f)
{
  cmd->add_option("--solver", f.backend, "internal | auto | smtlib:<command line>")
      ->capture_default_str();
  cmd->add_option("--solver-timeout-ms", f.timeout_ms, "Per-query timeout for external solvers")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--internal-bound", f.internal_bound, "Integer range searched by the internal solver")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Symbolic execution under an instruction-skip fault model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // transform
  std::string t_file;
  bool t_fault_asserts = false;
  bool t_plain = false;
  auto* t_cmd = app.add_subcommand("transform", "Print the faulted IR of a program");
  t_cmd->add_option("file", t_file, "Source program")->required();
  t_cmd->add_flag("--fault-asserts", t_fault_asserts, "Also make assertion guards fault targets");
  t_cmd->add_flag("--plain", t_plain, "Print the IR without fault guards");

  // run
  std::string r_file;
  EngineConfig rc;
  std::string r_pruning = "fc+wp";
  std::string r_report = "-";
  std::string r_dump_wp;
  bool r_log_prunes = false;
  bool r_unsafe_no_omega = false;
  bool r_no_prefix = false;
  bool r_fault_asserts = false;
  std::uint64_t r_max_paths = 0;
  int r_input_bound = -1;
  SolverFlags r_solver{"internal"};
  auto* r_cmd = app.add_subcommand("run", "Explore a program symbolically under the fault model");
  r_cmd->add_option("file", r_file, "Source program")->required();
  r_cmd->add_option("--budget", rc.budget, "Fault budget")->capture_default_str()->check(CLI::NonNegativeNumber);
  r_cmd->add_option("--pruning", r_pruning, "none | fc | fc+wp")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "fc", "fc+wp"}));
  r_cmd->add_option("--max-steps", rc.max_steps, "Events per path before truncation")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  r_cmd->add_option("--max-paths", r_max_paths, "Stop after this many ended paths")->check(CLI::PositiveNumber);
  r_cmd->add_flag("--stop-at-first", rc.stop_at_first, "Stop at the first confirmed violation");
  r_cmd->add_option("--report", r_report, "Report path ('-' for stdout)")->capture_default_str();
  r_cmd->add_option("--dump-wp", r_dump_wp, "Write the suffix summaries to this path");
  r_cmd->add_flag("--log-prunes", r_log_prunes, "Include the prune log in the report");
  r_cmd->add_flag("--unsafe-no-omega", r_unsafe_no_omega, "Prune without the remaining-budget check");
  r_cmd->add_flag("--no-prefix-update-on-prune", r_no_prefix, "Do not summarize prefixes of pruned paths");
  r_cmd->add_flag("--lazy-feasibility", rc.lazy_feasibility, "Check path feasibility only at path ends");
  r_cmd->add_flag("--skip-trivial-targets,!--no-skip-trivial-targets", rc.skip_trivial_targets,
                  "Elide skips that cannot change control flow")
      ->capture_default_str();
  r_cmd->add_flag("--fault-asserts", r_fault_asserts, "Also make assertion guards fault targets");
  r_cmd->add_option("--input-bound", r_input_bound, "Restrict Int inputs to [-B, B]")
      ->check(CLI::NonNegativeNumber);
  add_solver_flags(r_cmd, r_solver);

  // oracle
  std::string o_file;
  OracleOptions oo;
  bool o_fault_asserts = false;
  auto* o_cmd = app.add_subcommand("oracle", "Enumerate inputs and fault patterns concretely");
  o_cmd->add_option("file", o_file, "Source program")->required();
  o_cmd->add_option("--input-bound", oo.input_bound, "Inputs range over [-B, B]")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  o_cmd->add_option("--budget", oo.budget, "Fault budget")->capture_default_str()->check(CLI::NonNegativeNumber);
  o_cmd->add_option("--step-limit", oo.step_limit, "Steps per execution")->capture_default_str();
  o_cmd->add_option("--pattern-cap", oo.pattern_cap, "Total executions before giving up")->capture_default_str();
  o_cmd->add_flag("--fault-asserts", o_fault_asserts, "Also make assertion guards fault targets");

  // diff-fuzz
  FuzzOptions fo;
  SolverFlags f_solver{"auto"};
  bool f_no_minimize = false;
  bool f_verbose = false;
  auto* f_cmd = app.add_subcommand("diff-fuzz", "Compare engine and oracle on random programs");
  f_cmd->add_option("--n", fo.cases, "Number of programs")->capture_default_str()->check(CLI::NonNegativeNumber);
  f_cmd->add_option("--seed", fo.seed, "Corpus seed")->capture_default_str();
  f_cmd->add_option("--input-bound", fo.input_bound, "Inputs range over [-B, B]")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  f_cmd->add_option("--max-budget", fo.max_budget, "Budgets 0..N are checked")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  f_cmd->add_option("--step-limit", fo.step_limit, "Oracle steps per execution")->capture_default_str();
  f_cmd->add_option("--size", fo.gen.size_budget, "Generator size budget")->capture_default_str();
  f_cmd->add_flag("--allow-div", fo.gen.allow_div, "Let the generator emit division");
  f_cmd->add_option("--threshold", fo.effectiveness_threshold,
                    "Required share of multi-target cases where fc+wp explores fewer complete paths")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  f_cmd->add_flag("--no-minimize", f_no_minimize, "Do not minimize the first failing program");
  f_cmd->add_flag("-v,--verbose", f_verbose, "Print one line per case");
  add_solver_flags(f_cmd, f_solver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*t_cmd) {
      const FaultedCfg f = load(t_file, t_fault_asserts);
      std::cout << (t_plain ? print_ir(f.base) : print_ir(f));
      return 0;
    }
    if (*r_cmd) {
      rc.pruning = *parse_pruning(r_pruning);
      rc.use_omega = !r_unsafe_no_omega;
      rc.prefix_update_on_prune = !r_no_prefix;
      if (r_max_paths > 0) {
        rc.max_paths = r_max_paths;
      }
      if (r_input_bound >= 0) {
        rc.input_bound = r_input_bound;
      }
      const FaultedCfg f = load(r_file, r_fault_asserts);
      auto solver = r_solver.make();
      SummaryStore store;
      const RunReport rep = explore(f, rc, *solver, &store);
      write_text(r_report, report_json(rep, r_log_prunes).dump(2) + "\n");
      if (!r_dump_wp.empty()) {
        write_text(r_dump_wp, store.dump());
      }
      return verdict_exit_code(rep.verdict);
    }
    if (*o_cmd) {
      const FaultedCfg f = load(o_file, o_fault_asserts);
      const OracleResult res = enumerate_verdict(f, oo);
      std::cout << oracle_json(res, oo).dump(2) << "\n";
      return verdict_exit_code(res.verdict);
    }
    if (*f_cmd) {
      fo.minimize = !f_no_minimize;
      auto solver = f_solver.make();
      const FuzzSummary sum = diff_fuzz(fo, *solver, f_verbose ? &std::cerr : nullptr);
      for (const auto& c : sum.cases) {
        for (const auto& p : c.problems) {
          std::cout << "case " << c.index << " (seed " << c.seed << "): " << p << "\n";
        }
      }
      if (sum.minimized) {
        std::cout << "minimized failing program:\n" << *sum.minimized;
      }
      std::cout << "solver=" << solver->describe() << "\n";
      std::cout << "effectiveness=" << sum.effectiveness_strict << "/" << sum.effectiveness_eligible
                << " (threshold " << fo.effectiveness_threshold << ")\n";
      std::cout << "agreements=" << sum.agreements << " disagreements=" << sum.disagreements << "\n";
      return sum.ok() ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FrontendError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
