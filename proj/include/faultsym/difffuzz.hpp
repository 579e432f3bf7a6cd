#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "faultsym/engine.hpp"
#include "faultsym/generator.hpp"
#include "faultsym/oracle.hpp"

namespace faultsym {

struct FuzzOptions {
  int cases = 100;
  std::uint64_t seed = 0;
  int input_bound = 4;
  int max_budget = 2;
  std::uint64_t step_limit = 500;     // oracle
  std::uint64_t max_steps = 10000;    // engine, per path
  GenOptions gen;
  /// Fraction of multi-target cases where fc+wp must explore strictly fewer
  /// complete paths than fc at the largest budget.
  double effectiveness_threshold = 0.30;
  bool minimize = true;
};

inline constexpr PruningMode kAllModes[] = {PruningMode::None, PruningMode::Fc, PruningMode::FcWp};

struct ModeRun {
  PruningMode mode;
  int budget;
  RunVerdict verdict;
  Counters counters;
  std::size_t max_witness_faults = 0;
};

struct CaseResult {
  int index = 0;
  std::uint64_t seed = 0;
  std::string source;
  std::size_t targets = 0;
  std::vector<RunVerdict> oracle;  // by budget
  std::vector<ModeRun> runs;
  /// Every check that failed, in a readable form. Empty means agreement.
  std::vector<std::string> problems;
  bool fault_free_ok = true;
  bool budget_ok = true;
  bool monotone_ok = true;

  const ModeRun* find(PruningMode m, int budget) const;
};

struct FuzzSummary {
  int agreements = 0;
  int disagreements = 0;
  int budget_violations = 0;
  int fault_free_failures = 0;
  int monotonicity_failures = 0;
  int effectiveness_eligible = 0;  // cases with >= 2 fault targets
  int effectiveness_strict = 0;
  bool effectiveness_ok = false;
  std::uint64_t oracle_executions = 0;
  double wall_ms = 0;
  std::vector<CaseResult> cases;
  /// Minimized text of the first disagreeing program.
  std::optional<std::string> minimized;

  bool ok() const
  {
    return disagreements == 0 && budget_violations == 0 && fault_free_failures == 0 &&
           monotonicity_failures == 0 && effectiveness_ok;
  }
};

/// Runs every engine mode for budgets 0..max_budget and the oracle on one
/// program and cross-checks them.
CaseResult check_case(const std::string& source, const FuzzOptions& opts, Solver& solver);

/// Generates `opts.cases` programs and checks each. Progress lines go to
/// `log` when given.
FuzzSummary diff_fuzz(const FuzzOptions& opts, Solver& solver, std::ostream* log = nullptr);

/// Greedy statement deletion (and if-flattening) while `still_failing`
/// holds for the printed program.
std::string minimize_program(const std::string& source,
                             const std::function<bool(const std::string&)>& still_failing);

}  // namespace faultsym
