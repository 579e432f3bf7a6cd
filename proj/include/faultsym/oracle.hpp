#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "faultsym/faultmodel.hpp"

namespace faultsym {

/// (target id, occurrence index) pairs to skip.
using FaultPattern = std::set<std::pair<int, int>>;

enum class OutcomeKind { Halt, Bad, Div0, Truncated };

const char* outcome_name(OutcomeKind k);

struct Outcome {
  OutcomeKind kind = OutcomeKind::Halt;
  Model store;                          // final values of every program variable
  std::vector<Activation> activations;  // skips actually taken
  /// Every fault-guard execution, in order, as (target, occurrence).
  std::vector<std::pair<int, int>> guard_log;
  std::uint64_t steps = 0;  // assignments and terminators executed
};

/// Concrete execution of the faulted CFG. A guard skips iff its dynamic
/// occurrence is in `pattern`.
Outcome interpret(const FaultedCfg& fcfg, const Model& input, const FaultPattern& pattern,
                  std::uint64_t step_limit);
/// Concrete execution of an unfaulted CFG.
Outcome interpret(const Cfg& cfg, const Model& input, std::uint64_t step_limit);

/// Direct interpretation of the checked source program, independent of
/// lowering. Only the outcome kind is comparable with the CFG interpreter.
OutcomeKind interpret_ast(const CheckedAst& ast, const Model& input, std::uint64_t step_limit);

struct OracleOptions {
  int input_bound = 4;
  int budget = 1;
  std::uint64_t step_limit = 500;
  std::uint64_t pattern_cap = 2'000'000;  // executions over all inputs
};

struct OracleResult {
  RunVerdict verdict = RunVerdict::NoViolation;
  /// One minimal witness per violating input, sorted.
  std::vector<Witness> witnesses;
  /// Fewest activations of any violation found (if any).
  std::optional<int> min_faults;
  /// Smallest pattern size at which exploration was incomplete (truncation
  /// or the pattern cap), if any.
  std::optional<int> incomplete_at;
  std::uint64_t executions = 0;
  bool cap_hit = false;

  /// Verdict for a smaller budget, derived from the same enumeration.
  RunVerdict verdict_for(int budget) const;
};

OracleResult enumerate_verdict(const FaultedCfg& fcfg, const OracleOptions& opts);

/// Every assignment of the inputs over [-bound, bound] (Bool: false, true),
/// in lexicographic order.
std::vector<Model> input_grid(const std::vector<Var>& inputs, int bound);

class ReplayMismatch : public std::runtime_error {
 public:
  ReplayMismatch(const std::string& msg, Outcome outcome)
      : std::runtime_error(msg), outcome_(std::move(outcome))
  {
  }
  const Outcome& outcome() const { return outcome_; }

 private:
  Outcome outcome_;
};

class WitnessRejected : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Re-executes a witness. Throws WitnessRejected when it uses more than
/// `budget` activations and ReplayMismatch unless the outcome is Bad.
Outcome replay(const FaultedCfg& fcfg, const Witness& w, int budget, std::uint64_t step_limit = 100000);

}  // namespace faultsym
