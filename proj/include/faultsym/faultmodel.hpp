#pragma once

#include <string>
#include <vector>

#include "faultsym/cfg.hpp"

namespace faultsym {

struct FaultTarget {
  int id = 0;  // dense from 1, layout order
  int block = 0;
  Target skip_dest = kEnd;
  /// True when skipping leads where the branch itself always goes.
  bool trivial = false;

  std::string flag_name() const { return "bFT" + std::to_string(id); }
  /// Flag instance for the occ-th dynamic execution of this target.
  std::string flag_instance(int occ) const { return flag_name() + "#" + std::to_string(occ); }
};

struct FaultOptions {
  /// Also instrument assertion guards.
  bool fault_asserts = false;
};

/// Fault-annotated CFG. The guard itself is realized by the engine and the
/// oracle; `target_of_block` says which terminators carry one.
struct FaultedCfg {
  Cfg base;
  std::vector<FaultTarget> targets;
  std::vector<int> target_of_block;  // indexed by block id; 0 = not a target

  /// Target id for a block, or 0.
  int target_at(int block) const
  {
    return block >= 0 && block < static_cast<int>(target_of_block.size())
               ? target_of_block[static_cast<std::size_t>(block)]
               : 0;
  }
  const FaultTarget& target(int id) const { return targets.at(static_cast<std::size_t>(id - 1)); }
};

/// One skipped dynamic execution: the occ-th execution of target `target`.
struct Activation {
  int target = 0;
  int occ = 0;
  int block = 0;

  bool operator==(const Activation& o) const { return target == o.target && occ == o.occ; }
  bool operator<(const Activation& o) const
  {
    return target != o.target ? target < o.target : occ < o.occ;
  }
};

/// Concrete input plus fault activations that reach the bad location.
struct Witness {
  Model input;
  std::vector<Activation> activations;  // in execution order
};

enum class RunVerdict { NoViolation, ViolationFound, Inconclusive };

const char* verdict_name(RunVerdict v);
/// Exit status for a verdict: 0, 1 and 2 respectively.
int verdict_exit_code(RunVerdict v);

std::vector<FaultTarget> enumerate_fault_targets(const Cfg& cfg, const FaultOptions& opts = {});
FaultedCfg transform(const Cfg& cfg, const FaultOptions& opts = {});

/// IR with a `guard bFT<k> skip-> <L>` line before each faultable terminator.
std::string print_ir(const FaultedCfg& fcfg);

}  // namespace faultsym
