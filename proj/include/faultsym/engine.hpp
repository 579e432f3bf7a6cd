#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "faultsym/faultmodel.hpp"
#include "faultsym/solver.hpp"
#include "faultsym/summary.hpp"

namespace faultsym {

enum class PruningMode { None, Fc, FcWp };

const char* pruning_name(PruningMode m);
std::optional<PruningMode> parse_pruning(const std::string& s);

struct EngineConfig {
  int budget = 1;
  PruningMode pruning = PruningMode::FcWp;
  std::uint64_t max_steps = 10000;  // events per path
  bool stop_at_first = false;
  /// Stop once this many paths have ended (completed or pruned).
  std::optional<std::uint64_t> max_paths;
  bool use_omega = true;
  bool prefix_update_on_prune = true;
  bool lazy_feasibility = false;
  bool skip_trivial_targets = true;
  /// Adds -B <= x <= B for every Int input to the initial path condition.
  std::optional<int> input_bound;
};

struct Counters {
  std::uint64_t complete_paths = 0;
  std::uint64_t violating_paths = 0;
  std::uint64_t pruned_paths = 0;
  std::uint64_t infeasible_abandoned = 0;
  std::uint64_t truncated_paths = 0;
  std::uint64_t solver_queries = 0;
  std::uint64_t saturated_forks = 0;
  std::uint64_t div0_paths = 0;
  int max_fault_count = 0;  // largest fault counter of any explored state
};

struct PruneRecord {
  Location loc;
  int fault_count = 0;
  std::string reason;  // "fc" or "wp"
  std::uint64_t path = 0;  // 1-based index among ended paths
};

struct RunReport {
  RunVerdict verdict = RunVerdict::NoViolation;
  std::vector<Witness> witnesses;
  Counters counters;
  std::vector<PruneRecord> prune_log;
  double wall_ms = 0;
  EngineConfig config;
  std::string solver;
  bool unknown_feasibility = false;
  bool unconfirmed_violation = false;
  bool stopped_early = false;
};

/// Depth-first symbolic execution of a faulted CFG.
class Engine {
 public:
  Engine(const FaultedCfg& fcfg, EngineConfig config, Solver& solver);
  ~Engine();

  RunReport run();
  const SummaryStore& summary() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper around Engine.
RunReport explore(const FaultedCfg& fcfg, const EngineConfig& config, Solver& solver,
                  SummaryStore* summary_out = nullptr);

}  // namespace faultsym
