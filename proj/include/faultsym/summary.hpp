#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "faultsym/cfg.hpp"
#include "faultsym/term.hpp"

namespace faultsym {

enum class EventKind { Assume, Assign, Nop };
enum class AssumeMeta { Program, AssertGuard, FaultOn, FaultOff, DivGuard };

const char* meta_name(AssumeMeta m);

/// One step of an execution trace. Assume formulas and assignment
/// right-hand sides are over program variables (before memory is applied);
/// fault-flag assumes mention the dynamic flag instance.
struct Event {
  Location loc;
  EventKind kind = EventKind::Nop;
  AssumeMeta meta = AssumeMeta::Program;
  Term formula;       // Assume
  std::string var;    // Assign
  Term expr;          // Assign
  int budget_left = 0;  // budget minus fault count when the event fired
  int visit = 0;        // events at the same arrival at `loc` share this
  int target = 0;       // FaultOn / FaultOff
  int occ = 0;
};

Term wp_step(const Term& phi, const Event& e);

/// Canonical name of the j-th future occurrence of target t: `F<t>@<j>`.
std::string canonical_flag(int target, int j);
/// Parses `bFT<t>#<k>`.
std::optional<std::pair<int, int>> parse_dynamic_flag(const std::string& name);
/// Parses `F<t>@<j>`.
std::optional<std::pair<int, int>> parse_canonical_flag(const std::string& name);

/// Renames each dynamic flag `bFT<t>#<k>` to `F<t>@<k - occ[t]>`, where
/// occ[t] is the number of executions of target t before the location.
/// Throws std::logic_error if a flag from before the location appears.
Term canonicalize_flags(const Term& phi, const std::vector<int>& occ);
/// Inverse of canonicalize_flags for a state with occurrence counts `occ`.
Term instantiate_flags(const Term& phi, const std::vector<int>& occ);

/// WP[l] and Omega[l] per location.
class SummaryStore {
 public:
  struct Disjunct {
    Term formula;
    std::unordered_set<Term, TermHash> conjuncts;
    std::size_t size = 0;
  };

  struct Entry {
    std::vector<Disjunct> parts;  // top-level disjuncts of wp
    Term wp = fls();
    std::size_t size = 1;
    int omega = 0;
  };

  struct Stats {
    std::uint64_t updates = 0;        // update_suffix_summary calls
    std::uint64_t contributions = 0;  // per-location disjunct additions
    std::uint64_t dropped = 0;        // contributions refused by the size cap
  };

  /// Summaries larger than this many tree nodes are not stored. Dropping a
  /// disjunct only makes pruning rarer.
  explicit SummaryStore(std::size_t max_nodes = 5000) : max_nodes_(max_nodes) {}
  std::size_t max_nodes() const { return max_nodes_; }

  /// WP[l] := WP[l] or phi; Omega[l] := min(Omega[l], budget_left).
  /// Disjuncts are merged at the top level: duplicates and disjuncts
  /// implied by another one (by conjunct inclusion) are dropped, and a
  /// complementary pair turns WP[l] into true. Returns false (and changes
  /// nothing) when the result would exceed the size cap.
  bool contribute(const Location& l, const Term& phi, int budget_left);
  const Entry* find(const Location& l) const;
  const std::map<Location, Entry>& entries() const { return entries_; }
  Stats& stats() { return stats_; }
  const Stats& stats() const { return stats_; }

  /// One `LOC <loc>: omega=<k>; wp=<formula>` line per location.
  std::string dump() const;

 private:
  std::map<Location, Entry> entries_;
  Stats stats_;
  std::size_t max_nodes_;
};

/// Walks `events` (in execution order) backward from `seed`, contributing
/// the wp at each visited location. `occ_end` holds the occurrence counts
/// after the last event. The walk stops early once the formula outgrows the
/// store's size cap.
void update_suffix_summary(const std::vector<const Event*>& events, const Term& seed,
                           std::vector<int> occ_end, SummaryStore& store);

}  // namespace faultsym
