// Acceptance checks 1-9. One PASS/FAIL line each; exit status 1 on any FAIL.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "faultsym/difffuzz.hpp"
#include "faultsym/engine.hpp"
#include "faultsym/frontend.hpp"
#include "faultsym/oracle.hpp"

using namespace faultsym;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail)
{
  std::cout << (ok ? "PASS " : "FAIL ") << n << ' ' << what << ": " << detail << std::endl;
  failures += ok ? 0 : 1;
}

std::string fixture(const std::string& name)
{
  std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FaultedCfg faulted(const std::string& src) { return transform(lower(parse_and_validate(src))); }

RunReport run(const FaultedCfg& f, int budget, PruningMode mode, Solver& solver, SummaryStore* store = nullptr,
              bool omega = true, std::optional<std::uint64_t> max_paths = std::nullopt)
{
  EngineConfig c;
  c.budget = budget;
  c.pruning = mode;
  c.use_omega = omega;
  c.max_paths = max_paths;
  return explore(f, c, solver, store);
}

double ms_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void path_counts(const FaultedCfg& f)
{
  EnumeratingSolver solver;
  const auto t0 = std::chrono::steady_clock::now();
  const RunReport a = run(f, 0, PruningMode::Fc, solver);
  const RunReport b = run(f, 2, PruningMode::Fc, solver);
  const RunReport c = run(f, 2, PruningMode::FcWp, solver);
  const double ms = ms_since(t0);
  std::ostringstream d;
  d << "beta=0 complete=" << a.counters.complete_paths << ' ' << verdict_name(a.verdict)
    << "; beta=2 fc complete=" << b.counters.complete_paths << "; beta=2 fc+wp complete="
    << c.counters.complete_paths << " pruned=" << c.counters.pruned_paths << "; " << ms << " ms";
  report(1, a.counters.complete_paths == 2 && a.verdict == RunVerdict::NoViolation &&
                b.counters.complete_paths == 5 && c.counters.complete_paths == 2 &&
                c.counters.pruned_paths == 3 && ms < 1000,
         "running-example path counts", d.str());
}

void witness(const FaultedCfg& f)
{
  EnumeratingSolver solver;
  const RunReport r = run(f, 1, PruningMode::FcWp, solver);
  bool ok = r.verdict == RunVerdict::ViolationFound && !r.witnesses.empty();
  std::ostringstream d;
  d << verdict_name(r.verdict);
  for (const auto& w : r.witnesses) {
    try {
      const Outcome o = replay(f, w, 1);
      const Int m = std::get<Int>(o.store.at("m"));
      const Int n = std::get<Int>(o.store.at("n"));
      const bool via_jump = w.activations.size() == 1 && w.activations[0].target == 2 &&
                            f.base.block(w.activations[0].block).term.kind == TermKind::Jump;
      d << "; x=" << value_to_string(w.input.at("x")) << " m=" << m << " n=" << n
        << (via_jump ? " skipping the jump" : " other skip");
      ok = ok && m == 3 && n == 3 && via_jump;
    } catch (const std::exception& e) {
      d << "; replay failed: " << e.what();
      ok = false;
    }
  }
  report(2, ok, "violation witness", d.str());
}

void wp_goldens(const FaultedCfg& f, Solver* ext)
{
  if (ext == nullptr) {
    report(3, false, "WP goldens", "no external solver to decide equivalence");
    return;
  }
  EnumeratingSolver solver;
  SummaryStore s;
  run(f, 2, PruningMode::FcWp, solver, &s, true, 1);
  const Term m = ivar("m");
  const Term n = ivar("n");
  const Term x0 = eq(ivar("x"), ival(0));
  const Term mn2 = ne(m, add(n, ival(2)));
  const std::pair<Location, Term> want[] = {
      {Location::term(4), ne(m, n)},
      {Location::body(3, 0), mn2},
      {Location::term(1), conj({mn2, x0})},
      {Location::guard(1), conj({mn2, x0, lnot(bvar("F1@1"))})},
  };
  bool ok = true;
  std::ostringstream d;
  for (const auto& [loc, expect] : want) {
    const auto* e = s.find(loc);
    const Term got = e != nullptr ? e->wp : fls();
    const bool eqv = check_valid_implication(got, expect, *ext).status == Implication::Holds &&
                     check_valid_implication(expect, got, *ext).status == Implication::Holds;
    ok = ok && eqv;
    d << loc.to_string() << (eqv ? " ok" : " differs (" + got.to_string() + ")") << "; ";
  }
  report(3, ok, "WP goldens", d.str() + ext->describe());
}

void prune_at_assert(const FaultedCfg& f)
{
  EnumeratingSolver solver;
  const RunReport r = run(f, 2, PruningMode::FcWp, solver);
  bool ok = false;
  std::ostringstream d;
  for (const auto& p : r.prune_log) {
    if (p.path == 2) {
      ok = p.loc == Location::term(4) && p.reason == "wp" &&
           f.base.block(4).term.branch == BranchKind::AssertGuard;
      d << "path 2 pruned at " << p.loc.to_string() << " (" << p.reason << ", fc=" << p.fault_count << ")";
      break;
    }
  }
  report(4, ok, "prune at the assertion", d.str().empty() ? "path 2 was not pruned" : d.str());
}

void corpus(Solver* ext)
{
  if (ext == nullptr) {
    for (int k = 5; k <= 8; ++k) {
      report(k, false, "corpus check", "no external solver");
    }
    return;
  }
  FuzzOptions o;
  o.cases = 100;
  o.seed = 7;
  const auto t0 = std::chrono::steady_clock::now();
  const FuzzSummary s = diff_fuzz(o, *ext);
  const double sec = ms_since(t0) / 1000;

  std::ostringstream d5;
  d5 << s.cases.size() << " cases, agreements=" << s.agreements << " disagreements=" << s.disagreements << ", "
     << sec << " s, " << ext->describe();
  report(5, s.disagreements == 0 && s.cases.size() == 100 && sec < 600, "soundness differential", d5.str());

  int not_monotone = 0;
  for (const auto& c : s.cases) {
    const ModeRun* fc = c.find(PruningMode::Fc, o.max_budget);
    const ModeRun* wp = c.find(PruningMode::FcWp, o.max_budget);
    if (fc == nullptr || wp == nullptr || wp->counters.complete_paths > fc->counters.complete_paths) {
      ++not_monotone;
    }
  }
  const double frac =
      s.effectiveness_eligible > 0 ? static_cast<double>(s.effectiveness_strict) / s.effectiveness_eligible : 0;
  std::ostringstream d6;
  d6 << "strictly fewer on " << s.effectiveness_strict << '/' << s.effectiveness_eligible
     << " multi-target cases (threshold " << o.effectiveness_threshold << "), more paths on " << not_monotone;
  report(6, not_monotone == 0 && s.effectiveness_eligible > 0 && frac >= o.effectiveness_threshold,
         "pruning effectiveness", d6.str());

  int over = 0;
  std::size_t runs = 0;
  for (const auto& c : s.cases) {
    for (const auto& r : c.runs) {
      ++runs;
      if (r.counters.max_fault_count > r.budget || r.max_witness_faults > static_cast<std::size_t>(r.budget)) {
        ++over;
      }
    }
  }
  std::ostringstream d7;
  d7 << runs << " runs, " << over << " over budget, " << s.budget_violations << " flagged";
  report(7, over == 0 && s.budget_violations == 0 && runs > 0, "budget invariant", d7.str());

  std::ostringstream d8;
  d8 << s.fault_free_failures << " of " << s.cases.size() << " programs differ on [-4,4]^k";
  report(8, s.fault_free_failures == 0 && !s.cases.empty(), "fault-free equivalence", d8.str());
}

void omega_regression()
{
  const FaultedCfg f = faulted(fixture("budget_gap.fdsl"));
  EnumeratingSolver solver;
  const RunReport safe = run(f, 1, PruningMode::FcWp, solver);
  const RunReport unsafe = run(f, 1, PruningMode::FcWp, solver, nullptr, false);
  OracleOptions o;
  o.budget = 1;
  const OracleResult oracle = enumerate_verdict(f, o);
  std::ostringstream d;
  d << "oracle " << verdict_name(oracle.verdict) << "; default " << verdict_name(safe.verdict)
    << "; without omega " << verdict_name(unsafe.verdict);
  report(9, oracle.verdict == RunVerdict::ViolationFound && safe.verdict == RunVerdict::ViolationFound &&
                unsafe.verdict == RunVerdict::NoViolation,
         "omega regression", d.str());
}

}  // namespace

int main()
{
  try {
    const FaultedCfg f = faulted(fixture("running_example.fdsl"));
    std::unique_ptr<Solver> ext;
    if (auto cmd = find_smtlib_solver()) {
      ext = make_solver(SolverSpec{"smtlib:" + *cmd});
    }
    path_counts(f);
    witness(f);
    wp_goldens(f, ext.get());
    prune_at_assert(f);
    corpus(ext.get());
    omega_regression();
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance aborted: " << e.what() << std::endl;
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
