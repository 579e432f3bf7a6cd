#include "faultsym/difffuzz.hpp"

#include <chrono>
#include <ostream>
#include <sstream>

#include "faultsym/frontend.hpp"

namespace faultsym {

const ModeRun* CaseResult::find(PruningMode m, int budget) const
{
  for (const auto& r : runs) {
    if (r.mode == m && r.budget == budget) {
      return &r;
    }
  }
  return nullptr;
}

namespace {

std::string describe(const Model& in)
{
  std::string s;
  for (const auto& [k, v] : in) {
    s += (s.empty() ? "" : ",") + k + "=" + value_to_string(v);
  }
  return s;
}

void check_fault_free(const CheckedAst& ast, const FaultedCfg& f, const FuzzOptions& opts, CaseResult& out)
{
  for (const Model& in : input_grid(f.base.inputs(), opts.input_bound)) {
    const Outcome faulted = interpret(f, in, {}, opts.step_limit);
    const Outcome plain = interpret(f.base, in, opts.step_limit);
    const OutcomeKind direct = interpret_ast(ast, in, opts.step_limit);
    if (faulted.kind != plain.kind || faulted.store != plain.store || plain.kind != direct) {
      out.fault_free_ok = false;
      out.problems.push_back("fault-free mismatch on " + describe(in) + ": faulted=" +
                             outcome_name(faulted.kind) + " cfg=" + outcome_name(plain.kind) +
                             " source=" + outcome_name(direct));
      return;
    }
  }
}

}  // namespace

CaseResult check_case(const std::string& source, const FuzzOptions& opts, Solver& solver)
{
  CaseResult out;
  out.source = source;
  const CheckedAst ast = parse_and_validate(source);
  const FaultedCfg f = transform(lower(ast));
  out.targets = f.targets.size();

  OracleOptions oo;
  oo.input_bound = opts.input_bound;
  oo.budget = opts.max_budget;
  oo.step_limit = opts.step_limit;
  const OracleResult oracle = enumerate_verdict(f, oo);
  for (int b = 0; b <= opts.max_budget; ++b) {
    out.oracle.push_back(oracle.verdict_for(b));
  }

  for (int b = 0; b <= opts.max_budget; ++b) {
    for (PruningMode m : kAllModes) {
      EngineConfig c;
      c.budget = b;
      c.pruning = m;
      c.max_steps = opts.max_steps;
      c.input_bound = opts.input_bound;
      const RunReport rep = explore(f, c, solver);
      ModeRun run{m, b, rep.verdict, rep.counters, 0};
      const std::string tag = std::string("budget=") + std::to_string(b) + " " + pruning_name(m);

      if (rep.counters.max_fault_count > b) {
        out.budget_ok = false;
        out.problems.push_back(tag + ": state with fault count " +
                               std::to_string(rep.counters.max_fault_count));
      }
      for (const auto& w : rep.witnesses) {
        run.max_witness_faults = std::max(run.max_witness_faults, w.activations.size());
        if (static_cast<int>(w.activations.size()) > b) {
          out.budget_ok = false;
        }
        try {
          replay(f, w, b);
        } catch (const std::exception& e) {
          out.problems.push_back(tag + ": witness " + describe(w.input) + " does not replay: " + e.what());
        }
      }
      if (rep.verdict != out.oracle[static_cast<std::size_t>(b)]) {
        out.problems.push_back(tag + ": engine " + verdict_name(rep.verdict) + ", oracle " +
                               verdict_name(out.oracle[static_cast<std::size_t>(b)]));
      }
      out.runs.push_back(run);
    }
    const auto n = out.find(PruningMode::None, b)->counters.complete_paths;
    const auto fc = out.find(PruningMode::Fc, b)->counters.complete_paths;
    const auto wp = out.find(PruningMode::FcWp, b)->counters.complete_paths;
    if (!(wp <= fc && fc <= n)) {
      out.monotone_ok = false;
      out.problems.push_back("budget=" + std::to_string(b) + ": complete paths not monotone (none=" +
                             std::to_string(n) + " fc=" + std::to_string(fc) +
                             " fc+wp=" + std::to_string(wp) + ")");
    }
  }
  if (!out.budget_ok && out.problems.empty()) {
    out.problems.push_back("witness exceeds budget");
  }

  check_fault_free(ast, f, opts, out);
  return out;
}

FuzzSummary diff_fuzz(const FuzzOptions& opts, Solver& solver, std::ostream* log)
{
  const auto t0 = std::chrono::steady_clock::now();
  FuzzSummary sum;
  for (int i = 0; i < opts.cases; ++i) {
    const std::uint64_t seed = opts.seed * 1'000'003ULL + static_cast<std::uint64_t>(i);
    CaseResult c = check_case(random_program(seed, opts.gen), opts, solver);
    c.index = i;
    c.seed = seed;
    if (c.problems.empty()) {
      ++sum.agreements;
    } else {
      ++sum.disagreements;
    }
    sum.budget_violations += c.budget_ok ? 0 : 1;
    sum.fault_free_failures += c.fault_free_ok ? 0 : 1;
    sum.monotonicity_failures += c.monotone_ok ? 0 : 1;
    if (c.targets >= 2) {
      ++sum.effectiveness_eligible;
      const auto fc = c.find(PruningMode::Fc, opts.max_budget)->counters.complete_paths;
      const auto wp = c.find(PruningMode::FcWp, opts.max_budget)->counters.complete_paths;
      if (wp < fc) {
        ++sum.effectiveness_strict;
      }
    }
    if (log != nullptr) {
      *log << "case " << i << " seed=" << seed << " targets=" << c.targets << " oracle=";
      for (std::size_t b = 0; b < c.oracle.size(); ++b) {
        *log << (b ? "," : "") << verdict_name(c.oracle[b]);
      }
      *log << (c.problems.empty() ? " ok" : " FAIL") << '\n';
      for (const auto& p : c.problems) {
        *log << "  " << p << '\n';
      }
    }
    if (!c.problems.empty() && opts.minimize && !sum.minimized) {
      FuzzOptions quiet = opts;
      sum.minimized = minimize_program(c.source, [&](const std::string& text) {
        return !check_case(text, quiet, solver).problems.empty();
      });
    }
    sum.cases.push_back(std::move(c));
  }
  sum.effectiveness_ok =
      sum.effectiveness_eligible == 0 ||
      sum.effectiveness_strict >= opts.effectiveness_threshold * sum.effectiveness_eligible;
  sum.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return sum;
}

namespace {

// Applies the k-th candidate edit. Each statement offers: delete it, and for
// an if, replace it by its then block or by its else block.
class Editor {
 public:
  explicit Editor(int k) : k_(k) {}

  bool apply(Program& p)
  {
    for (auto& fn : p.functions) {
      if (walk(fn.body)) {
        return true;
      }
    }
    return false;
  }

 private:
  bool hit() { return k_-- == 0; }

  bool walk(Block& b)
  {
    for (std::size_t i = 0; i < b.size(); ++i) {
      Stmt& s = *b[i];
      if (hit()) {
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(i));
        return true;
      }
      if (s.kind == Stmt::Kind::If) {
        if (hit()) {
          return splice(b, i, s.then_block);
        }
        if (s.else_block && hit()) {
          return splice(b, i, *s.else_block);
        }
      }
      if (s.kind == Stmt::Kind::If || s.kind == Stmt::Kind::Loop) {
        if (walk(s.then_block)) {
          return true;
        }
        if (s.else_block && walk(*s.else_block)) {
          return true;
        }
      }
    }
    return false;
  }

  static bool splice(Block& b, std::size_t i, Block inner)
  {
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(i));
    b.insert(b.begin() + static_cast<std::ptrdiff_t>(i), inner.begin(), inner.end());
    return true;
  }

  int k_;
};

}  // namespace

std::string minimize_program(const std::string& source,
                             const std::function<bool(const std::string&)>& still_failing)
{
  Program cur = parse(tokenize(source));
  std::string text = source;
  int k = 0;
  for (;;) {
    Program next = clone(cur);
    if (!Editor(k).apply(next)) {
      break;
    }
    const std::string cand = print_program(next);
    bool keep = false;
    try {
      parse_and_validate(cand);
      keep = still_failing(cand);
    } catch (const std::exception&) {
      keep = false;
    }
    if (keep) {
      cur = std::move(next);
      text = cand;
    } else {
      ++k;
    }
  }
  return text;
}

}  // namespace faultsym
