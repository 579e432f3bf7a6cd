#include "faultsym/engine.hpp"

#include <chrono>
#include <stdexcept>

namespace faultsym {

const char* pruning_name(PruningMode m)
{
  switch (m) {
    case PruningMode::None:
      return "none";
    case PruningMode::Fc:
      return "fc";
    case PruningMode::FcWp:
      return "fc+wp";
  }
  return "?";
}

std::optional<PruningMode> parse_pruning(const std::string& s)
{
  if (s == "none") {
    return PruningMode::None;
  }
  if (s == "fc") {
    return PruningMode::Fc;
  }
  if (s == "fc+wp") {
    return PruningMode::FcWp;
  }
  return std::nullopt;
}

namespace {

struct TraceNode {
  Event ev;
  std::shared_ptr<const TraceNode> parent;
};
using TracePtr = std::shared_ptr<const TraceNode>;

struct PconNode {
  Term c;
  std::shared_ptr<const PconNode> parent;
};
using PconPtr = std::shared_ptr<const PconNode>;

struct State {
  Location loc;
  PconPtr pcon;
  std::shared_ptr<const VarMap> mem;
  int fc = 0;
  std::vector<int> occ;  // indexed by target id
  TracePtr trace;
  std::uint64_t steps = 0;
  int visit = 0;
  bool div0 = false;  // path ends here with a zero divisor
};

enum class Feasible { Yes, No };

}  // namespace

struct Engine::Impl {
  const FaultedCfg& f;
  const Cfg& cfg;
  EngineConfig conf;
  Solver& solver;
  SummaryStore store;
  RunReport rep;
  std::vector<State> stack;
  int visit_seq = 0;
  std::uint64_t ended = 0;
  bool stop = false;

  Impl(const FaultedCfg& fc, EngineConfig c, Solver& s) : f(fc), cfg(fc.base), conf(c), solver(s)
  {
    if (conf.budget < 0) {
      throw std::invalid_argument("fault budget must be non-negative");
    }
    if (conf.max_steps < 1) {
      throw std::invalid_argument("max steps must be at least 1");
    }
  }

  // --- helpers ---------------------------------------------------------------

  Location entry_of(Target t) const
  {
    if (t == kEnd) {
      return Location::end();
    }
    if (t == kBad) {
      return Location::bad();
    }
    return after_body(t, -1);
  }

  // Location following body index i of block b (i = -1: block entry).
  Location after_body(int b, int i) const
  {
    const auto& blk = cfg.block(b);
    if (i + 1 < static_cast<int>(blk.body.size())) {
      return Location::body(b, i + 1);
    }
    if (f.target_at(b) != 0) {
      return Location::guard(b);
    }
    return Location::term(b);
  }

  void move(State& s, const Location& l)
  {
    s.loc = l;
    s.visit = ++visit_seq;
  }

  void record(State& s, Event e)
  {
    e.loc = s.loc;
    e.visit = s.visit;
    e.budget_left = conf.budget - s.fc;
    s.trace = std::make_shared<const TraceNode>(TraceNode{std::move(e), s.trace});
    ++s.steps;
  }

  static Event assume(const Term& c, AssumeMeta meta)
  {
    Event e;
    e.kind = EventKind::Assume;
    e.meta = meta;
    e.formula = c;
    return e;
  }

  static Term pcon_of(const State& s)
  {
    std::vector<Term> cs;
    for (const PconNode* n = s.pcon.get(); n != nullptr; n = n->parent.get()) {
      cs.push_back(n->c);
    }
    return conj({cs.rbegin(), cs.rend()});
  }

  static std::vector<const Event*> events_of(const State& s)
  {
    std::vector<const Event*> out;
    for (const TraceNode* n = s.trace.get(); n != nullptr; n = n->parent.get()) {
      out.push_back(&n->ev);
    }
    return {out.rbegin(), out.rend()};
  }

  Term apply_mem(const Term& t, const State& s) const { return simplify(substitute(t, *s.mem)); }

  // Adds an already memory-applied condition to the path condition.
  Feasible add_condition(State& s, const Term& c, bool fresh_flag = false)
  {
    if (c.is_false()) {
      return Feasible::No;
    }
    if (c.is_true()) {
      return Feasible::Yes;
    }
    s.pcon = std::make_shared<const PconNode>(PconNode{c, s.pcon});
    if (fresh_flag || conf.lazy_feasibility) {
      return Feasible::Yes;
    }
    const Verdict v = solver.check_sat(pcon_of(s));
    if (is_unsat(v)) {
      return Feasible::No;
    }
    if (is_unknown(v)) {
      rep.unknown_feasibility = true;
    }
    return Feasible::Yes;
  }

  void note_push(const State& s)
  {
    if (s.fc > conf.budget) {
      throw std::logic_error("state exceeds the fault budget");
    }
    if (s.fc > rep.counters.max_fault_count) {
      rep.counters.max_fault_count = s.fc;
    }
  }

  void push_in_order(std::vector<State>& children)
  {
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      note_push(*it);
      stack.push_back(std::move(*it));
    }
  }

  void path_ended()
  {
    ++ended;
    if (conf.max_paths && ended >= *conf.max_paths) {
      stop = true;
      rep.stopped_early = true;
    }
  }

  // --- summaries and pruning -------------------------------------------------

  bool wp_mode() const { return conf.pruning == PruningMode::FcWp; }

  bool pruning_condition(const State& s, std::string& reason)
  {
    if (conf.pruning != PruningMode::None && s.fc > conf.budget) {
      reason = "fc";
      return true;
    }
    if (!wp_mode()) {
      return false;
    }
    const auto* entry = store.find(s.loc);
    if (entry == nullptr) {
      return false;
    }
    if (conf.use_omega && conf.budget - s.fc > entry->omega) {
      return false;
    }
    const Term goal = apply_mem(instantiate_flags(entry->wp, s.occ), s);
    if (check_valid_implication(pcon_of(s), goal, solver).status == Implication::Holds) {
      reason = "wp";
      return true;
    }
    return false;
  }

  void prune(const State& s, const std::string& reason)
  {
    ++rep.counters.pruned_paths;
    rep.prune_log.push_back({s.loc, s.fc, reason, ended + 1});
    if (reason == "wp" && conf.prefix_update_on_prune) {
      const auto* entry = store.find(s.loc);
      update_suffix_summary(events_of(s), instantiate_flags(entry->wp, s.occ), s.occ, store);
    }
    path_ended();
  }

  void finish(const State& s)
  {
    if (conf.lazy_feasibility && s.loc.kind != Location::Kind::Bad) {
      const Verdict v = solver.check_sat(pcon_of(s));
      if (is_unsat(v)) {
        ++rep.counters.infeasible_abandoned;
        return;
      }
      if (is_unknown(v)) {
        rep.unknown_feasibility = true;
      }
    }
    if (s.loc.kind == Location::Kind::Bad) {
      const Verdict v = solver.check_sat(pcon_of(s));
      if (is_unsat(v)) {
        ++rep.counters.infeasible_abandoned;
        return;
      }
      if (const auto* sat = std::get_if<Sat>(&v)) {
        ++rep.counters.violating_paths;
        rep.witnesses.push_back(witness(s, sat->model));
        if (conf.stop_at_first) {
          stop = true;
        }
      } else {
        rep.unconfirmed_violation = true;
      }
    }
    ++rep.counters.complete_paths;
    if (s.div0) {
      ++rep.counters.div0_paths;
    }
    if (wp_mode()) {
      update_suffix_summary(events_of(s), tru(), s.occ, store);
    }
    path_ended();
  }

  Witness witness(const State& s, const Model& m) const
  {
    Witness w;
    for (const auto& v : cfg.inputs()) {
      auto it = m.find(v.name);
      w.input[v.name] = it != m.end() ? it->second
                                      : (v.sort == Sort::Bool ? Value(false) : Value(Int(0)));
    }
    for (const auto* e : events_of(s)) {
      if (e->kind == EventKind::Assume && e->meta == AssumeMeta::FaultOn) {
        w.activations.push_back({e->target, e->occ, e->loc.block});
      }
    }
    return w;
  }

  // --- expansion -------------------------------------------------------------

  // Forks on every divisor of `t`. Returns the state in which all divisors
  // are non-zero (if feasible); zero-divisor states are appended to `div0s`.
  std::optional<State> check_divisors(State s, const Term& t, std::vector<State>& div0s)
  {
    for (const auto& d : divisors(t)) {
      const Term dm = apply_mem(d, s);
      State z = s;
      record(z, assume(eq(d, ival(0)), AssumeMeta::DivGuard));
      if (add_condition(z, simplify(eq(dm, ival(0)))) == Feasible::Yes) {
        z.div0 = true;
        div0s.push_back(std::move(z));
      } else {
        ++rep.counters.infeasible_abandoned;
      }
      record(s, assume(ne(d, ival(0)), AssumeMeta::DivGuard));
      if (add_condition(s, simplify(ne(dm, ival(0)))) == Feasible::No) {
        ++rep.counters.infeasible_abandoned;
        return std::nullopt;
      }
    }
    return s;
  }

  void expand(State s)
  {
    if (s.div0 || s.loc.kind == Location::Kind::End || s.loc.kind == Location::Kind::Bad) {
      finish(s);
      return;
    }
    if (s.steps >= conf.max_steps) {
      ++rep.counters.truncated_paths;
      return;
    }
    switch (s.loc.kind) {
      case Location::Kind::Body:
        expand_assign(std::move(s));
        return;
      case Location::Kind::Guard:
        expand_guard(std::move(s));
        return;
      case Location::Kind::Term:
        expand_term(std::move(s));
        return;
      default:
        return;
    }
  }

  void expand_assign(State s)
  {
    const int b = s.loc.block;
    const auto& a = cfg.block(b).body[static_cast<std::size_t>(s.loc.index)];
    std::vector<State> div0s;
    std::vector<State> next;
    if (auto c = check_divisors(std::move(s), a.expr, div0s)) {
      Event e;
      e.kind = EventKind::Assign;
      e.var = a.var;
      e.expr = a.expr;
      record(*c, std::move(e));
      auto mem = std::make_shared<VarMap>(*c->mem);
      (*mem)[a.var] = apply_mem(a.expr, *c);
      c->mem = std::move(mem);
      move(*c, after_body(b, c->loc.index));
      next.push_back(std::move(*c));
    }
    push_in_order(div0s);
    push_in_order(next);
  }

  void expand_guard(State s)
  {
    const int b = s.loc.block;
    const int t = f.target_at(b);
    const FaultTarget& ft = f.target(t);
    const int k = ++s.occ[static_cast<std::size_t>(t)];
    const Term flag = bvar(ft.flag_instance(k));

    std::vector<State> children;

    State off = s;
    Event eoff = assume(lnot(flag), AssumeMeta::FaultOff);
    eoff.target = t;
    eoff.occ = k;
    record(off, eoff);
    add_condition(off, lnot(flag), true);
    move(off, Location::term(b));
    children.push_back(std::move(off));

    Event eon = assume(flag, AssumeMeta::FaultOn);
    eon.target = t;
    eon.occ = k;
    if (conf.skip_trivial_targets && ft.trivial) {
      // Skipping changes nothing.
    } else if (s.fc + 1 > conf.budget) {
      ++rep.counters.saturated_forks;
      if (conf.pruning == PruningMode::None) {
        ++rep.counters.infeasible_abandoned;
      }
      if (wp_mode()) {
        // Nothing past this skip is reachable within the budget: summarize
        // the prefix with the skip as fully explored.
        State sat = s;
        record(sat, eon);
        update_suffix_summary(events_of(sat), tru(), sat.occ, store);
      }
    } else {
      State on = s;
      record(on, eon);
      ++on.fc;
      add_condition(on, flag, true);
      move(on, entry_of(ft.skip_dest));
      children.push_back(std::move(on));
    }
    push_in_order(children);
  }

  void expand_term(State s)
  {
    const int b = s.loc.block;
    const Terminator& term = cfg.block(b).term;

    if (term.kind == TermKind::CondJump) {
      std::string reason;
      if (pruning_condition(s, reason)) {
        prune(s, reason);
        return;
      }
    }

    std::vector<State> div0s;
    std::vector<State> next;
    std::optional<State> c =
        term.kind == TermKind::CondJump || term.kind == TermKind::Fallthrough
            ? check_divisors(std::move(s), term.cond, div0s)
            : std::optional<State>(std::move(s));
    if (c) {
      switch (term.kind) {
        case TermKind::CondJump: {
          const AssumeMeta meta =
              term.branch == BranchKind::AssertGuard ? AssumeMeta::AssertGuard : AssumeMeta::Program;
          const Term cm = apply_mem(term.cond, *c);
          State taken = *c;
          record(taken, assume(term.cond, meta));
          if (add_condition(taken, cm) == Feasible::Yes) {
            move(taken, entry_of(term.target));
            next.push_back(std::move(taken));
          } else {
            ++rep.counters.infeasible_abandoned;
          }
          State fall = std::move(*c);
          record(fall, assume(negate(term.cond), meta));
          if (add_condition(fall, negate(cm)) == Feasible::Yes) {
            move(fall, entry_of(layout_next(cfg, b)));
            next.push_back(std::move(fall));
          } else {
            ++rep.counters.infeasible_abandoned;
          }
          break;
        }
        case TermKind::Jump:
        case TermKind::Fallthrough:
          record(*c, Event{});
          move(*c, entry_of(term.target));
          next.push_back(std::move(*c));
          break;
        case TermKind::Halt:
          record(*c, Event{});
          move(*c, Location::end());
          next.push_back(std::move(*c));
          break;
      }
    }
    push_in_order(div0s);
    push_in_order(next);
  }

  RunReport run()
  {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t q0 = solver.queries();
    rep = RunReport{};
    rep.config = conf;
    rep.solver = solver.describe();

    State init;
    auto mem = std::make_shared<VarMap>();
    std::vector<Term> bounds;
    for (const auto& v : cfg.vars) {
      if (v.is_input) {
        mem->emplace(v.name, Term::var(v.name, v.sort));
        if (conf.input_bound && v.sort == Sort::Int) {
          bounds.push_back(le(ival(-*conf.input_bound), ivar(v.name)));
          bounds.push_back(le(ivar(v.name), ival(*conf.input_bound)));
        }
      } else {
        mem->emplace(v.name, v.sort == Sort::Bool ? fls() : ival(0));
      }
    }
    init.mem = std::move(mem);
    for (const auto& c : bounds) {
      init.pcon = std::make_shared<const PconNode>(PconNode{c, init.pcon});
    }
    init.occ.assign(f.targets.size() + 1, 0);
    move(init, entry_of(cfg.entry));
    stack.push_back(std::move(init));

    while (!stack.empty() && !stop) {
      State s = std::move(stack.back());
      stack.pop_back();
      expand(std::move(s));
    }
    if (!stack.empty()) {
      rep.stopped_early = true;
    }

    rep.counters.solver_queries = solver.queries() - q0;
    if (!rep.witnesses.empty()) {
      rep.verdict = RunVerdict::ViolationFound;
    } else if (rep.counters.truncated_paths > 0 || rep.unknown_feasibility ||
               rep.unconfirmed_violation || rep.stopped_early) {
      rep.verdict = RunVerdict::Inconclusive;
    } else {
      rep.verdict = RunVerdict::NoViolation;
    }
    rep.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }
};

Engine::Engine(const FaultedCfg& fcfg, EngineConfig config, Solver& solver)
    : impl_(std::make_unique<Impl>(fcfg, config, solver))
{
}

Engine::~Engine() = default;

RunReport Engine::run() { return impl_->run(); }

const SummaryStore& Engine::summary() const { return impl_->store; }

RunReport explore(const FaultedCfg& fcfg, const EngineConfig& config, Solver& solver,
                  SummaryStore* summary_out)
{
  Engine e(fcfg, config, solver);
  RunReport r = e.run();
  if (summary_out != nullptr) {
    *summary_out = e.summary();
  }
  return r;
}

}  // namespace faultsym
