#include "faultsym/oracle.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace faultsym {

const char* outcome_name(OutcomeKind k)
{
  switch (k) {
    case OutcomeKind::Halt:
      return "halt";
    case OutcomeKind::Bad:
      return "bad";
    case OutcomeKind::Div0:
      return "div0";
    case OutcomeKind::Truncated:
      return "truncated";
  }
  return "?";
}

namespace {

struct Overflow {};

// --- int64 stack machine ----------------------------------------------------

struct Instr {
  Op op;
  int n = 0;        // variable slot, or operand count for And/Or
  std::int64_t v = 0;  // constant
};

using Code = std::vector<Instr>;

struct CBlock {
  std::vector<std::pair<int, Code>> body;
  Code cond;
  bool has_cond = false;
};

class Compiled {
 public:
  explicit Compiled(const Cfg& cfg)
  {
    for (std::size_t i = 0; i < cfg.vars.size(); ++i) {
      slot_.emplace(cfg.vars[i].name, static_cast<int>(i));
    }
    for (const auto& b : cfg.blocks) {
      CBlock cb;
      for (const auto& a : b.body) {
        cb.body.emplace_back(slot_.at(a.var), compile(a.expr));
      }
      cb.has_cond = b.term.kind == TermKind::CondJump ||
                    (b.term.kind == TermKind::Fallthrough && !b.term.cond.is_true());
      if (cb.has_cond) {
        cb.cond = compile(b.term.cond);
      }
      blocks_.push_back(std::move(cb));
    }
  }

  bool usable() const { return usable_; }
  const CBlock& block(int id) const { return blocks_[static_cast<std::size_t>(id - 1)]; }
  int slot(const std::string& name) const { return slot_.at(name); }

 private:
  std::unordered_map<std::string, int> slot_;
  std::vector<CBlock> blocks_;
  bool usable_ = true;

  Code compile(const Term& t)
  {
    Code c;
    emit(t, c);
    return c;
  }

  void emit(const Term& t, Code& c)
  {
    switch (t.op()) {
      case Op::IntConst:
        if (t.int_value() > std::numeric_limits<std::int64_t>::max() ||
            t.int_value() < std::numeric_limits<std::int64_t>::min()) {
          usable_ = false;
          c.push_back({Op::IntConst, 0, 0});
        } else {
          c.push_back({Op::IntConst, 0, static_cast<std::int64_t>(t.int_value())});
        }
        return;
      case Op::BoolConst:
        c.push_back({Op::IntConst, 0, t.bool_value() ? 1 : 0});
        return;
      case Op::Var:
        c.push_back({Op::Var, slot_.at(t.name()), 0});
        return;
      default:
        for (const auto& k : t.kids()) {
          emit(k, c);
        }
        c.push_back({t.op(), static_cast<int>(t.kids().size()), 0});
    }
  }
};

std::int64_t euclid_div64(std::int64_t a, std::int64_t b)
{
  if (a == std::numeric_limits<std::int64_t>::min() && b == -1) {
    throw Overflow{};
  }
  std::int64_t q = a / b;
  if (a % b < 0) {
    q += b > 0 ? -1 : 1;
  }
  return q;
}

// Returns false on division by zero.
bool run_code(const Code& code, const std::vector<std::int64_t>& vars, std::vector<std::int64_t>& st,
              std::int64_t& out)
{
  st.clear();
  for (const auto& in : code) {
    switch (in.op) {
      case Op::IntConst:
        st.push_back(in.v);
        break;
      case Op::Var:
        st.push_back(vars[static_cast<std::size_t>(in.n)]);
        break;
      case Op::Neg:
        if (st.back() == std::numeric_limits<std::int64_t>::min()) {
          throw Overflow{};
        }
        st.back() = -st.back();
        break;
      case Op::Not:
        st.back() = st.back() == 0 ? 1 : 0;
        break;
      case Op::And:
      case Op::Or: {
        const bool is_and = in.op == Op::And;
        bool r = is_and;
        for (int i = 0; i < in.n; ++i) {
          const bool x = st.back() != 0;
          st.pop_back();
          r = is_and ? (r && x) : (r || x);
        }
        st.push_back(r ? 1 : 0);
        break;
      }
      default: {
        const std::int64_t b = st.back();
        st.pop_back();
        const std::int64_t a = st.back();
        std::int64_t r = 0;
        switch (in.op) {
          case Op::Add:
            if (__builtin_add_overflow(a, b, &r)) {
              throw Overflow{};
            }
            break;
          case Op::Sub:
            if (__builtin_sub_overflow(a, b, &r)) {
              throw Overflow{};
            }
            break;
          case Op::Mul:
            if (__builtin_mul_overflow(a, b, &r)) {
              throw Overflow{};
            }
            break;
          case Op::Div:
            if (b == 0) {
              return false;
            }
            r = euclid_div64(a, b);
            break;
          case Op::Eq:
            r = a == b;
            break;
          case Op::Ne:
            r = a != b;
            break;
          case Op::Lt:
            r = a < b;
            break;
          case Op::Gt:
            r = a > b;
            break;
          case Op::Le:
            r = a <= b;
            break;
          case Op::Ge:
            r = a >= b;
            break;
          default:
            break;
        }
        st.back() = r;
      }
    }
  }
  out = st.back();
  return true;
}

class FastStore {
 public:
  FastStore(const Cfg& cfg, const Compiled& code, const Model& input) : cfg_(cfg), code_(code)
  {
    vals_.assign(cfg.vars.size(), 0);
    for (std::size_t i = 0; i < cfg.vars.size(); ++i) {
      auto it = input.find(cfg.vars[i].name);
      if (it == input.end()) {
        continue;
      }
      if (const auto* b = std::get_if<bool>(&it->second)) {
        vals_[i] = *b ? 1 : 0;
      } else {
        const Int& v = std::get<Int>(it->second);
        if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
          throw Overflow{};
        }
        vals_[i] = static_cast<std::int64_t>(v);
      }
    }
  }

  bool assign(int block, std::size_t idx)
  {
    const auto& [slot, code] = code_.block(block).body[idx];
    std::int64_t r = 0;
    if (!run_code(code, vals_, stack_, r)) {
      return false;
    }
    vals_[static_cast<std::size_t>(slot)] = r;
    return true;
  }

  std::optional<bool> cond(int block)
  {
    std::int64_t r = 0;
    if (!run_code(code_.block(block).cond, vals_, stack_, r)) {
      return std::nullopt;
    }
    return r != 0;
  }

  Model to_model() const
  {
    Model m;
    for (std::size_t i = 0; i < cfg_.vars.size(); ++i) {
      if (cfg_.vars[i].sort == Sort::Bool) {
        m[cfg_.vars[i].name] = vals_[i] != 0;
      } else {
        m[cfg_.vars[i].name] = Int(vals_[i]);
      }
    }
    return m;
  }

 private:
  const Cfg& cfg_;
  const Compiled& code_;
  std::vector<std::int64_t> vals_;
  std::vector<std::int64_t> stack_;
};

// Unbounded fallback over Terms.
class BigStore {
 public:
  BigStore(const Cfg& cfg, const Model& input) : cfg_(cfg)
  {
    for (const auto& v : cfg.vars) {
      auto it = input.find(v.name);
      m_[v.name] = it != input.end() ? it->second
                                      : (v.sort == Sort::Bool ? Value(false) : Value(Int(0)));
    }
  }

  bool assign(int block, std::size_t idx)
  {
    const auto& a = cfg_.block(block).body[idx];
    if (!divisors_ok(a.expr)) {
      return false;
    }
    m_[a.var] = evaluate(a.expr, m_);
    return true;
  }

  std::optional<bool> cond(int block)
  {
    const Term& c = cfg_.block(block).term.cond;
    if (!divisors_ok(c)) {
      return std::nullopt;
    }
    return evaluate_bool(c, m_);
  }

  Model to_model() const { return m_; }

 private:
  const Cfg& cfg_;
  Model m_;

  bool divisors_ok(const Term& t) const
  {
    for (const auto& d : divisors(t)) {
      if (std::get<Int>(evaluate(d, m_)) == 0) {
        return false;
      }
    }
    return true;
  }
};

template <class Store>
Outcome run(const Cfg& cfg, const FaultedCfg* f, Store& st, const FaultPattern* pattern,
            std::uint64_t step_limit)
{
  Outcome out;
  std::vector<int> occ(f ? f->targets.size() + 1 : 0, 0);
  int b = cfg.entry;
  auto finish = [&](OutcomeKind k) {
    out.kind = k;
    out.store = st.to_model();
    return out;
  };
  for (;;) {
    if (b == kEnd) {
      return finish(OutcomeKind::Halt);
    }
    if (b == kBad) {
      return finish(OutcomeKind::Bad);
    }
    const BasicBlock& blk = cfg.block(b);
    for (std::size_t i = 0; i < blk.body.size(); ++i) {
      if (++out.steps > step_limit) {
        return finish(OutcomeKind::Truncated);
      }
      if (!st.assign(b, i)) {
        return finish(OutcomeKind::Div0);
      }
    }
    if (f != nullptr) {
      if (const int t = f->target_at(b); t != 0) {
        const int k = ++occ[static_cast<std::size_t>(t)];
        out.guard_log.emplace_back(t, k);
        if (pattern != nullptr && pattern->count({t, k}) != 0) {
          out.activations.push_back({t, k, b});
          b = f->target(t).skip_dest;
          continue;
        }
      }
    }
    if (++out.steps > step_limit) {
      return finish(OutcomeKind::Truncated);
    }
    const Terminator& term = blk.term;
    switch (term.kind) {
      case TermKind::CondJump: {
        const auto c = st.cond(b);
        if (!c) {
          return finish(OutcomeKind::Div0);
        }
        b = *c ? term.target : layout_next(cfg, b);
        break;
      }
      case TermKind::Fallthrough:
        if (!term.cond.is_true() && !st.cond(b)) {
          return finish(OutcomeKind::Div0);
        }
        b = term.target;
        break;
      case TermKind::Jump:
        b = term.target;
        break;
      case TermKind::Halt:
        b = kEnd;
        break;
    }
  }
}

Outcome run_any(const Cfg& cfg, const FaultedCfg* f, const Compiled& code, const Model& input,
                const FaultPattern* pattern, std::uint64_t step_limit)
{
  for (const auto& v : cfg.inputs()) {
    if (input.count(v.name) == 0) {
      throw std::invalid_argument("no value for input '" + v.name + "'");
    }
  }
  if (code.usable()) {
    try {
      FastStore st(cfg, code, input);
      return run(cfg, f, st, pattern, step_limit);
    } catch (const Overflow&) {
    }
  }
  BigStore st(cfg, input);
  return run(cfg, f, st, pattern, step_limit);
}

}  // namespace

Outcome interpret(const FaultedCfg& fcfg, const Model& input, const FaultPattern& pattern,
                  std::uint64_t step_limit)
{
  const Compiled code(fcfg.base);
  return run_any(fcfg.base, &fcfg, code, input, &pattern, step_limit);
}

Outcome interpret(const Cfg& cfg, const Model& input, std::uint64_t step_limit)
{
  const Compiled code(cfg);
  return run_any(cfg, nullptr, code, input, nullptr, step_limit);
}

// --- source-level interpreter -------------------------------------------------

namespace {

struct AstDiv0 {};
struct AstBad {};
struct AstTruncated {};

class AstInterp {
 public:
  AstInterp(const CheckedAst& ast, std::uint64_t limit) : ast_(ast), limit_(limit) {}

  void call(int fn, const std::vector<Value>& args)
  {
    const auto& f = ast_.program.functions[static_cast<std::size_t>(fn)];
    Frame frame;
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      frame[f.params[i].decl] = args[i];
    }
    frames_.push_back(std::move(frame));
    exec(f.body);
    frames_.pop_back();
  }

 private:
  using Frame = std::unordered_map<int, Value>;
  const CheckedAst& ast_;
  std::uint64_t limit_;
  std::uint64_t steps_ = 0;
  std::vector<Frame> frames_;

  void tick()
  {
    if (++steps_ > limit_) {
      throw AstTruncated{};
    }
  }

  void exec(const Block& b)
  {
    for (const auto& s : b) {
      exec(*s);
    }
  }

  void exec(const Stmt& s)
  {
    tick();
    switch (s.kind) {
      case Stmt::Kind::VarDecl:
      case Stmt::Kind::Assign:
        frames_.back()[s.decl] = eval(*s.expr);
        return;
      case Stmt::Kind::If:
        if (std::get<bool>(eval(*s.expr))) {
          exec(s.then_block);
        } else if (s.else_block) {
          exec(*s.else_block);
        }
        return;
      case Stmt::Kind::Loop:
        while (std::get<bool>(eval(*s.expr))) {
          exec(s.then_block);
          tick();
        }
        return;
      case Stmt::Kind::Assert:
        if (!std::get<bool>(eval(*s.expr))) {
          throw AstBad{};
        }
        return;
      case Stmt::Kind::Call: {
        std::vector<Value> args;
        for (const auto& a : s.args) {
          args.push_back(eval(*a));
        }
        call(s.callee, args);
        return;
      }
    }
  }

  Value eval(const Expr& e)
  {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        return e.int_value;
      case Expr::Kind::BoolLit:
        return e.bool_value;
      case Expr::Kind::Ident:
        return frames_.back().at(e.decl);
      case Expr::Kind::Unary: {
        const Value v = eval(*e.lhs);
        if (e.unop == UnOp::Not) {
          return !std::get<bool>(v);
        }
        return Int(-std::get<Int>(v));
      }
      case Expr::Kind::Binary: {
        // Both operands are always evaluated, so that every division is
        // checked, as in the lowered program.
        const Value l = eval(*e.lhs);
        const Value r = eval(*e.rhs);
        switch (e.binop) {
          case BinOp::And:
            return std::get<bool>(l) && std::get<bool>(r);
          case BinOp::Or:
            return std::get<bool>(l) || std::get<bool>(r);
          case BinOp::Eq:
            return l == r;
          case BinOp::Ne:
            return l != r;
          default:
            break;
        }
        const Int& a = std::get<Int>(l);
        const Int& b = std::get<Int>(r);
        switch (e.binop) {
          case BinOp::Add:
            return Int(a + b);
          case BinOp::Sub:
            return Int(a - b);
          case BinOp::Mul:
            return Int(a * b);
          case BinOp::Div:
            if (b == 0) {
              throw AstDiv0{};
            }
            return euclid_div(a, b);
          case BinOp::Lt:
            return a < b;
          case BinOp::Gt:
            return a > b;
          case BinOp::Le:
            return a <= b;
          case BinOp::Ge:
            return a >= b;
          default:
            break;
        }
      }
    }
    throw std::logic_error("unhandled expression");
  }
};

}  // namespace

OutcomeKind interpret_ast(const CheckedAst& ast, const Model& input, std::uint64_t step_limit)
{
  const auto& main = ast.program.functions[static_cast<std::size_t>(ast.main_index)];
  std::vector<Value> args;
  for (const auto& p : main.params) {
    auto it = input.find(p.name);
    if (it == input.end()) {
      throw std::invalid_argument("no value for input '" + p.name + "'");
    }
    args.push_back(it->second);
  }
  try {
    AstInterp(ast, step_limit).call(ast.main_index, args);
  } catch (const AstDiv0&) {
    return OutcomeKind::Div0;
  } catch (const AstBad&) {
    return OutcomeKind::Bad;
  } catch (const AstTruncated&) {
    return OutcomeKind::Truncated;
  }
  return OutcomeKind::Halt;
}

// --- enumeration ----------------------------------------------------------------

std::vector<Model> input_grid(const std::vector<Var>& inputs, int bound)
{
  std::vector<Model> out{Model{}};
  for (const auto& v : inputs) {
    std::vector<Model> next;
    for (const auto& m : out) {
      if (v.sort == Sort::Bool) {
        for (bool b : {false, true}) {
          Model x = m;
          x[v.name] = b;
          next.push_back(std::move(x));
        }
      } else {
        for (int k = -bound; k <= bound; ++k) {
          Model x = m;
          x[v.name] = Int(k);
          next.push_back(std::move(x));
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

RunVerdict OracleResult::verdict_for(int budget) const
{
  if (min_faults && *min_faults <= budget) {
    return RunVerdict::ViolationFound;
  }
  if (incomplete_at && *incomplete_at <= budget) {
    return RunVerdict::Inconclusive;
  }
  return RunVerdict::NoViolation;
}

OracleResult enumerate_verdict(const FaultedCfg& fcfg, const OracleOptions& opts)
{
  const Cfg& cfg = fcfg.base;
  const Compiled code(cfg);
  OracleResult res;

  auto note_incomplete = [&](int size) {
    if (!res.incomplete_at || size < *res.incomplete_at) {
      res.incomplete_at = size;
    }
  };

  struct Pending {
    FaultPattern pattern;
    std::size_t next_pos;  // guard-log positions >= this may be added
  };

  for (const auto& input : input_grid(cfg.inputs(), opts.input_bound)) {
    std::optional<std::vector<Activation>> best;
    std::vector<Pending> work{{{}, 0}};
    while (!work.empty() && !res.cap_hit) {
      Pending p = std::move(work.back());
      work.pop_back();
      if (++res.executions > opts.pattern_cap) {
        res.cap_hit = true;
        note_incomplete(0);
        break;
      }
      const Outcome o = run_any(cfg, &fcfg, code, input, &p.pattern, opts.step_limit);
      const int size = static_cast<int>(p.pattern.size());
      if (o.kind == OutcomeKind::Bad) {
        auto acts = o.activations;
        auto key = [](std::vector<Activation> a) {
          std::sort(a.begin(), a.end());
          return a;
        };
        if (!best || acts.size() < best->size() ||
            (acts.size() == best->size() && key(acts) < key(*best))) {
          best = acts;
        }
        continue;
      }
      if (o.kind == OutcomeKind::Truncated) {
        note_incomplete(size);
      }
      if (size >= opts.budget) {
        continue;
      }
      // Push in reverse so that earlier positions are explored first.
      for (std::size_t i = o.guard_log.size(); i-- > p.next_pos;) {
        Pending q{p.pattern, i + 1};
        q.pattern.insert(o.guard_log[i]);
        work.push_back(std::move(q));
      }
    }
    if (best) {
      const int n = static_cast<int>(best->size());
      if (!res.min_faults || n < *res.min_faults) {
        res.min_faults = n;
      }
      res.witnesses.push_back({input, *best});
    }
    if (res.cap_hit) {
      break;
    }
  }
  res.verdict = res.verdict_for(opts.budget);
  return res;
}

Outcome replay(const FaultedCfg& fcfg, const Witness& w, int budget, std::uint64_t step_limit)
{
  if (static_cast<int>(w.activations.size()) > budget) {
    throw WitnessRejected("witness uses " + std::to_string(w.activations.size()) +
                          " activations, budget is " + std::to_string(budget));
  }
  FaultPattern pattern;
  for (const auto& a : w.activations) {
    pattern.insert({a.target, a.occ});
  }
  Outcome o = interpret(fcfg, w.input, pattern, step_limit);
  if (o.kind != OutcomeKind::Bad) {
    throw ReplayMismatch(std::string("witness replay ended in ") + outcome_name(o.kind), o);
  }
  if (o.activations.size() != w.activations.size()) {
    throw ReplayMismatch("witness activations were not all reached", o);
  }
  return o;
}

}  // namespace faultsym
