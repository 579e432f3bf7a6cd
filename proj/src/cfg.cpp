#include "faultsym/cfg.hpp"

#include <deque>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace faultsym {

std::string target_name(Target t)
{
  if (t == kEnd) {
    return "END";
  }
  if (t == kBad) {
    return "BAD";
  }
  return "BB" + std::to_string(t);
}

const BasicBlock& Cfg::block(int id) const
{
  if (!has_block(id)) {
    throw std::out_of_range("no block with id " + std::to_string(id));
  }
  return blocks[static_cast<std::size_t>(id - 1)];
}

std::vector<Var> Cfg::inputs() const
{
  std::vector<Var> out;
  for (const auto& v : vars) {
    if (v.is_input) {
      out.push_back(v);
    }
  }
  return out;
}

Sort Cfg::sort_of(const std::string& var) const
{
  for (const auto& v : vars) {
    if (v.name == var) {
      return v.sort;
    }
  }
  throw std::out_of_range("unknown variable '" + var + "'");
}

std::string Location::to_string() const
{
  switch (kind) {
    case Kind::Body:
      return "BB" + std::to_string(block) + "." + std::to_string(index);
    case Kind::Guard:
      return "BB" + std::to_string(block) + ".guard";
    case Kind::Term:
      return "BB" + std::to_string(block) + ".term";
    case Kind::End:
      return "END";
    case Kind::Bad:
      return "BAD";
  }
  return "?";
}

std::strong_ordering Location::operator<=>(const Location& o) const
{
  auto key = [](const Location& l) {
    const bool virt = l.kind == Kind::End || l.kind == Kind::Bad;
    return std::make_tuple(virt ? 1 : 0, l.block, static_cast<int>(l.kind), l.index);
  };
  return key(*this) <=> key(o);
}

Target layout_next(const Cfg& cfg, int block_id)
{
  if (!cfg.has_block(block_id)) {
    throw std::out_of_range("no block with id " + std::to_string(block_id));
  }
  return block_id == static_cast<int>(cfg.blocks.size()) ? kEnd : block_id + 1;
}

namespace {

Sort sort_of(Type t) { return t == Type::Bool ? Sort::Bool : Sort::Int; }

// Negation for branch conditions without any other rewriting, so that
// divisions survive untouched.
Term flip(const Term& c)
{
  switch (c.op()) {
    case Op::BoolConst:
      return Term::bool_const(!c.bool_value());
    case Op::Not:
      return c.kids()[0];
    case Op::Eq:
      return ne(c.kids()[0], c.kids()[1]);
    case Op::Ne:
      return eq(c.kids()[0], c.kids()[1]);
    case Op::Lt:
      return ge(c.kids()[0], c.kids()[1]);
    case Op::Ge:
      return lt(c.kids()[0], c.kids()[1]);
    case Op::Gt:
      return le(c.kids()[0], c.kids()[1]);
    case Op::Le:
      return gt(c.kids()[0], c.kids()[1]);
    default:
      return lnot(c);
  }
}

class Lowerer {
 public:
  explicit Lowerer(const CheckedAst& ast) : ast_(ast) {}

  Cfg run()
  {
    const auto& main = ast_.program.functions[static_cast<std::size_t>(ast_.main_index)];
    Env env;
    for (const auto& p : main.params) {
      env[p.decl] = declare_var(p.name, sort_of(p.type), true);
    }
    lower_block(main.body, env, "");
    end_block({TermKind::Halt, tru(), kEnd, BranchKind::Program});
    return finish();
  }

 private:
  using Env = std::unordered_map<int, std::string>;

  struct RawBlock {
    std::vector<Assign> body;
    std::optional<Terminator> term;  // targets hold label ids until finish()
  };

  const CheckedAst& ast_;
  std::vector<RawBlock> blocks_;
  int cur_ = -1;
  std::vector<int> label_block_;
  std::vector<Var> vars_;
  std::unordered_map<std::string, int> name_uses_;
  std::unordered_map<std::string, int> instances_;

  std::string declare_var(const std::string& base, Sort sort, bool is_input)
  {
    std::string name = base;
    const int n = ++name_uses_[base];
    if (n > 1) {
      name = base + "." + std::to_string(n);
    }
    vars_.push_back({name, sort, is_input});
    return name;
  }

  int new_label()
  {
    label_block_.push_back(-1);
    return static_cast<int>(label_block_.size()) - 1;
  }

  void open()
  {
    if (cur_ == -1) {
      blocks_.emplace_back();
      cur_ = static_cast<int>(blocks_.size()) - 1;
    }
  }

  void end_block(Terminator t)
  {
    open();
    blocks_[static_cast<std::size_t>(cur_)].term = std::move(t);
    cur_ = -1;
  }

  void place(int label)
  {
    if (cur_ != -1 && blocks_[static_cast<std::size_t>(cur_)].body.empty()) {
      label_block_[static_cast<std::size_t>(label)] = cur_;
      return;
    }
    if (cur_ != -1) {
      end_block({TermKind::Fallthrough, tru(), label, BranchKind::Program});
    }
    open();
    label_block_[static_cast<std::size_t>(label)] = cur_;
  }

  Term to_term(const Expr& e, const Env& env) const
  {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        return ival(e.int_value);
      case Expr::Kind::BoolLit:
        return Term::bool_const(e.bool_value);
      case Expr::Kind::Ident:
        return Term::var(env.at(e.decl), sort_of(e.type));
      case Expr::Kind::Unary:
        return e.unop == UnOp::Not ? lnot(to_term(*e.lhs, env)) : neg(to_term(*e.lhs, env));
      case Expr::Kind::Binary: {
        Term l = to_term(*e.lhs, env);
        Term r = to_term(*e.rhs, env);
        switch (e.binop) {
          case BinOp::Add:
            return add(l, r);
          case BinOp::Sub:
            return sub(l, r);
          case BinOp::Mul:
            return mul(l, r);
          case BinOp::Div:
            return div(l, r);
          case BinOp::And:
            return Term::make(Op::And, {l, r});
          case BinOp::Or:
            return Term::make(Op::Or, {l, r});
          case BinOp::Eq:
            return eq(l, r);
          case BinOp::Ne:
            return ne(l, r);
          case BinOp::Lt:
            return lt(l, r);
          case BinOp::Gt:
            return gt(l, r);
          case BinOp::Le:
            return le(l, r);
          case BinOp::Ge:
            return ge(l, r);
        }
      }
    }
    throw std::logic_error("unhandled expression kind");
  }

  void emit_assign(const std::string& v, Term e)
  {
    open();
    blocks_[static_cast<std::size_t>(cur_)].body.push_back({v, std::move(e)});
  }

  void lower_block(const Block& b, Env& env, const std::string& prefix)
  {
    for (const auto& s : b) {
      lower_stmt(*s, env, prefix);
    }
  }

  void lower_stmt(const Stmt& s, Env& env, const std::string& prefix)
  {
    switch (s.kind) {
      case Stmt::Kind::VarDecl: {
        Term init = to_term(*s.expr, env);
        env[s.decl] = declare_var(prefix + s.name, sort_of(s.decl_type), false);
        emit_assign(env.at(s.decl), init);
        return;
      }
      case Stmt::Kind::Assign:
        emit_assign(env.at(s.decl), to_term(*s.expr, env));
        return;
      case Stmt::Kind::If: {
        const Term c = to_term(*s.expr, env);
        const int join = new_label();
        if (s.else_block) {
          const int other = new_label();
          end_block({TermKind::CondJump, flip(c), other, BranchKind::Program});
          lower_block(s.then_block, env, prefix);
          end_block({TermKind::Jump, tru(), join, BranchKind::Program});
          place(other);
          lower_block(*s.else_block, env, prefix);
        } else {
          end_block({TermKind::CondJump, flip(c), join, BranchKind::Program});
          lower_block(s.then_block, env, prefix);
        }
        place(join);
        return;
      }
      case Stmt::Kind::Loop: {
        const int head = new_label();
        const int exit = new_label();
        place(head);
        end_block({TermKind::CondJump, flip(to_term(*s.expr, env)), exit, BranchKind::Program});
        lower_block(s.then_block, env, prefix);
        end_block({TermKind::Jump, tru(), head, BranchKind::Program});
        place(exit);
        return;
      }
      case Stmt::Kind::Assert:
        end_block({TermKind::CondJump, flip(to_term(*s.expr, env)), kBad, BranchKind::AssertGuard});
        return;
      case Stmt::Kind::Call: {
        const auto& callee = ast_.program.functions[static_cast<std::size_t>(s.callee)];
        const std::string inner = callee.name + "." + std::to_string(++instances_[callee.name]) + ".";
        Env callee_env;
        std::vector<Term> args;
        for (const auto& a : s.args) {
          args.push_back(to_term(*a, env));
        }
        for (std::size_t i = 0; i < callee.params.size(); ++i) {
          const auto& p = callee.params[i];
          callee_env[p.decl] = declare_var(inner + p.name, sort_of(p.type), false);
          emit_assign(callee_env.at(p.decl), args[i]);
        }
        lower_block(callee.body, callee_env, inner);
        return;
      }
    }
  }

  Cfg finish()
  {
    const int n = static_cast<int>(blocks_.size());
    auto resolve = [&](Target t) {
      return t == kEnd || t == kBad ? t : label_block_[static_cast<std::size_t>(t)];
    };
    for (int i = 0; i < n; ++i) {
      Terminator& t = *blocks_[static_cast<std::size_t>(i)].term;
      if (t.kind == TermKind::Halt) {
        continue;
      }
      t.target = resolve(t.target);
      if (t.target == i + 1 && (t.kind == TermKind::CondJump || t.kind == TermKind::Jump)) {
        // Both ways lead to the layout successor.
        t.cond = t.kind == TermKind::CondJump && !divisors(t.cond).empty() ? t.cond : tru();
        t.kind = TermKind::Fallthrough;
      }
    }

    // Reachability, counting skip edges: a skipped jump reaches its layout
    // successor.
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::deque<int> work{0};
    seen[0] = true;
    while (!work.empty()) {
      const int i = work.front();
      work.pop_front();
      const Terminator& t = *blocks_[static_cast<std::size_t>(i)].term;
      std::vector<int> succ;
      if (t.kind != TermKind::Halt && i + 1 < n) {
        succ.push_back(i + 1);
      }
      if ((t.kind == TermKind::CondJump || t.kind == TermKind::Jump) && t.target >= 0) {
        succ.push_back(t.target);
      }
      for (int s : succ) {
        if (!seen[static_cast<std::size_t>(s)]) {
          seen[static_cast<std::size_t>(s)] = true;
          work.push_back(s);
        }
      }
    }

    Cfg cfg;
    std::vector<int> new_id(static_cast<std::size_t>(n), 0);
    int next = 1;
    for (int i = 0; i < n; ++i) {
      if (seen[static_cast<std::size_t>(i)]) {
        new_id[static_cast<std::size_t>(i)] = next++;
      } else {
        cfg.warnings.push_back("dropped unreachable block " + std::to_string(i + 1));
      }
    }
    for (int i = 0; i < n; ++i) {
      if (!seen[static_cast<std::size_t>(i)]) {
        continue;
      }
      BasicBlock b;
      b.id = new_id[static_cast<std::size_t>(i)];
      b.body = std::move(blocks_[static_cast<std::size_t>(i)].body);
      b.term = *blocks_[static_cast<std::size_t>(i)].term;
      if (b.term.kind != TermKind::Halt && b.term.target >= 0) {
        b.term.target = new_id[static_cast<std::size_t>(b.term.target)];
      }
      cfg.blocks.push_back(std::move(b));
    }
    cfg.entry = 1;
    cfg.vars = std::move(vars_);
    return cfg;
  }
};

}  // namespace

Cfg lower(const CheckedAst& ast) { return Lowerer(ast).run(); }

std::string format_cond(const Term& c)
{
  const std::string s = c.to_string();
  const bool wrapped = !s.empty() && s.front() == '(' &&
                       c.op() != Op::Not && c.op() != Op::Neg && !c.is_const() && !c.is_var();
  return wrapped ? s : "(" + s + ")";
}

std::string format_terminator(const Terminator& t)
{
  switch (t.kind) {
    case TermKind::CondJump:
      return (t.branch == BranchKind::AssertGuard ? "assertguard " : "condjump ") +
             format_cond(t.cond) + " -> " + target_name(t.target);
    case TermKind::Jump:
      return "jump -> " + target_name(t.target);
    case TermKind::Fallthrough:
      return t.cond.is_true() ? "fallthrough -> " + target_name(t.target)
                              : "fallthrough " + format_cond(t.cond) + " -> " + target_name(t.target);
    case TermKind::Halt:
      return "halt";
  }
  return "?";
}

std::string print_ir(const Cfg& cfg)
{
  std::ostringstream os;
  for (const auto& b : cfg.blocks) {
    os << "BB" << b.id << ":\n";
    for (const auto& a : b.body) {
      os << "  " << a.var << " := " << a.expr.to_string() << '\n';
    }
    os << "  " << format_terminator(b.term) << '\n';
  }
  return os.str();
}

}  // namespace faultsym
