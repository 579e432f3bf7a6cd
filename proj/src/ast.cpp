#include "faultsym/ast.hpp"

#include <sstream>

namespace faultsym {

const char* type_name(Type t)
{
  switch (t) {
    case Type::Int:
      return "int";
    case Type::Bool:
      return "bool";
    case Type::Void:
      return "void";
  }
  return "?";
}

const char* unop_symbol(UnOp op) { return op == UnOp::Not ? "!" : "-"; }

const char* binop_symbol(BinOp op)
{
  switch (op) {
    case BinOp::Add:
      return "+";
    case BinOp::Sub:
      return "-";
    case BinOp::Mul:
      return "*";
    case BinOp::Div:
      return "/";
    case BinOp::And:
      return "&&";
    case BinOp::Or:
      return "||";
    case BinOp::Eq:
      return "==";
    case BinOp::Ne:
      return "!=";
    case BinOp::Lt:
      return "<";
    case BinOp::Gt:
      return ">";
    case BinOp::Le:
      return "<=";
    case BinOp::Ge:
      return ">=";
  }
  return "?";
}

namespace {

ExprPtr clone_expr(const ExprPtr& e)
{
  if (!e) {
    return nullptr;
  }
  auto c = std::make_shared<Expr>(*e);
  c->lhs = clone_expr(e->lhs);
  c->rhs = clone_expr(e->rhs);
  return c;
}

Block clone_block(const Block& b);

StmtPtr clone_stmt(const StmtPtr& s)
{
  auto c = std::make_shared<Stmt>(*s);
  c->expr = clone_expr(s->expr);
  for (auto& a : c->args) {
    a = clone_expr(a);
  }
  c->then_block = clone_block(s->then_block);
  if (s->else_block) {
    c->else_block = clone_block(*s->else_block);
  }
  return c;
}

Block clone_block(const Block& b)
{
  Block out;
  out.reserve(b.size());
  for (const auto& s : b) {
    out.push_back(clone_stmt(s));
  }
  return out;
}

bool same_expr(const ExprPtr& a, const ExprPtr& b)
{
  if (!a || !b) {
    return !a && !b;
  }
  if (a->kind != b->kind) {
    return false;
  }
  switch (a->kind) {
    case Expr::Kind::IntLit:
      return a->int_value == b->int_value;
    case Expr::Kind::BoolLit:
      return a->bool_value == b->bool_value;
    case Expr::Kind::Ident:
      return a->name == b->name;
    case Expr::Kind::Unary:
      return a->unop == b->unop && same_expr(a->lhs, b->lhs);
    case Expr::Kind::Binary:
      return a->binop == b->binop && same_expr(a->lhs, b->lhs) && same_expr(a->rhs, b->rhs);
  }
  return false;
}

bool same_block(const Block& a, const Block& b);

bool same_stmt(const Stmt& a, const Stmt& b)
{
  if (a.kind != b.kind || a.name != b.name || !same_expr(a.expr, b.expr) ||
      a.args.size() != b.args.size() || !same_block(a.then_block, b.then_block) ||
      a.else_block.has_value() != b.else_block.has_value()) {
    return false;
  }
  if (a.kind == Stmt::Kind::VarDecl && a.decl_type != b.decl_type) {
    return false;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!same_expr(a.args[i], b.args[i])) {
      return false;
    }
  }
  return !a.else_block || same_block(*a.else_block, *b.else_block);
}

bool same_block(const Block& a, const Block& b)
{
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_stmt(*a[i], *b[i])) {
      return false;
    }
  }
  return true;
}

void print_block(std::ostream& os, const Block& b, int indent);

// Outermost binary operator printed without its parentheses.
std::string top(const Expr& e)
{
  const std::string s = print_expr(e);
  return e.kind == Expr::Kind::Binary ? s.substr(1, s.size() - 2) : s;
}

void print_stmt(std::ostream& os, const Stmt& s, int indent)
{
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  os << pad;
  switch (s.kind) {
    case Stmt::Kind::VarDecl:
      os << type_name(s.decl_type) << ' ' << s.name << " = " << top(*s.expr) << ";\n";
      return;
    case Stmt::Kind::Assign:
      os << s.name << " = " << top(*s.expr) << ";\n";
      return;
    case Stmt::Kind::Call:
      os << s.name << '(';
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        os << (i ? ", " : "") << top(*s.args[i]);
      }
      os << ");\n";
      return;
    case Stmt::Kind::Assert:
      os << "assert(" << top(*s.expr) << ");\n";
      return;
    case Stmt::Kind::If:
      os << "if (" << top(*s.expr) << ") ";
      print_block(os, s.then_block, indent);
      if (s.else_block) {
        os << " else ";
        print_block(os, *s.else_block, indent);
      }
      os << '\n';
      return;
    case Stmt::Kind::Loop:
      os << "loop (" << top(*s.expr) << ") ";
      print_block(os, s.then_block, indent);
      os << '\n';
      return;
  }
}

void print_block(std::ostream& os, const Block& b, int indent)
{
  os << "{\n";
  for (const auto& s : b) {
    print_stmt(os, *s, indent + 1);
  }
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << '}';
}

}  // namespace

Program clone(const Program& p)
{
  Program out = p;
  for (auto& f : out.functions) {
    f.body = clone_block(f.body);
  }
  return out;
}

bool same_structure(const Program& a, const Program& b)
{
  if (a.functions.size() != b.functions.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const auto& f = a.functions[i];
    const auto& g = b.functions[i];
    if (f.ret != g.ret || f.name != g.name || f.params.size() != g.params.size() ||
        !same_block(f.body, g.body)) {
      return false;
    }
    for (std::size_t k = 0; k < f.params.size(); ++k) {
      if (f.params[k].type != g.params[k].type || f.params[k].name != g.params[k].name) {
        return false;
      }
    }
  }
  return true;
}

std::string print_expr(const Expr& e)
{
  switch (e.kind) {
    case Expr::Kind::IntLit: {
      std::ostringstream os;
      os << e.int_value;
      return os.str();
    }
    case Expr::Kind::BoolLit:
      return e.bool_value ? "true" : "false";
    case Expr::Kind::Ident:
      return e.name;
    case Expr::Kind::Unary:
      return std::string(unop_symbol(e.unop)) + print_expr(*e.lhs);
    case Expr::Kind::Binary:
      return "(" + print_expr(*e.lhs) + " " + binop_symbol(e.binop) + " " + print_expr(*e.rhs) + ")";
  }
  return "?";
}

std::string print_program(const Program& p)
{
  std::ostringstream os;
  for (std::size_t i = 0; i < p.functions.size(); ++i) {
    const auto& f = p.functions[i];
    if (i) {
      os << '\n';
    }
    os << type_name(f.ret) << ' ' << f.name << '(';
    for (std::size_t k = 0; k < f.params.size(); ++k) {
      os << (k ? ", " : "") << type_name(f.params[k].type) << ' ' << f.params[k].name;
    }
    os << ") ";
    print_block(os, f.body, 0);
    os << '\n';
  }
  return os.str();
}

}  // namespace faultsym
