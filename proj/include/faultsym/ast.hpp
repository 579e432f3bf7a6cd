#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "faultsym/term.hpp"

namespace faultsym {

struct Span {
  int line = 1;
  int col = 1;
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class Type { Int, Bool, Void };

const char* type_name(Type t);

enum class UnOp { Not, Neg };
enum class BinOp { Add, Sub, Mul, Div, And, Or, Eq, Ne, Lt, Gt, Le, Ge };

const char* unop_symbol(UnOp op);
const char* binop_symbol(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
  enum class Kind { IntLit, BoolLit, Ident, Unary, Binary };
  Kind kind = Kind::IntLit;
  Span span;
  Int int_value = 0;
  bool bool_value = false;
  std::string name;  // Ident
  UnOp unop = UnOp::Not;
  BinOp binop = BinOp::Add;
  ExprPtr lhs;  // operand of Unary, left of Binary
  ExprPtr rhs;

  // Filled in by validate.
  Type type = Type::Void;
  int decl = -1;
};

struct Stmt;
using StmtPtr = std::shared_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct Stmt {
  enum class Kind { VarDecl, Assign, If, Loop, Call, Assert };
  Kind kind = Kind::Assign;
  Span span;
  Type decl_type = Type::Int;  // VarDecl
  std::string name;            // VarDecl, Assign, Call (callee)
  ExprPtr expr;                // initializer, rhs, condition, assertion
  std::vector<ExprPtr> args;   // Call
  Block then_block;            // If, Loop body
  std::optional<Block> else_block;

  // Filled in by validate: declaration written by VarDecl/Assign, callee
  // function index for Call.
  int decl = -1;
  int callee = -1;
};

struct Param {
  Type type = Type::Int;
  std::string name;
  Span span;
  int decl = -1;
};

struct Function {
  Type ret = Type::Void;
  std::string name;
  std::vector<Param> params;
  Block body;
  Span span;
};

struct Program {
  std::vector<Function> functions;
};

/// A declaration site (parameter or local) as resolved by validate.
struct DeclInfo {
  std::string name;
  Type type = Type::Int;
  Span span;
  int function = -1;
  bool is_param = false;
};

struct CheckedAst {
  Program program;
  std::vector<DeclInfo> decls;
  int main_index = -1;
};

/// Deep copy; the result shares no nodes with the input.
Program clone(const Program& p);

/// Structural equality, ignoring spans and validate annotations.
bool same_structure(const Program& a, const Program& b);

/// Canonical source text. Binary operators are fully parenthesized so that
/// re-parsing reproduces the same tree.
std::string print_program(const Program& p);
std::string print_expr(const Expr& e);

}  // namespace faultsym
