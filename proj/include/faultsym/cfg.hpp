#pragma once

#include <compare>
#include <string>
#include <vector>

#include "faultsym/ast.hpp"
#include "faultsym/term.hpp"

namespace faultsym {

/// Jump destination: a block id (1-based, equal to its layout position) or
/// one of the two virtual locations.
using Target = int;
inline constexpr Target kEnd = -1;
inline constexpr Target kBad = -2;

std::string target_name(Target t);

struct Assign {
  std::string var;
  Term expr;
};

enum class TermKind { CondJump, Jump, Fallthrough, Halt };
enum class BranchKind { Program, AssertGuard };

/// Block terminator. CondJump goes to `target` when `cond` holds and to the
/// layout successor otherwise. Fallthrough continues to the layout successor
/// and is not a branch instruction; it keeps the condition of a degenerate
/// conditional so that its divisions are still evaluated.
struct Terminator {
  TermKind kind = TermKind::Halt;
  Term cond = tru();
  Target target = kEnd;
  BranchKind branch = BranchKind::Program;
};

struct BasicBlock {
  int id = 0;
  std::vector<Assign> body;
  Terminator term;
};

struct Var {
  std::string name;
  Sort sort = Sort::Int;
  bool is_input = false;
};

struct Cfg {
  std::vector<BasicBlock> blocks;  // layout order
  int entry = 1;
  std::vector<Var> vars;            // inputs first, in parameter order
  std::vector<std::string> warnings;

  const BasicBlock& block(int id) const;
  bool has_block(int id) const { return id >= 1 && id <= static_cast<int>(blocks.size()); }
  std::vector<Var> inputs() const;
  Sort sort_of(const std::string& var) const;
};

/// A program point. Within a block: body assignments, then the fault guard
/// (if the terminator is a fault target), then the terminator.
struct Location {
  enum class Kind { Body, Guard, Term, End, Bad };
  Kind kind = Kind::End;
  int block = 0;
  int index = 0;

  static Location body(int block, int idx) { return {Kind::Body, block, idx}; }
  static Location guard(int block) { return {Kind::Guard, block, 0}; }
  static Location term(int block) { return {Kind::Term, block, 0}; }
  static Location end() { return {Kind::End, 0, 0}; }
  static Location bad() { return {Kind::Bad, 0, 0}; }

  std::string to_string() const;
  bool operator==(const Location& o) const
  {
    return kind == o.kind && block == o.block && index == o.index;
  }
  std::strong_ordering operator<=>(const Location& o) const;
};

/// Inlines calls and lowers main to a CFG.
Cfg lower(const CheckedAst& ast);

/// Layout successor of a block (kEnd for the last one).
Target layout_next(const Cfg& cfg, int block_id);

/// Textual IR: `BBk:` header, indented `v := e` lines, one terminator line.
std::string print_ir(const Cfg& cfg);

// Shared with the faulted printer.
std::string format_cond(const Term& c);
std::string format_terminator(const Terminator& t);

}  // namespace faultsym
