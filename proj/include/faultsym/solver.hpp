#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "faultsym/term.hpp"

namespace faultsym {

struct Sat {
  Model model;
};
struct Unsat {};
struct Unknown {
  std::string reason;
};

/// Result of a satisfiability query.
using Verdict = std::variant<Sat, Unsat, Unknown>;

inline bool is_sat(const Verdict& v) { return std::holds_alternative<Sat>(v); }
inline bool is_unsat(const Verdict& v) { return std::holds_alternative<Unsat>(v); }
inline bool is_unknown(const Verdict& v) { return std::holds_alternative<Unknown>(v); }

class SolverProcessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SmtLibError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Satisfiability backend. Implementations are single-owner (one per run).
class Solver {
 public:
  virtual ~Solver() = default;

  /// Checks `phi`. A Sat result always carries a model that assigns every
  /// free variable and re-evaluates `phi` to true.
  Verdict check_sat(const Term& phi);

  std::uint64_t queries() const { return queries_; }
  virtual std::string describe() const = 0;

 protected:
  virtual Verdict check_impl(const Term& phi) = 0;

 private:
  std::uint64_t queries_ = 0;
};

/// Enumerates Int variables over [-bound, bound] and Bool variables over
/// {false, true}, with partial evaluation to cut the search. It cannot
/// certify Unsat for formulas over Int variables and answers Unknown
/// instead; purely propositional formulas are decided exactly.
class EnumeratingSolver : public Solver {
 public:
  explicit EnumeratingSolver(int bound = 16) : bound_(bound) {}
  std::string describe() const override;
  int bound() const { return bound_; }

 protected:
  Verdict check_impl(const Term& phi) override;

 private:
  int bound_;
};

/// Talks SMT-LIB2 to a long-lived child solver process over stdin/stdout,
/// resetting it between queries.
class SmtLibSolver : public Solver {
 public:
  /// `command` is split on whitespace; e.g. "z3 -in -smt2".
  SmtLibSolver(std::string command, std::chrono::milliseconds timeout);
  ~SmtLibSolver() override;
  SmtLibSolver(const SmtLibSolver&) = delete;
  SmtLibSolver& operator=(const SmtLibSolver&) = delete;

  std::string describe() const override;
  /// Applies from the next query on.
  void set_timeout(std::chrono::milliseconds t) { timeout_ = t; }

 protected:
  Verdict check_impl(const Term& phi) override;

 private:
  struct Process;
  void start();
  void stop();
  void send(const std::string& text);
  std::string read_sexpr(std::chrono::steady_clock::time_point deadline);

  std::string command_;
  std::chrono::milliseconds timeout_;
  std::unique_ptr<Process> proc_;
};

/// Backend choice as written on the command line: "internal",
/// "smtlib:<command line>", or "auto" (an SMT-LIB2 solver found on this
/// machine, else internal).
struct SolverSpec {
  std::string text = "internal";
  int internal_bound = 16;
  std::chrono::milliseconds timeout{10000};
};

std::unique_ptr<Solver> make_solver(const SolverSpec& spec);

/// Locates a usable SMT-LIB2 solver command on this machine (z3 or cvc5),
/// or nothing.
std::optional<std::string> find_smtlib_solver();

enum class Implication { Holds, Fails, Unknown };

struct ImplicationResult {
  Implication status;
  Model countermodel;  // set when Fails
};

/// a -> b is valid iff a && !b is unsatisfiable.
ImplicationResult check_valid_implication(const Term& a, const Term& b, Solver& solver);

// SMT-LIB2 text.

/// Symbol as written in SMT-LIB2 (quoted with |..| when needed).
std::string smt_symbol(const std::string& name);
std::string to_smtlib_expr(const Term& t);
/// Complete script: set-logic, declarations, assert, check-sat, get-model.
std::string to_smtlib(const Term& phi);
/// Reads a get-model response, keeping only the constants in `declared`.
Model parse_model(const std::string& text, const std::map<std::string, Sort>& declared);

}  // namespace faultsym
