#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace faultsym {

/// Unbounded mathematical integer used for every Int-sorted value.
using Int = boost::multiprecision::cpp_int;

enum class Sort { Int, Bool };

enum class Op {
  IntConst,
  BoolConst,
  Var,
  Neg,
  Not,
  Add,
  Sub,
  Mul,
  Div,
  And,
  Or,
  Eq,
  Ne,
  Lt,
  Gt,
  Le,
  Ge,
};

const char* sort_name(Sort s);
const char* op_symbol(Op op);

class SortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable, structurally shared expression node. Terms are cheap to copy
/// and compare structurally (hash first, then recursive).
class Term {
 public:
  /// Defaults to the Bool constant `true`.
  Term();

  static Term int_const(Int v);
  static Term bool_const(bool b);
  static Term var(std::string name, Sort sort);
  /// Builds an operator node, checking operand sorts. And/Or are n-ary.
  static Term make(Op op, std::vector<Term> kids);

  Op op() const;
  Sort sort() const;
  const Int& int_value() const;
  bool bool_value() const;
  const std::string& name() const;
  const std::vector<Term>& kids() const;
  std::size_t hash() const;
  const void* id() const { return node_.get(); }

  bool is_const() const;
  bool is_true() const;
  bool is_false() const;
  bool is_var() const { return op() == Op::Var; }

  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Builders. None of them simplify except where noted.
Term tru();
Term fls();
Term ival(Int v);
Term ivar(const std::string& name);
Term bvar(const std::string& name);
Term neg(Term a);
Term lnot(Term a);
Term add(Term a, Term b);
Term sub(Term a, Term b);
Term mul(Term a, Term b);
Term div(Term a, Term b);
Term eq(Term a, Term b);
Term ne(Term a, Term b);
Term lt(Term a, Term b);
Term gt(Term a, Term b);
Term le(Term a, Term b);
Term ge(Term a, Term b);
/// Conjunction/disjunction of a list; empty list yields true/false. A single
/// element is returned as is.
Term conj(std::vector<Term> xs);
Term disj(std::vector<Term> xs);

using Value = std::variant<Int, bool>;
using Model = std::map<std::string, Value>;
using VarMap = std::unordered_map<std::string, Term>;

std::string value_to_string(const Value& v);

/// Euclidean integer division: remainder is always in [0, |b|). Division by
/// zero is defined as 0 so that formulas are total; executed paths guard
/// every divisor separately.
Int euclid_div(const Int& a, const Int& b);

/// Capture-free substitution of variable `v` by `e`. No simplification.
Term substitute(const Term& phi, const Term& v, const Term& e);
/// Simultaneous substitution keyed by variable name.
Term substitute(const Term& phi, const VarMap& map);

/// Constant folding, double negation, flattening with unit/absorption and
/// complement detection, `e == e`. The result is logically equivalent.
Term simplify(const Term& phi);

/// Negation pushed into comparisons and simplified.
Term negate(const Term& phi);

/// Evaluates under a total assignment; unassigned variables default to 0 /
/// false.
Value evaluate(const Term& t, const Model& m);
bool evaluate_bool(const Term& t, const Model& m);

/// Free variables with their sorts, ordered by name.
std::map<std::string, Sort> free_vars(const Term& t);

/// Conjuncts of a (possibly nested) conjunction.
std::vector<Term> conjuncts(const Term& t);
/// Disjuncts of a (possibly nested) disjunction.
std::vector<Term> disjuncts(const Term& t);

/// Every divisor occurring in `t`, innermost first, deduplicated.
std::vector<Term> divisors(const Term& t);

/// Number of nodes of `t` as a tree (shared subterms counted each time),
/// stopping at `cap`.
std::size_t term_size(const Term& t, std::size_t cap);

}  // namespace faultsym
