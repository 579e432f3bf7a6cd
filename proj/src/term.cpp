#include "faultsym/term.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace faultsym {

struct Term::Node {
  Op op;
  Sort sort;
  Int ival;
  bool bval = false;
  std::string name;
  std::vector<Term> kids;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v)
{
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_int(const Int& v)
{
  const Int low = abs(v) & Int(0xFFFFFFFFFFFFFFFFULL);
  auto h = static_cast<std::size_t>(static_cast<unsigned long long>(low));
  return v.sign() < 0 ? ~h : h;
}

bool is_comparison(Op op)
{
  switch (op) {
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Gt:
    case Op::Le:
    case Op::Ge:
      return true;
    default:
      return false;
  }
}

Op flip_comparison(Op op)
{
  switch (op) {
    case Op::Eq:
      return Op::Ne;
    case Op::Ne:
      return Op::Eq;
    case Op::Lt:
      return Op::Ge;
    case Op::Ge:
      return Op::Lt;
    case Op::Gt:
      return Op::Le;
    case Op::Le:
      return Op::Gt;
    default:
      throw std::logic_error("not a comparison");
  }
}

}  // namespace

const char* sort_name(Sort s) { return s == Sort::Int ? "Int" : "Bool"; }

const char* op_symbol(Op op)
{
  switch (op) {
    case Op::Neg:
      return "-";
    case Op::Not:
      return "!";
    case Op::Add:
      return "+";
    case Op::Sub:
      return "-";
    case Op::Mul:
      return "*";
    case Op::Div:
      return "/";
    case Op::And:
      return "&&";
    case Op::Or:
      return "||";
    case Op::Eq:
      return "==";
    case Op::Ne:
      return "!=";
    case Op::Lt:
      return "<";
    case Op::Gt:
      return ">";
    case Op::Le:
      return "<=";
    case Op::Ge:
      return ">=";
    default:
      return "?";
  }
}

Term::Term() : Term(bool_const(true)) {}

Term Term::int_const(Int v)
{
  auto n = std::make_shared<Node>();
  n->op = Op::IntConst;
  n->sort = Sort::Int;
  n->hash = mix(1, hash_int(v));
  n->ival = std::move(v);
  return Term(std::move(n));
}

Term Term::bool_const(bool b)
{
  static const Term t_true = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::BoolConst;
    n->sort = Sort::Bool;
    n->bval = true;
    n->hash = mix(2, 1);
    return Term(std::move(n));
  }();
  static const Term t_false = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::BoolConst;
    n->sort = Sort::Bool;
    n->bval = false;
    n->hash = mix(2, 0);
    return Term(std::move(n));
  }();
  return b ? t_true : t_false;
}

Term Term::var(std::string name, Sort sort)
{
  if (name.empty()) {
    throw SortError("variable name must not be empty");
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->sort = sort;
  n->hash = mix(mix(3, std::hash<std::string>{}(name)), static_cast<std::size_t>(sort));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::make(Op op, std::vector<Term> kids)
{
  auto require = [&](bool ok, const char* what) {
    if (!ok) {
      throw SortError(std::string("ill-sorted ") + op_symbol(op) + ": " + what);
    }
  };
  Sort sort = Sort::Bool;
  switch (op) {
    case Op::IntConst:
    case Op::BoolConst:
    case Op::Var:
      throw std::logic_error("use the dedicated leaf constructors");
    case Op::Neg:
      require(kids.size() == 1 && kids[0].sort() == Sort::Int, "expects one Int");
      sort = Sort::Int;
      break;
    case Op::Not:
      require(kids.size() == 1 && kids[0].sort() == Sort::Bool, "expects one Bool");
      break;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      require(kids.size() == 2 && kids[0].sort() == Sort::Int && kids[1].sort() == Sort::Int,
              "expects Int x Int");
      sort = Sort::Int;
      break;
    case Op::And:
    case Op::Or:
      require(kids.size() >= 2, "expects at least two operands");
      for (const auto& k : kids) {
        require(k.sort() == Sort::Bool, "expects Bool operands");
      }
      break;
    case Op::Eq:
    case Op::Ne:
      require(kids.size() == 2 && kids[0].sort() == kids[1].sort(), "operand sorts differ");
      break;
    case Op::Lt:
    case Op::Gt:
    case Op::Le:
    case Op::Ge:
      require(kids.size() == 2 && kids[0].sort() == Sort::Int && kids[1].sort() == Sort::Int,
              "expects Int x Int");
      break;
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->sort = sort;
  std::size_t h = mix(4, static_cast<std::size_t>(op));
  for (const auto& k : kids) {
    h = mix(h, k.hash());
  }
  n->hash = h;
  n->kids = std::move(kids);
  return Term(std::move(n));
}

Op Term::op() const { return node_->op; }
Sort Term::sort() const { return node_->sort; }
const Int& Term::int_value() const { return node_->ival; }
bool Term::bool_value() const { return node_->bval; }
const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::kids() const { return node_->kids; }
std::size_t Term::hash() const { return node_->hash; }

bool Term::is_const() const { return op() == Op::IntConst || op() == Op::BoolConst; }
bool Term::is_true() const { return op() == Op::BoolConst && bool_value(); }
bool Term::is_false() const { return op() == Op::BoolConst && !bool_value(); }

bool Term::operator==(const Term& other) const
{
  if (node_ == other.node_) {
    return true;
  }
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.hash != b.hash || a.op != b.op || a.sort != b.sort || a.kids.size() != b.kids.size()) {
    return false;
  }
  switch (a.op) {
    case Op::IntConst:
      return a.ival == b.ival;
    case Op::BoolConst:
      return a.bval == b.bval;
    case Op::Var:
      return a.name == b.name;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (a.kids[i] != b.kids[i]) {
      return false;
    }
  }
  return true;
}

namespace {

void print(std::ostream& os, const Term& t)
{
  switch (t.op()) {
    case Op::IntConst:
      os << t.int_value();
      return;
    case Op::BoolConst:
      os << (t.bool_value() ? "true" : "false");
      return;
    case Op::Var:
      os << t.name();
      return;
    case Op::Neg:
    case Op::Not:
      os << op_symbol(t.op());
      print(os, t.kids()[0]);
      return;
    default:
      break;
  }
  os << '(';
  for (std::size_t i = 0; i < t.kids().size(); ++i) {
    if (i > 0) {
      os << ' ' << op_symbol(t.op()) << ' ';
    }
    print(os, t.kids()[i]);
  }
  os << ')';
}

}  // namespace

std::string Term::to_string() const
{
  std::ostringstream os;
  print(os, *this);
  return os.str();
}

Term tru() { return Term::bool_const(true); }
Term fls() { return Term::bool_const(false); }
Term ival(Int v) { return Term::int_const(std::move(v)); }
Term ivar(const std::string& name) { return Term::var(name, Sort::Int); }
Term bvar(const std::string& name) { return Term::var(name, Sort::Bool); }
Term neg(Term a) { return Term::make(Op::Neg, {std::move(a)}); }
Term lnot(Term a) { return Term::make(Op::Not, {std::move(a)}); }
Term add(Term a, Term b) { return Term::make(Op::Add, {std::move(a), std::move(b)}); }
Term sub(Term a, Term b) { return Term::make(Op::Sub, {std::move(a), std::move(b)}); }
Term mul(Term a, Term b) { return Term::make(Op::Mul, {std::move(a), std::move(b)}); }
Term div(Term a, Term b) { return Term::make(Op::Div, {std::move(a), std::move(b)}); }
Term eq(Term a, Term b) { return Term::make(Op::Eq, {std::move(a), std::move(b)}); }
Term ne(Term a, Term b) { return Term::make(Op::Ne, {std::move(a), std::move(b)}); }
Term lt(Term a, Term b) { return Term::make(Op::Lt, {std::move(a), std::move(b)}); }
Term gt(Term a, Term b) { return Term::make(Op::Gt, {std::move(a), std::move(b)}); }
Term le(Term a, Term b) { return Term::make(Op::Le, {std::move(a), std::move(b)}); }
Term ge(Term a, Term b) { return Term::make(Op::Ge, {std::move(a), std::move(b)}); }

Term conj(std::vector<Term> xs)
{
  if (xs.empty()) {
    return tru();
  }
  if (xs.size() == 1) {
    return xs[0];
  }
  return Term::make(Op::And, std::move(xs));
}

Term disj(std::vector<Term> xs)
{
  if (xs.empty()) {
    return fls();
  }
  if (xs.size() == 1) {
    return xs[0];
  }
  return Term::make(Op::Or, std::move(xs));
}

std::string value_to_string(const Value& v)
{
  if (const auto* i = std::get_if<Int>(&v)) {
    return i->str();
  }
  return std::get<bool>(v) ? "true" : "false";
}

Int euclid_div(const Int& a, const Int& b)
{
  if (b == 0) {
    return 0;
  }
  Int r = a % b;
  if (r < 0) {
    r += abs(b);
  }
  return (a - r) / b;
}

namespace {

Term rebuild(const Term& t, std::vector<Term> kids)
{
  bool same = true;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (kids[i].id() != t.kids()[i].id()) {
      same = false;
      break;
    }
  }
  return same ? t : Term::make(t.op(), std::move(kids));
}

template <typename Leaf>
Term subst_impl(const Term& phi, Leaf&& leaf)
{
  std::unordered_map<const void*, Term> memo;
  std::function<Term(const Term&)> go = [&](const Term& t) -> Term {
    if (t.op() == Op::Var) {
      return leaf(t);
    }
    if (t.kids().empty()) {
      return t;
    }
    if (auto it = memo.find(t.id()); it != memo.end()) {
      return it->second;
    }
    std::vector<Term> kids;
    kids.reserve(t.kids().size());
    for (const auto& k : t.kids()) {
      kids.push_back(go(k));
    }
    Term r = rebuild(t, std::move(kids));
    memo.emplace(t.id(), r);
    return r;
  };
  return go(phi);
}

}  // namespace

Term substitute(const Term& phi, const Term& v, const Term& e)
{
  if (!v.is_var()) {
    throw SortError("substitution target is not a variable");
  }
  if (v.sort() != e.sort()) {
    throw SortError("cannot substitute " + std::string(sort_name(e.sort())) + " term for " +
                    sort_name(v.sort()) + " variable " + v.name());
  }
  return subst_impl(phi, [&](const Term& x) { return x == v ? e : x; });
}

Term substitute(const Term& phi, const VarMap& map)
{
  return subst_impl(phi, [&](const Term& x) {
    auto it = map.find(x.name());
    if (it == map.end()) {
      return x;
    }
    if (it->second.sort() != x.sort()) {
      throw SortError("cannot substitute " + std::string(sort_name(it->second.sort())) +
                      " term for " + sort_name(x.sort()) + " variable " + x.name());
    }
    return it->second;
  });
}

namespace {

class Simplifier {
 public:
  Term run(const Term& t)
  {
    if (t.kids().empty()) {
      return t;
    }
    if (auto it = memo_.find(t.id()); it != memo_.end()) {
      return it->second;
    }
    std::vector<Term> kids;
    kids.reserve(t.kids().size());
    for (const auto& k : t.kids()) {
      kids.push_back(run(k));
    }
    Term r = step(t, std::move(kids));
    memo_.emplace(t.id(), r);
    return r;
  }

  // Simplifies an operator node whose kids are already simplified.
  Term step(const Term& orig, std::vector<Term> kids)
  {
    const Op op = orig.op();
    switch (op) {
      case Op::Neg:
        if (kids[0].op() == Op::IntConst) {
          return ival(-kids[0].int_value());
        }
        if (kids[0].op() == Op::Neg) {
          return kids[0].kids()[0];
        }
        return rebuild(orig, std::move(kids));
      case Op::Not:
        return negated(kids[0]);
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
        return arith(orig, std::move(kids));
      case Op::And:
      case Op::Or:
        return junction(op, std::move(kids));
      default:
        return compare(orig, std::move(kids));
    }
  }

  // Negation of an already simplified formula.
  Term negated(const Term& k)
  {
    if (k.op() == Op::BoolConst) {
      return Term::bool_const(!k.bool_value());
    }
    if (k.op() == Op::Not) {
      return k.kids()[0];
    }
    if (is_comparison(k.op()) && k.kids()[0].sort() == Sort::Int) {
      return Term::make(flip_comparison(k.op()), k.kids());
    }
    if ((k.op() == Op::Eq || k.op() == Op::Ne) && k.kids()[0].sort() == Sort::Bool) {
      return Term::make(flip_comparison(k.op()), k.kids());
    }
    return lnot(k);
  }

 private:
  Term arith(const Term& orig, std::vector<Term> kids)
  {
    const Term& a = kids[0];
    const Term& b = kids[1];
    const bool ca = a.op() == Op::IntConst;
    const bool cb = b.op() == Op::IntConst;
    if (ca && cb) {
      const Int& x = a.int_value();
      const Int& y = b.int_value();
      switch (orig.op()) {
        case Op::Add:
          return ival(x + y);
        case Op::Sub:
          return ival(x - y);
        case Op::Mul:
          return ival(x * y);
        default:
          return ival(euclid_div(x, y));
      }
    }
    switch (orig.op()) {
      case Op::Add:
        if (ca && a.int_value() == 0) {
          return b;
        }
        if (cb && b.int_value() == 0) {
          return a;
        }
        break;
      case Op::Sub:
        if (cb && b.int_value() == 0) {
          return a;
        }
        if (a == b) {
          return ival(0);
        }
        break;
      case Op::Mul:
        if ((ca && a.int_value() == 0) || (cb && b.int_value() == 0)) {
          return ival(0);
        }
        if (ca && a.int_value() == 1) {
          return b;
        }
        if (cb && b.int_value() == 1) {
          return a;
        }
        break;
      case Op::Div:
        if (cb && b.int_value() == 1) {
          return a;
        }
        if (cb && b.int_value() == 0) {
          return ival(0);
        }
        break;
      default:
        break;
    }
    return rebuild(orig, std::move(kids));
  }

  Term compare(const Term& orig, std::vector<Term> kids)
  {
    const Op op = orig.op();
    const Term& a = kids[0];
    const Term& b = kids[1];
    if (a.is_const() && b.is_const()) {
      if (a.sort() == Sort::Bool) {
        const bool same = a.bool_value() == b.bool_value();
        return Term::bool_const(op == Op::Eq ? same : !same);
      }
      const Int& x = a.int_value();
      const Int& y = b.int_value();
      switch (op) {
        case Op::Eq:
          return Term::bool_const(x == y);
        case Op::Ne:
          return Term::bool_const(x != y);
        case Op::Lt:
          return Term::bool_const(x < y);
        case Op::Gt:
          return Term::bool_const(x > y);
        case Op::Le:
          return Term::bool_const(x <= y);
        default:
          return Term::bool_const(x >= y);
      }
    }
    if (a == b) {
      return Term::bool_const(op == Op::Eq || op == Op::Le || op == Op::Ge);
    }
    if (a.sort() == Sort::Bool) {
      // (p == true) -> p, (p != true) -> !p, and so on.
      const Term* c = a.is_const() ? &a : (b.is_const() ? &b : nullptr);
      if (c != nullptr) {
        const Term& other = a.is_const() ? b : a;
        const bool positive = (op == Op::Eq) == c->bool_value();
        return positive ? other : negated(other);
      }
    }
    return rebuild(orig, std::move(kids));
  }

  Term junction(Op op, std::vector<Term> kids)
  {
    const bool is_and = op == Op::And;
    const Term unit = Term::bool_const(is_and);
    const Term zero = Term::bool_const(!is_and);

    std::vector<Term> flat;
    std::unordered_set<Term, TermHash> seen;
    std::function<void(const Term&)> push = [&](const Term& k) {
      if (k.op() == op) {
        for (const auto& kk : k.kids()) {
          push(kk);
        }
        return;
      }
      if (seen.insert(k).second) {
        flat.push_back(k);
      }
    };
    for (const auto& k : kids) {
      push(k);
    }

    std::vector<Term> out;
    for (const auto& k : flat) {
      if (k == zero) {
        return zero;
      }
      if (k == unit) {
        continue;
      }
      if (seen.count(negated(k)) != 0) {
        return zero;  // p and !p together
      }
      out.push_back(k);
    }

    // Absorption: p && (p || q) -> p, p || (p && q) -> p.
    const Op dual = is_and ? Op::Or : Op::And;
    std::vector<Term> kept;
    for (const auto& k : out) {
      bool absorbed = false;
      if (k.op() == dual) {
        for (const auto& kk : k.kids()) {
          if (kk.op() != dual && seen.count(kk) != 0) {
            absorbed = true;
            break;
          }
        }
      }
      if (!absorbed) {
        kept.push_back(k);
      }
    }
    if (kept.empty()) {
      return unit;
    }
    if (kept.size() == 1) {
      return kept[0];
    }
    return Term::make(op, std::move(kept));
  }

  std::unordered_map<const void*, Term> memo_;
};

}  // namespace

Term simplify(const Term& phi) { return Simplifier().run(phi); }

Term negate(const Term& phi)
{
  Simplifier s;
  return s.negated(s.run(phi));
}

Value evaluate(const Term& t, const Model& m)
{
  std::unordered_map<const void*, Value> memo;
  std::function<Value(const Term&)> go = [&](const Term& x) -> Value {
    switch (x.op()) {
      case Op::IntConst:
        return x.int_value();
      case Op::BoolConst:
        return x.bool_value();
      case Op::Var: {
        auto it = m.find(x.name());
        if (it != m.end()) {
          return it->second;
        }
        return x.sort() == Sort::Int ? Value(Int(0)) : Value(false);
      }
      default:
        break;
    }
    if (auto it = memo.find(x.id()); it != memo.end()) {
      return it->second;
    }
    Value r;
    auto I = [&](std::size_t i) { return std::get<Int>(go(x.kids()[i])); };
    auto B = [&](std::size_t i) { return std::get<bool>(go(x.kids()[i])); };
    switch (x.op()) {
      case Op::Neg:
        r = Int(-I(0));
        break;
      case Op::Not:
        r = !B(0);
        break;
      case Op::Add:
        r = Int(I(0) + I(1));
        break;
      case Op::Sub:
        r = Int(I(0) - I(1));
        break;
      case Op::Mul:
        r = Int(I(0) * I(1));
        break;
      case Op::Div:
        r = euclid_div(I(0), I(1));
        break;
      case Op::And: {
        bool all = true;
        for (std::size_t i = 0; i < x.kids().size(); ++i) {
          all = B(i) && all;
        }
        r = all;
        break;
      }
      case Op::Or: {
        bool any = false;
        for (std::size_t i = 0; i < x.kids().size(); ++i) {
          any = B(i) || any;
        }
        r = any;
        break;
      }
      case Op::Eq:
      case Op::Ne: {
        const bool same = go(x.kids()[0]) == go(x.kids()[1]);
        r = x.op() == Op::Eq ? same : !same;
        break;
      }
      case Op::Lt:
        r = I(0) < I(1);
        break;
      case Op::Gt:
        r = I(0) > I(1);
        break;
      case Op::Le:
        r = I(0) <= I(1);
        break;
      case Op::Ge:
        r = I(0) >= I(1);
        break;
      default:
        throw std::logic_error("unexpected op in evaluate");
    }
    memo.emplace(x.id(), r);
    return r;
  };
  return go(t);
}

bool evaluate_bool(const Term& t, const Model& m) { return std::get<bool>(evaluate(t, m)); }

std::map<std::string, Sort> free_vars(const Term& t)
{
  std::map<std::string, Sort> out;
  std::unordered_set<const void*> seen;
  std::function<void(const Term&)> go = [&](const Term& x) {
    if (x.is_var()) {
      out.emplace(x.name(), x.sort());
      return;
    }
    if (x.kids().empty() || !seen.insert(x.id()).second) {
      return;
    }
    for (const auto& k : x.kids()) {
      go(k);
    }
  };
  go(t);
  return out;
}

std::vector<Term> conjuncts(const Term& t)
{
  if (t.op() != Op::And) {
    return {t};
  }
  std::vector<Term> out;
  for (const auto& k : t.kids()) {
    auto sub = conjuncts(k);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::vector<Term> disjuncts(const Term& t)
{
  if (t.op() != Op::Or) {
    return {t};
  }
  std::vector<Term> out;
  for (const auto& k : t.kids()) {
    auto sub = disjuncts(k);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::vector<Term> divisors(const Term& t)
{
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  std::unordered_set<const void*> visited;
  std::function<void(const Term&)> go = [&](const Term& x) {
    if (x.kids().empty() || !visited.insert(x.id()).second) {
      return;
    }
    for (const auto& k : x.kids()) {
      go(k);
    }
    if (x.op() == Op::Div && seen.insert(x.kids()[1]).second) {
      out.push_back(x.kids()[1]);
    }
  };
  go(t);
  return out;
}

}  // namespace faultsym

namespace faultsym {

std::size_t term_size(const Term& t, std::size_t cap)
{
  std::size_t n = 0;
  std::vector<const Term*> todo{&t};
  while (!todo.empty() && n < cap) {
    const Term* x = todo.back();
    todo.pop_back();
    ++n;
    for (const auto& k : x->kids()) {
      todo.push_back(&k);
    }
  }
  return n;
}

}  // namespace faultsym
