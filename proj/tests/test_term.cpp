#include <doctest.h>

#include <random>

#include "faultsym/term.hpp"

using namespace faultsym;

TEST_SUITE("term")
{
  TEST_CASE("substitute replaces every occurrence and nothing else")
  {
    const Term m = ivar("m");
    const Term n = ivar("n");
    CHECK(substitute(ne(m, n), n, add(n, ival(2))) == ne(m, add(n, ival(2))));
    CHECK(substitute(gt(ivar("x"), ival(0)), ivar("y"), ival(5)) == gt(ivar("x"), ival(0)));
    const Term a = ivar("a");
    const Term bc = mul(ivar("b"), ivar("c"));
    CHECK(substitute(eq(add(a, a), ival(2)), a, bc) == eq(add(bc, bc), ival(2)));
    CHECK_THROWS_AS(substitute(ne(m, n), n, tru()), SortError);
  }

  TEST_CASE("simplify basics")
  {
    const Term p = bvar("p");
    CHECK(simplify(conj({tru(), ne(ivar("m"), ivar("n"))})) == ne(ivar("m"), ivar("n")));
    CHECK(simplify(lnot(lnot(p))) == p);
    CHECK(simplify(conj({eq(ival(3), ival(3)), bvar("q")})) == bvar("q"));
    CHECK(simplify(eq(ivar("e"), ivar("e"))).is_true());
    CHECK(simplify(conj({p, lnot(p)})).is_false());
    CHECK(simplify(disj({p, lnot(p)})).is_true());
    CHECK(simplify(disj({fls(), p})) == p);
    CHECK(simplify(add(ival(2), ival(3))) == ival(5));
  }

  TEST_CASE("euclidean division")
  {
    CHECK(euclid_div(7, 2) == 3);
    CHECK(euclid_div(-7, 2) == -4);
    CHECK(euclid_div(7, -2) == -3);
    CHECK(euclid_div(-7, -2) == 4);
    CHECK(euclid_div(5, 0) == 0);
    for (int a = -9; a <= 9; ++a) {
      for (int b = -4; b <= 4; ++b) {
        if (b == 0) {
          continue;
        }
        const Int q = euclid_div(a, b);
        const Int r = Int(a) - q * b;
        CHECK(r >= 0);
        CHECK(r < abs(Int(b)));
      }
    }
  }

  TEST_CASE("to_string is fully parenthesized")
  {
    CHECK(ne(ivar("m"), add(ivar("n"), ival(2))).to_string() == "(m != (n + 2))");
    CHECK(lnot(bvar("F1@1")).to_string() == "!F1@1");
  }

  TEST_CASE("free variables, conjuncts, divisors")
  {
    const Term t = conj({gt(ivar("x"), ival(0)), bvar("f"), eq(div(ivar("y"), ivar("z")), ival(1))});
    const auto fv = free_vars(t);
    CHECK(fv.size() == 4);
    CHECK(fv.at("f") == Sort::Bool);
    CHECK(conjuncts(t).size() == 3);
    REQUIRE(divisors(t).size() == 1);
    CHECK(divisors(t)[0] == ivar("z"));
  }

  TEST_CASE("term_size stops at the cap")
  {
    const Term t = add(ivar("a"), ivar("b"));
    CHECK(term_size(t, 100) == 3);
    CHECK(term_size(t, 2) == 2);
  }
}

namespace {

// Random formulas over a, b (Int) and p, q (Bool).
class RandomFormula {
 public:
  explicit RandomFormula(unsigned seed) : rng_(seed) {}

  Term boolean(int depth)
  {
    const int r = pick(depth <= 0 ? 3 : 9);
    switch (r) {
      case 0:
        return pick(2) ? bvar("p") : bvar("q");
      case 1:
        return pick(2) ? tru() : fls();
      case 2:
        return cmp(integer(1), integer(1));
      case 3:
      case 4:
        return cmp(integer(depth - 1), integer(depth - 1));
      case 5:
        return lnot(boolean(depth - 1));
      case 6:
        return conj({boolean(depth - 1), boolean(depth - 1), boolean(depth - 1)});
      default:
        return disj({boolean(depth - 1), boolean(depth - 1)});
    }
  }

  Term integer(int depth)
  {
    const int r = pick(depth <= 0 ? 2 : 7);
    switch (r) {
      case 0:
        return ival(pick(7) - 3);
      case 1:
        return pick(2) ? ivar("a") : ivar("b");
      case 2:
        return add(integer(depth - 1), integer(depth - 1));
      case 3:
        return sub(integer(depth - 1), integer(depth - 1));
      case 4:
        return mul(integer(depth - 1), integer(depth - 1));
      case 5:
        return div(integer(depth - 1), integer(depth - 1));
      default:
        return neg(integer(depth - 1));
    }
  }

 private:
  int pick(int n) { return static_cast<int>(rng_() % static_cast<unsigned>(n)); }

  Term cmp(Term l, Term r)
  {
    switch (pick(6)) {
      case 0:
        return eq(l, r);
      case 1:
        return ne(l, r);
      case 2:
        return lt(l, r);
      case 3:
        return gt(l, r);
      case 4:
        return le(l, r);
      default:
        return ge(l, r);
    }
  }

  std::mt19937 rng_;
};

}  // namespace

TEST_SUITE("term")
{
  TEST_CASE("simplify and negate preserve truth on every small assignment")
  {
    for (unsigned seed = 0; seed < 300; ++seed) {
      RandomFormula gen(seed);
      const Term phi = gen.boolean(3);
      const Term s = simplify(phi);
      const Term n = negate(phi);
      for (int a = -4; a <= 4; ++a) {
        for (int b = -4; b <= 4; ++b) {
          for (int pq = 0; pq < 4; ++pq) {
            const Model m{{"a", Int(a)}, {"b", Int(b)}, {"p", (pq & 1) != 0}, {"q", (pq & 2) != 0}};
            const bool v = evaluate_bool(phi, m);
            REQUIRE_MESSAGE(evaluate_bool(s, m) == v, phi.to_string(), " vs ", s.to_string());
            REQUIRE_MESSAGE(evaluate_bool(n, m) == !v, phi.to_string(), " vs ", n.to_string());
          }
        }
      }
    }
  }
}
