#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <numeric>
#include <random>

#include "vra/types.hpp"

using namespace vra;

namespace {
GroupElement random_element(std::mt19937_64& g, long span) {
  std::uniform_int_distribution<long> e(-span, span);
  for (;;) {
    long c = e(g), d = e(g);
    if (std::gcd(c, d) != 1) continue;
    return GroupElement::T(e(g)) * GroupElement::from_bottom_row(c, d);
  }
}

// Independent oracle for sym^d: act on (X^0..X^d) by X -> (dX - b)/(-cX + a)
// with factor (-cX + a)^d, expanded by explicit binomials.
RatMatrix sym_oracle(int deg, long a, long b, long c, long d) {
  RatMatrix m(deg + 1, deg + 1);
  for (int j = 0; j <= deg; ++j) {
    // (dX - b)^j (-cX + a)^(deg - j)
    std::vector<Rational> p(deg + 1);
    for (int s = 0; s <= j; ++s)
      for (int t = 0; t <= deg - j; ++t) {
        Rational term = binomial(j, s) * binomial(deg - j, t);
        for (int u = 0; u < s; ++u) term *= d;
        for (int u = 0; u < j - s; ++u) term *= -b;
        for (int u = 0; u < t; ++u) term *= -c;
        for (int u = 0; u < deg - j - t; ++u) term *= a;
        p[s + t] += term;
      }
    for (int i = 0; i <= deg; ++i) m(i, j) = p[i];
  }
  return m;
}
}  // namespace

TEST_CASE("sym matrices match the explicit expansion") {
  for (int d = 0; d <= 6; ++d) {
    CHECK(sym_matrix(d, GroupElement::S()) == sym_oracle(d, 0, -1, 1, 0));
    CHECK(sym_matrix(d, GroupElement::T()) == sym_oracle(d, 1, 1, 0, 1));
    CHECK(sym_matrix(d, GroupElement(2, 1, 1, 1)) == sym_oracle(d, 2, 1, 1, 1));
  }
  CHECK(sym_matrix(2, GroupElement::T()) == RatMatrix::from_rows({{1, -1, 1}, {0, 1, -2}, {0, 0, 1}}));
}

TEST_CASE("sym(d) satisfies the relations exactly for d <= 12") {
  for (int d = 0; d <= 12; ++d) {
    auto t = make_sym(d);
    CHECK(t->dim == d + 1);
    CHECK(verify_relations(t->S, t->T).empty());
    CHECK((t->S * t->S) == RatMatrix::identity(d + 1) * Rational(d % 2 ? -1 : 1));
  }
}

TEST_CASE("perturbed sym(4) violates a relation") {
  auto t = make_sym(4);
  RatMatrix S = t->S;
  S(0, 0) += Rational(1, 7);
  CHECK(!verify_relations(S, t->T).empty());
  CHECK_THROWS_AS(make_raw(S, t->T), Error);
  try {
    make_raw(S, t->T);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RelationViolation);
  }
}

TEST_CASE("the 23-dimensional example satisfies the relations") {
  auto t0 = std::chrono::steady_clock::now();
  auto t = make_example_type();
  CHECK(t->dim == 23);
  CHECK(verify_relations(t->S, t->T).empty());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 1.0);
  // rho(T) is block diagonal, rho(S) has the period rows on top
  CHECK(t->T.block(0, 1, 1, 22).is_zero());
  CHECK(t->S(0, 1) == Rational(192, 691));
  CHECK(t->S(0, 12) == 0);
  CHECK(t->S(0, 13) == 768);
  CHECK(t->tree->pretty() == "example23");
}

TEST_CASE("evaluate_type is multiplicative") {
  std::mt19937_64 g(99);
  std::vector<TypePtr> types{make_trivial(), make_sym(3), make_dual(make_sym(2)),
                             make_tensor(make_sym(1), make_sym(2)), make_example_type()};
  for (const auto& t : types) {
    for (int i = 0; i < 20; ++i) {
      GroupElement x = random_element(g, 200), y = random_element(g, 200);
      CHECK(evaluate_type(*t, x * y) == evaluate_type(*t, x) * evaluate_type(*t, y));
    }
    CHECK(evaluate_type(*t, GroupElement::S()) == t->S);
    CHECK(evaluate_type(*t, GroupElement::T(-3)) == t->T.inverse().pow(3));
    CHECK(evaluate_type(*t, -GroupElement()) == t->S * t->S);
  }
  for (int i = 0; i < 20; ++i) {
    GroupElement x = random_element(g, 30);
    CHECK(evaluate_type(*make_sym(4), x) ==
          sym_oracle(4, x.a.get_si(), x.b.get_si(), x.c.get_si(), x.d.get_si()));
  }
}

TEST_CASE("(X - Y)^d is an invariant of sym(d) x sym(d)") {
  for (int d = 1; d <= 6; ++d) {
    auto t = make_tensor(make_sym(d), make_sym(d));
    RatVector v((d + 1) * (d + 1));
    // coefficient of X^i Y^(d-i)
    for (int i = 0; i <= d; ++i) v[i * (d + 1) + (d - i)] = binomial(d, i) * ((d - i) % 2 ? -1 : 1);
    CHECK(t->S * v == v);
    CHECK(t->T * v == v);
  }
}

TEST_CASE("dual and sum") {
  auto s = make_sym(3);
  auto d = make_dual(s);
  CHECK((d->S.transpose() * s->S).is_identity());
  auto u = make_direct_sum(make_trivial(), s);
  CHECK(u->dim == 5);
  CHECK(verify_relations(u->S, u->T).empty());
  CHECK(u->tree->pretty() == "sum(triv, sym(3))");
  CHECK(make_tensor(s, d)->tree->pretty() == "tensor(sym(3), dual(sym(3)))");
}

TEST_CASE("invariants from the construction tree") {
  auto i1 = type_invariants(*make_sym(10));
  CHECK(i1.depth == 0);
  CHECK(i1.shift == 10);
  CHECK(i1.pxs == 0);
  auto ie = type_invariants(*make_example_type());
  CHECK(ie.depth == 1);
  CHECK(ie.shift == 10);
  CHECK(ie.pxs == 0);
  auto it = type_invariants(*make_tensor(make_sym(2), make_sym(3)));
  CHECK(it.depth == 0);
  CHECK(it.shift == 5);
  CHECK_THROWS_AS(type_invariants(*make_raw(RatMatrix::identity(1), RatMatrix::identity(1))), Error);
}

TEST_CASE("induction from gamma0(2)") {
  Subgroup h{SubgroupKind::Gamma0, 2};
  auto ind = make_induced(h, make_trivial());
  CHECK(ind->dim == 3);
  CHECK(verify_relations(ind->S, ind->T).empty());
  // permutation matrices; T fixes exactly the identity coset
  CHECK(ind->T(0, 0) == 1);
  int fixed = 0;
  for (int i = 0; i < 3; ++i) fixed += ind->T(i, i) == 1;
  CHECK(fixed == 1);
  auto ind2 = make_induced(h, make_sym(2));
  CHECK(ind2->dim == 9);
  CHECK(verify_relations(ind2->S, ind2->T).empty());
  CHECK(ind2->tree->pretty() == "ind(gamma0(2), sym(2))");
}

TEST_CASE("restricted types evaluate on the subgroup only") {
  Subgroup h{SubgroupKind::Gamma0, 3};
  auto r = make_restricted(make_sym(2), h);
  CHECK(!r->over_sl2z);
  GroupElement g(1, 0, 3, 1);
  CHECK(evaluate_type(*r, g) == sym_matrix(2, g));
  CHECK_THROWS_AS(evaluate_type(*r, GroupElement::S()), Error);
  CHECK_THROWS_AS(make_tensor(r, make_sym(1)), Error);
}

TEST_CASE("small documented examples") {
  auto s0 = make_sym(0);
  CHECK(s0->S == RatMatrix::identity(1));
  CHECK(s0->T == RatMatrix::identity(1));
  CHECK(make_dual(s0)->S == s0->S);
  auto s1 = make_sym(1);
  CHECK(s1->S == RatMatrix::from_rows({{0, 1}, {-1, 0}}));
  CHECK(s1->T == RatMatrix::from_rows({{1, -1}, {0, 1}}));
  CHECK(make_sym(2)->S == RatMatrix::from_rows({{0, 0, 1}, {0, -1, 0}, {1, 0, 0}}));
  auto u = make_direct_sum(make_sym(2), make_sym(4));
  CHECK(u->dim == 8);
  CHECK(u->S.block(0, 3, 3, 5).is_zero());
  CHECK(u->S.block(3, 0, 5, 3).is_zero());
  RatMatrix S = make_sym(2)->S;
  S(0, 0) += 1;
  CHECK(verify_relations(S, make_sym(2)->T) == "S^4 = 1");
  CHECK(evaluate_type(*make_example_type(), GroupElement()).is_identity());
}

TEST_CASE("random words of length <= 12") {
  std::mt19937_64 g(17);
  std::vector<TypePtr> types{make_sym(5), make_example_type(), make_induced({SubgroupKind::Gamma0, 3}, make_sym(1))};
  for (const auto& t : types)
    for (int it = 0; it < 100; ++it) {
      int len = 1 + int(g() % 12);
      GroupElement x;
      RatMatrix m = RatMatrix::identity(t->dim);
      for (int i = 0; i < len; ++i) {
        bool s = g() % 2;
        x = x * (s ? GroupElement::S() : GroupElement::T());
        m = m * (s ? t->S : t->T);
      }
      CHECK(evaluate_type(*t, x) == m);
    }
}
