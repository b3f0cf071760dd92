#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "vra/qseries.hpp"

using namespace vra;

namespace {
// naive divisor sum, independent of the library
long sig(int k, long n) {
  long s = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) {
      long p = 1;
      for (int i = 0; i < k; ++i) p *= d;
      s += p;
    }
  return s;
}

void check_equal(const QSeries& a, const QSeries& b, long upto) {
  for (long n = 0; n <= upto; ++n) CHECK(a.coeff(n) == b.coeff(n));
}
}  // namespace

TEST_CASE("Eisenstein coefficients") {
  auto e2 = classical_qexp("E2", 10);
  CHECK(e2.coeff(0) == 1);
  CHECK(e2.coeff(1) == -24);
  CHECK(e2.coeff(2) == -72);
  auto e4 = classical_qexp("E4", 30), e6 = classical_qexp("E6", 30);
  for (long n = 1; n <= 30; ++n) {
    CHECK(e4.coeff(n) == 240 * sig(3, n));
    CHECK(e6.coeff(n) == -504 * sig(5, n));
  }
  CHECK(e4.weight == 4);
  CHECK_THROWS_AS(classical_qexp("E5", 3), Error);
}

TEST_CASE("Delta from the product, against a naive expansion") {
  auto d = classical_qexp("Delta", 12);
  CHECK(d.coeff(0) == 0);
  CHECK(d.coeff(1) == 1);
  CHECK(d.coeff(2) == -24);
  const long tau[] = {1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944};
  for (long n = 1; n <= 12; ++n) CHECK(d.coeff(n) == tau[n - 1]);
  // naive: multiply (1 - q^n) 24 times each
  std::vector<long> p(6, 0);
  p[0] = 1;
  for (int rep = 0; rep < 24; ++rep)
    for (long n = 1; n < 6; ++n)
      for (long i = 5; i >= n; --i) p[i] -= p[i - n];
  for (long n = 1; n <= 5; ++n) CHECK(d.coeff(n) == p[n - 1]);
}

TEST_CASE("ring layer: E4^3 - E6^2 = 1728 Delta to n = 50") {
  auto e4 = classical_qexp("E4", 50), e6 = classical_qexp("E6", 50), d = classical_qexp("Delta", 50);
  auto lhs = qs_sub(qs_mul(qs_mul(e4, e4), e4), qs_mul(e6, e6));
  CHECK(lhs.weight == 12);
  CHECK(lhs.nmax == 50);
  check_equal(lhs, qs_scale(d, 1728), 50);
  auto e8 = qs_mul(e4, e4);
  CHECK(e8.weight == 8);
  CHECK(e8.coeff(0) == 1);
  for (long n = 1; n <= 20; ++n) CHECK(e8.coeff(n) == 480 * sig(7, n));
  CHECK_THROWS_AS(qs_add(e4, e6), Error);
}

TEST_CASE("zero, shifts and precision") {
  auto e4 = classical_qexp("E4", 20);
  auto z = qs_zero(4, nullptr, 0, 20);
  check_equal(qs_add(e4, z), e4, 20);
  QSeries inv_q = qs_scalar(-12, {1, 24, 324}, -1);  // 1/Delta to three terms
  auto d = classical_qexp("Delta", 10);
  auto prod = qs_mul(inv_q, d);
  CHECK(prod.n0 == 0);
  CHECK(d.n0 == 1);
  CHECK(prod.nmax == 2);
  CHECK(prod.coeff(0) == 1);
  CHECK(prod.coeff(1) == 0);
  CHECK(prod.coeff(2) == 0);
  CHECK_THROWS_AS(prod.at(3), Error);
  CHECK(qs_shift(e4, 2).coeff(2) == 1);
}

TEST_CASE("Serre derivative identities to n = 50") {
  auto e4 = classical_qexp("E4", 50), e6 = classical_qexp("E6", 50), d = classical_qexp("Delta", 50);
  auto de4 = serre_derivative(e4);
  CHECK(de4.weight == 6);
  check_equal(de4, qs_scale(e6, make_q(-1, 3)), 50);
  check_equal(serre_derivative(e6), qs_scale(qs_mul(e4, e4), make_q(-1, 2)), 50);
  CHECK(serre_derivative(d).is_zero());
  // theta Delta = E2 Delta
  check_equal(qs_theta(d), qs_mul(classical_qexp("E2", 50), d), 50);
}

TEST_CASE("Serre derivative is a derivation to n = 30") {
  std::vector<QSeries> fs{classical_qexp("E4", 30), classical_qexp("E6", 30), classical_qexp("Delta", 30)};
  for (const auto& f : fs)
    for (const auto& g : fs) {
      auto lhs = serre_derivative(qs_mul(f, g));
      auto rhs = qs_add(qs_mul(serre_derivative(f), g), qs_mul(f, serre_derivative(g)));
      check_equal(lhs, rhs, 30);
    }
}

TEST_CASE("Ramanujan identities") {
  for (const char* name : {"E2", "E4", "E6"}) {
    auto lhs = qs_theta(classical_qexp(name, 40));
    auto rhs = ramanujan_theta(name, 40);
    check_equal(lhs, rhs, 40);
  }
  CHECK(ramanujan_theta("E2", 3).coeff(1) == -24);
  CHECK(ramanujan_theta("E4", 3).coeff(0) == 0);
}

TEST_CASE("numeric evaluation") {
  auto e4 = classical_qexp("E4", 60);
  auto a = eval_numeric(e4, Complex(0, 1), 40), b = eval_numeric(e4, Complex(0, 1), 60);
  CHECK(std::abs(a.value[0] - 1.455762) < 1e-6);
  CHECK(std::abs(a.value[0] - b.value[0]) < 1e-10);
  CHECK(a.tail < 1e-10);
  auto d = classical_qexp("Delta", 30);
  auto v = eval_numeric(d, Complex(0, 2), 30);
  CHECK(std::abs(v.value[0]) < 4e-6);
  CHECK(std::abs(v.value[0] - std::exp(-4 * M_PI)) < 1e-9);
  auto c = eval_numeric(qs_constant(make_q(3, 2), 5), Complex(0.3, 0.7), 5);
  CHECK(std::abs(c.value[0] - 1.5) < 1e-15);
  CHECK_THROWS_AS(eval_numeric(e4, Complex(0, -1), 10), Error);
}

TEST_CASE("polynomial coefficients and theta") {
  // T q: theta gives (T + 1) q
  QSeries f = qs_zero(0, nullptr, 0, 2);
  f.c[1][0] = Poly(Var::T, {0, 1});
  auto t = qs_theta(f);
  CHECK(t.at(1)[0] == Poly(Var::T, {1, 1}));
  CHECK(infer_denominator(*make_sym(4)) == 1);
  CHECK(infer_denominator(*make_induced({SubgroupKind::Gamma0, 2}, make_trivial())) == 2);
}
