#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>

#include "vra/recursion.hpp"
#include "vra/structure.hpp"

using namespace vra;

namespace {

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

bool same_coeffs(const QSeries& a, const QSeries& b, long upto) {
  for (long n = std::min(a.n0, b.n0); n <= upto; ++n)
    if (a.at(n) != b.at(n)) return false;
  return true;
}

QSeries seeds_of(const QSeries& f, long upto) { return qs_truncate(f, upto); }

// f^(n)(tau0) by the trapezoidal Cauchy formula on a circle
Complex cauchy_derivative(const QSeries& f, Complex tau0, int n, double radius, long n_cut) {
  const int N = 64;
  Complex s = 0;
  for (int j = 0; j < N; ++j) {
    Complex w = std::polar(1.0, 2 * M_PI * j / N);
    s += eval_numeric(f, tau0 + radius * w, n_cut).value[0] * std::pow(w, -n);
  }
  double fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  return s * fact / (N * std::pow(radius, n));
}

}  // namespace

TEST_CASE("quasimodular polynomials differentiate like their series") {
  const long nc = 30;
  for (const QMPoly& p : {QMPoly::E(2), QMPoly::E(4), QMPoly::E(6), QMPoly::E(2) * QMPoly::E(2) * QMPoly::E(4),
                          QMPoly::E(4) * QMPoly::E(6) + QMPoly::E(2) * make_q(3, 7)}) {
    QSeries lhs = p.theta().series(nc);
    QSeries rhs = qs_theta(p.series(nc));
    rhs.weight = 0;
    CHECK(same_coeffs(lhs, rhs, nc));
  }
  CHECK(QMPoly().theta().is_zero());
  CHECK(QMPoly::constant(5).theta().is_zero());
}

TEST_CASE("MLDE search") {
  MLDE e4 = find_mlde(classical_qexp("E4", 40), 3, 24);
  CHECK(e4.r == 1);
  CHECK(e4.l == 6);
  CHECK_FALSE(e4.g0_zero);
  CHECK(e4.g[1] == QMPoly::E(4));
  CHECK(e4.g[0] == QMPoly::E(6) * make_q(1, 3));
  CHECK(e4.verified_to == 40);

  MLDE dl = find_mlde(classical_qexp("Delta", 40), 3, 24);
  CHECK(dl.r == 1);
  CHECK(dl.g0_zero);
  CHECK(dl.g[1] == QMPoly::constant(1));

  MLDE e6 = find_mlde(classical_qexp("E6", 40), 3, 24);
  CHECK(e6.r == 1);
  CHECK(e6.l == 8);
  CHECK(e6.g[1] == QMPoly::E(6));
  CHECK(e6.g[0] == QMPoly::E(4) * QMPoly::E(4) * make_q(1, 2));

  CHECK_THROWS_AS(find_mlde(classical_qexp("E4", 4), 3, 24), Error);
  CHECK_THROWS_AS(find_mlde(classical_qexp("E4", 40), 1, 4), Error);
}

TEST_CASE("theta form") {
  MLDE e4 = find_mlde(classical_qexp("E4", 30), 2, 12);
  REQUIRE(e4.h.size() == 2);
  CHECK(e4.h[1] == QMPoly::E(4));
  CHECK(e4.h[0] == (QMPoly::E(6) - QMPoly::E(2) * QMPoly::E(4)) * make_q(1, 3));
  CHECK(apply_theta_form(e4, classical_qexp("E4", 30)).is_zero());

  MLDE triv;
  triv.k = 4;
  triv.r = 1;
  triv.g = {QMPoly(), QMPoly()};
  for (const auto& h : expand_quasimodular(triv)) CHECK(h.is_zero());

  MLDE w0;
  w0.k = 0;
  w0.r = 1;
  w0.g = {QMPoly::E(4), QMPoly::constant(1)};
  auto h = expand_quasimodular(w0);
  CHECK(h[0] == w0.g[0]);
  CHECK(h[1] == w0.g[1]);
}

TEST_CASE("Fourier recursion") {
  QSeries e4 = classical_qexp("E4", 30);
  MLDE m = find_mlde(e4, 2, 12);
  QSeries ext = fourier_recursion(m, seeds_of(e4, 0), 30);
  CHECK(ext.coeff(0) == 1);
  for (long n = 1; n <= 30; ++n) CHECK(ext.coeff(n) == 240 * sig(3, n));
  QSeries far = fourier_recursion(m, seeds_of(e4, 0), 150);
  CHECK(same_coeffs(far, classical_qexp("E4", 150), 150));

  for (QSeries f : {classical_qexp("E6", 60), classical_qexp("Delta", 60),
                    qs_mul(classical_qexp("Delta", 60), classical_qexp("E4", 60))}) {
    MLDE mf = find_mlde(f, 3, 30);
    long last = last_indicial_root(mf, f.n0, 60);
    QSeries s = seeds_of(f, std::max(last, f.n0));
    QSeries g = fourier_recursion(mf, s, 60);
    CHECK(same_coeffs(g, f, 60));
  }

  // constants propagate
  QSeries one = qs_constant(1, 20);
  one.weight = 0;
  MLDE mc = find_mlde(one, 2, 4);
  QSeries c = fourier_recursion(mc, qs_truncate(one, 0), 20);
  CHECK(same_coeffs(c, one, 20));

  // too few seeds for Delta: the indicial polynomial vanishes at 1
  QSeries dl = classical_qexp("Delta", 20);
  MLDE md = find_mlde(dl, 2, 12);
  QSeries z = qs_zero(12, nullptr, 0, 0);
  CHECK_THROWS_AS(fourier_recursion(md, z, 10), Error);
}

TEST_CASE("Fourier recursion on Kuga-Shimura elements of sym^2") {
  auto basis = kuga_shimura_basis(12, 2, 40);
  int checked = 0;
  for (const auto& e : basis) {
    MLDE m = find_mlde(e.F, 4, 40);
    CHECK(m.r <= 3);
    long last = last_indicial_root(m, e.F.n0, 40);
    QSeries g = fourier_recursion(m, qs_truncate(e.F, std::max(last, e.F.n0)), 40);
    CHECK(same_coeffs(g, e.F, 40));
    ++checked;
  }
  CHECK(checked == 4);

  // rank of the coefficient family stabilizes
  QSeries F = basis[0].F;
  MLDE m = find_mlde(F, 4, 40);
  QSeries g = fourier_recursion(m, qs_truncate(F, std::max(last_indicial_root(m, F.n0, 40), F.n0)), 120);
  int prev = 0;
  std::vector<int> ranks;
  for (long N : {5L, 10L, 20L, 40L, 80L, 120L}) {
    int r = rational_span_dim(coefficient_family(g, N));
    CHECK(r >= prev);
    prev = r;
    ranks.push_back(r);
  }
  CHECK(ranks[3] == ranks[4]);
  CHECK(ranks[4] == ranks[5]);
  CHECK(ranks.back() <= 9);
}

TEST_CASE("rational span") {
  QSeries e4 = classical_qexp("E4", 200);
  MLDE m = find_mlde(classical_qexp("E4", 30), 2, 12);
  QSeries g = fourier_recursion(m, qs_truncate(e4, 0), 200);
  CHECK(rational_span_dim(coefficient_family(e4, 50)) == 1);
  CHECK(rational_span_dim(coefficient_family(g, 100)) == rational_span_dim(coefficient_family(g, 200)));
  CHECK(rational_span_dim({}) == 0);
  CHECK(rational_span_dim({{Poly(Var::T)}, {Poly(Var::T)}}) == 0);
}

TEST_CASE("Fourier recursion runtime grows at most quadratically") {
  MLDE m = find_mlde(classical_qexp("E4", 30), 2, 12);
  QSeries seed = qs_truncate(classical_qexp("E4", 1), 0);
  auto run = [&](long n) {
    auto t0 = std::chrono::steady_clock::now();
    QSeries g = fourier_recursion(m, seed, n);
    auto t1 = std::chrono::steady_clock::now();
    CHECK(g.coeff(n) == 240 * sig(3, n));
    return std::chrono::duration<double>(t1 - t0).count();
  };
  run(200);
  double a = run(1000), b = run(2000);
  MESSAGE("n=1000: " << a << " s, n=2000: " << b << " s");
  CHECK(b / a < 6.0);
}

TEST_CASE("Taylor recursion") {
  const long nc = 120;
  QSeries e4 = classical_qexp("E4", nc);
  MLDE m = find_mlde(classical_qexp("E4", 30), 2, 12);
  const Complex tau0(0, 2);
  auto seeds = taylor_seeds(e4, tau0, 1, nc);
  TaylorSeries ts = taylor_recursion(m, tau0, seeds, 8);
  CHECK(ts.a[0][0] == seeds[0][0]);
  for (int n = 0; n <= 8; ++n) {
    Complex want = cauchy_derivative(e4, tau0, n, 0.5, nc);
    Complex got = ts.derivative(n)[0];
    CHECK(std::abs(got - want) / std::abs(want) < 1e-6);
  }
  // Taylor coefficients are normalized as c = (2 pi i)^n f^(n)
  Complex c3 = ts.coefficient(3)[0], d3 = ts.derivative(3)[0];
  CHECK(std::abs(c3 - std::pow(Complex(0, 2 * M_PI), 3) * d3) < 1e-9 * std::abs(c3));

  // n = 0 only: the seed itself
  TaylorSeries t0 = taylor_recursion(m, tau0, seeds, 0);
  REQUIRE(t0.a.size() == 1);
  CHECK(t0.a[0][0] == seeds[0][0]);

  // E6 vanishes at i, and so does the leading coefficient of its equation
  QSeries e6 = classical_qexp("E6", nc);
  CHECK(std::abs(eval_numeric(e6, Complex(0, 1), nc).value[0]) < 1e-8);
  MLDE m6 = find_mlde(classical_qexp("E6", 30), 2, 12);
  CHECK_THROWS_AS(taylor_recursion(m6, Complex(0, 1), taylor_seeds(e6, Complex(0, 1), 1, nc), 5), Error);
  // the recursion equations still hold with Cauchy data at i
  auto ev = eisenstein_values(Complex(0, 1));
  std::vector<Complex> a;
  for (int n = 0; n <= 4; ++n)
    a.push_back(cauchy_derivative(e6, Complex(0, 1), n, 0.4, nc) / std::pow(Complex(0, 2 * M_PI), n));
  for (int N = 0; N <= 3; ++N) {
    Complex s = 0;
    for (int j = 0; j <= 1; ++j) {
      QMPoly p = m6.h[size_t(j)];
      std::vector<Complex> hc;
      for (int n = 0; n <= N; ++n) {
        hc.push_back(p.eval(ev[0], ev[1], ev[2]));
        p = p.theta();
      }
      for (int mm = 0; mm <= N; ++mm) s += binomial(N, mm).get_d() * hc[size_t(N - mm)] * a[size_t(mm + j)];
    }
    CHECK(std::abs(s) < 1e-6);
  }
  // E6 away from i
  TaylorSeries t6 = taylor_recursion(m6, tau0, taylor_seeds(e6, tau0, 1, nc), 6);
  for (int n = 0; n <= 6; ++n) {
    Complex want = cauchy_derivative(e6, tau0, n, 0.5, nc);
    CHECK(std::abs(t6.derivative(n)[0] - want) / std::abs(want) < 1e-6);
  }
}
