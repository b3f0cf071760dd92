// One line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "vra/analytic.hpp"
#include "vra/cohomology.hpp"
#include "vra/recursion.hpp"
#include "vra/structure.hpp"

using namespace vra;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Check {
  bool ok = true;
  std::ostringstream why;
  void require(bool c, const std::string& what) {
    if (!c && ok) why << what;
    ok = ok && c;
  }
};

int failures = 0;

void report(int id, const std::string& name, const std::function<void(Check&, std::ostream&)>& body) {
  Check c;
  std::ostringstream info;
  auto t0 = Clock::now();
  try {
    body(c, info);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  double secs = since(t0);
  failures += !c.ok;
  std::cout << (c.ok ? "PASS" : "FAIL") << " " << id << " " << name << " [" << std::fixed << std::setprecision(2)
            << secs << " s] " << std::defaultfloat << std::setprecision(4) << info.str();
  if (!c.ok) std::cout << " -- " << c.why.str();
  std::cout << std::endl;
}

RatMatrix pow4(const RatMatrix& m) { return m * m * m * m; }

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

int cusp_dim_level1(int k) {
  if (k < 12 || k % 2) return 0;
  return k / 12 + (k % 12 == 2 ? 0 : 1) - 1;
}

// Period polynomials of the weight 12 cusp form, as X^0..X^10 coefficients.
RatVector reference_phi_plus() {
  return {make_q(192, 691), 0, make_q(-16, 3), 0, 16, 0, -16, 0, make_q(16, 3), 0, make_q(-192, 691)};
}
RatVector reference_phi_minus() { return {0, 768, 0, -4800, 0, 8064, 0, -4800, 0, 768, 0}; }

// g -> [[rho(g)^-1, phi(g)], [0, 1]] reverses products; its transpose must
// satisfy the defining relations exactly when phi is a cocycle.
bool affine_relations_hold(const TypePtr& host, const RatVector& valS, const RatVector& valT) {
  int n = host->dim;
  auto lift = [&](const RatMatrix& inv, const RatVector& v) {
    RatMatrix m(n + 1, n + 1);
    m.set_block(0, 0, inv);
    for (int i = 0; i < n; ++i) m(i, n) = v[size_t(i)];
    m(n, n) = 1;
    return m.transpose();
  };
  RatMatrix S = lift(host->S.inverse(), valS), T = lift(host->T.inverse(), valT);
  RatMatrix S2 = S * S, ST = S * T, I = RatMatrix::identity(n + 1);
  return pow4(S) == I && ST * ST * ST == S2 && S2 * T == T * S2;
}

// F(i) for a sym^d series in Xt-coordinates, as X^j coefficients.
std::vector<Complex> sym_values_at(const QSeries& F, Complex tau, long n_cut) {
  std::vector<Complex> v = eval_numeric(F, tau, n_cut).value;
  Complex s = 1;
  for (auto& x : v) {
    x *= s;
    s *= Complex(0, 2 * M_PI);
  }
  return v;
}

// sum_n |c_n|(|T|) |q|^n (2 pi)^j, maximized over components j. Some basis
// elements vanish at i, so residuals are measured against this.
double majorant(const QSeries& F, Complex tau, long n_cut) {
  double aT = std::abs(2 * M_PI * tau), aq = std::exp(-2 * M_PI * tau.imag()), m = 0;
  for (int j = 0; j < F.dim(); ++j) {
    double s = 0;
    for (long n = F.n0; n <= n_cut; ++n) {
      double p = 0;
      const auto& cs = F.c[size_t(n - F.n0)][size_t(j)].coeffs();
      for (size_t t = cs.size(); t-- > 0;) p = p * aT + std::abs(cs[t].get_d());
      s += p * std::pow(aq, double(n));
    }
    m = std::max(m, s * std::pow(2 * M_PI, j));
  }
  return m;
}

// Covariance under S at the fixed point i: P(X) = i^-k X^d P(-1/X), i.e.
// p_j = i^-k (-1)^(d-j) p_(d-j).
double s_covariance_at_i(const QSeries& F, int k, long n_cut) {
  auto p = sym_values_at(F, Complex(0, 1), n_cut);
  const int d = int(p.size()) - 1;
  Complex f = std::pow(Complex(0, 1), -k);
  double num = 0;
  for (int j = 0; j <= d; ++j)
    num = std::max(num, std::abs(p[size_t(j)] - f * ((d - j) % 2 ? -1.0 : 1.0) * p[size_t(d - j)]));
  return num / majorant(F, Complex(0, 1), n_cut);
}

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

double rel(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double d = 0, s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(b[i]));
  }
  return d / s;
}

// -f(tau) (X - tau)^m as X^i coefficients
std::vector<Complex> kernel_times(int m, Complex tau, Complex f) {
  std::vector<Complex> out;
  for (int i = 0; i <= m; ++i) out.push_back(-f * binomial(m, i).get_d() * std::pow(-tau, m - i));
  return out;
}

void criterion1(Check& c, std::ostream& info) {
  auto t0 = Clock::now();
  TypePtr ex = make_example_type();
  const RatMatrix &S = ex->S, &T = ex->T;
  RatMatrix I = RatMatrix::identity(23), S2 = S * S, ST = S * T;
  c.require(ex->dim == 23, "dimension");
  c.require(pow4(S) == I, "S^4 != 1");
  c.require(ST * ST * ST == S2, "(ST)^3 != S^2");
  c.require(S2 * S == S * S2 && S2 * T == T * S2, "S^2 not central");
  double secs = since(t0);
  c.require(secs < 1.0, "slower than 1 s");
  // the first row and the sym^10 blocks
  RatVector pp = reference_phi_plus(), pm = reference_phi_minus();
  bool row = S(0, 0) == 1;
  for (int j = 0; j < 11; ++j) row = row && S(0, 1 + j) == pp[size_t(j)] && S(0, 12 + j) == pm[size_t(j)];
  c.require(row, "first row of rho(S) differs from the period polynomials");
  TypePtr blk = make_dual(make_sym(10));
  c.require(S.block(1, 1, 11, 11) == blk->S && S.block(12, 12, 11, 11) == blk->S, "S blocks");
  c.require(T.block(1, 1, 11, 11) == blk->T && T.block(12, 12, 11, 11) == blk->T && T(0, 0) == 1, "T blocks");
  info << "build+verify " << secs << " s";
}

void criterion2(Check& c, std::ostream& info) {
  auto t0 = Clock::now();
  for (int k : {12, 16, 18, 20, 22, 26}) {
    CohomologyBasis b = cocycle_space(make_sym(k - 2));
    c.require(b.dim_h1_par() == 2 * cusp_dim_level1(k), "dim H^1_par for k = " + std::to_string(k));
  }
  TypePtr s10 = make_sym(10);
  RatVector zero(11);
  Cocycle p{s10, reference_phi_plus(), zero}, m{s10, reference_phi_minus(), zero};
  c.require(affine_relations_hold(s10, p.valS, zero) && affine_relations_hold(s10, m.valS, zero),
            "period vectors violate the cocycle relations");
  c.require(cocycle_verify(p) && cocycle_verify(m), "cocycle_verify");
  CohomologyBasis b = cocycle_space(s10);
  RatVector cp = class_coordinates(b, p), cm = class_coordinates(b, m);
  RatMatrix two(2, int(cp.size()));
  for (size_t i = 0; i < cp.size(); ++i) {
    two(0, int(i)) = cp[i];
    two(1, int(i)) = cm[i];
  }
  c.require(two.rank() == 2, "phi_+ and phi_- dependent mod B^1");
  double secs = since(t0);
  c.require(secs < 5.0, "slower than 5 s");
  info << "dims 2,2,2,2,2,2; total " << secs << " s";
}

void criterion3(Check& c, std::ostream& info) {
  double worst = 0;
  for (auto [k, d, want] : {std::tuple{12, 2, 4}, std::tuple{16, 10, 19}}) {
    const long prec = 24;
    auto basis = kuga_shimura_basis(k, d, prec);
    c.require(long(basis.size()) == want, "basis size for k = " + std::to_string(k));
    std::vector<QSeries> fs;
    for (const auto& e : basis) fs.push_back(e.F);
    c.require(series_rank(fs) == want, "rank for k = " + std::to_string(k));
    // independent rank: rows of all Xt^i T^j coefficient rationals
    std::vector<RatVector> rows;
    for (const auto& f : fs) {
      RatVector r;
      for (long n = f.n0; n <= f.nmax; ++n)
        for (const Poly& p : f.c[size_t(n - f.n0)])
          for (int j = 0; j <= 2 * d; ++j) r.push_back(p.coeff(j));
      rows.push_back(r);
    }
    c.require(vector_rank(rows) == want, "independent rank for k = " + std::to_string(k));
    c.require(long(dim_modular_forms(*make_sym(d), k).dim) == want, "dim_modular_forms");
    for (const auto& f : fs) worst = std::max(worst, s_covariance_at_i(f, k, prec));
  }
  c.require(worst < 1e-8, "S covariance at i");
  info << "dims 4, 19; worst S residual " << worst;
}

void criterion4(Check& c, std::ostream& info) {
  QSeries e4 = classical_qexp("E4", 40);
  MLDE m = find_mlde(e4, 2, 12);
  c.require(m.r == 1 && m.g.size() == 2 && !m.g0_zero, "order of the E4 equation");
  // E4 D E4 + (E6 / 3) E4 = 0, up to scale
  if (m.g.size() == 2) {
    Rational s = m.g[1].terms().count({0, 1, 0}) ? m.g[1].terms().at({0, 1, 0}) : Rational(0);
    c.require(s != 0 && m.g[1] == QMPoly::E(4) * s && m.g[0] == QMPoly::E(6) * (s / 3), "E4 equation coefficients");
  }
  QSeries ext = fourier_recursion(m, qs_truncate(e4, 0), 200);
  bool exact = ext.coeff(0) == 1;
  for (long n = 1; n <= 30; ++n) exact = exact && ext.coeff(n) == Rational(240 * sig(3, n));
  c.require(exact, "240 sigma_3(n) for n <= 30");

  const long nc = 120;
  QSeries e4n = classical_qexp("E4", nc);
  const Complex tau0(0, 2);
  TaylorSeries ts = taylor_recursion(m, tau0, taylor_seeds(e4n, tau0, m.r, nc), 8);
  double worst = 0;
  for (int n = 0; n <= 8; ++n) {
    Complex want = cauchy_derivative(e4n, tau0, n, 0.5, nc);
    worst = std::max(worst, std::abs(ts.derivative(n)[0] - want) / std::abs(want));
  }
  c.require(worst < 1e-6, "Taylor coefficients at 2i");
  int d100 = rational_span_dim(coefficient_family(ext, 100)), d200 = rational_span_dim(coefficient_family(ext, 200));
  c.require(d100 == d200 && d100 >= 1, "rational span does not stabilize");
  info << "Taylor rel err " << worst << "; span dim " << d100 << " at n = 100 and 200";
}

void criterion5(Check& c, std::ostream& info) {
  const long prec = 400;
  MockFit fit = mock_fit(classical_qexp("Delta", prec), prec);
  const double target = 0.021446 / 0.000048;
  double dev = std::abs(fit.ratio - target) / target;
  c.require(dev < 0.02, "ratio |a|/|b| off by more than 2%");
  c.require(fit.fit.residual < 1e-8, "phi(S) not in span{phi_+, phi_-, phi_0}");
  TypePtr ex = make_example_type();
  MockEmbedding F = mock_embed(fit.f, ex, prec);
  VectorFunction fn = [&](Complex t) { return F(t, prec); };
  double rs = slash_residual(*ex, -10, fn, GroupElement::S(), Complex(0, 1));
  double rt = slash_residual(*ex, -10, fn, GroupElement::T(), Complex(0.2, 1.1));
  c.require(rs < 1e-5, "S residual at i");
  c.require(rt < 1e-5, "T residual");
  info << "ratio " << fit.ratio << " (" << 100 * dev << "% from " << target << "); S residual " << rs
       << "; span residual " << fit.fit.residual;
}

void criterion6(Check& c, std::ostream& info) {
  NumericField nf;
  nf.tau = Complex(0, 2);
  nf.bound = 200;
  auto t0 = Clock::now();
  std::vector<Poly> one{Poly::constant(1, Var::Tau)};
  PoincareResult e6 = poincare_series(6, *make_trivial(), one, 0, nf);
  std::vector<Rational> c6{1};
  for (long n = 1; n <= 60; ++n) c6.push_back(Rational(-504 * sig(5, n)));
  Complex want = eval_numeric(qs_scalar(6, c6), nf.tau, 60).value[0];
  double d6 = std::abs(e6.value[0] - want);
  c.require(d6 < 1e-8, "E6 at 2i");
  c.require(since(t0) < 30, "E6 slower than 30 s");

  TypePtr u = universal_extension(make_trivial(), make_sym(10), true, false);
  c.require(u->tree && u->tree->pretty() == "uext_par(triv, sym(10))", "type");
  // seeds: e_0, and (X - tau)^10 in the first quotient copy
  std::vector<Poly> e0(size_t(u->dim), Poly(Var::Tau)), chi = e0;
  e0[0] = Poly::constant(1, Var::Tau);
  for (int j = 0; j <= 10; ++j)
    chi[size_t(1 + j)] = Poly::monomial(10 - j, binomial(10, j) * ((10 - j) % 2 ? -1 : 1), Var::Tau);
  double worst = 0, slowest = 0;
  for (const auto& psi : {e0, chi}) {
    NumericField g = nf;
    g.bound = 300;
    VectorFunction F = [&](Complex t) {
      g.tau = t;
      return poincare_series(16, *u, psi, 0, g).value;
    };
    auto t1 = Clock::now();
    F(Complex(0, 1));
    slowest = std::max(slowest, since(t1));
    for (Complex t : {Complex(0, 1), Complex(0.2, 1.1)})
      worst = std::max(worst, slash_residual(*u, 16, F, GroupElement::S(), t));
  }
  c.require(worst < 1e-5, "weight 16 S invariance");
  c.require(slowest < 30, "weight 16 slower than 30 s");
  int b[4] = {convergence_bound(*make_trivial()), convergence_bound(*make_sym(10)), convergence_bound(*u),
              convergence_bound(*universal_extension(make_trivial(), make_sym(10), false, false))};
  c.require(b[0] == 5 && b[1] == 15 && b[2] == 15 && b[3] == 16, "convergence bounds");
  info << "E6 err " << d6 << "; weight 16 S residual " << worst << ", " << slowest << " s per value; bounds " << b[0]
       << "/" << b[1] << "/" << b[2] << "/" << b[3];
}

void criterion7(Check& c, std::ostream& info) {
  NumericField nf;
  nf.n_cut = 80;
  nf.tol = 1e-8;
  QSeries dl = classical_qexp("Delta", 80), e4 = classical_qexp("E4", 80);
  const double h = 1e-3;
  auto deriv1 = [&](const QSeries& f, Complex tau) {
    auto a = iterated_integral({f}, tau + h, nf).c[0], b = iterated_integral({f}, tau - h, nf).c[0];
    std::vector<Complex> d(a.size());
    for (size_t i = 0; i < a.size(); ++i) d[i] = (a[i] - b[i]) / (2 * h);
    return d;
  };
  double w1 = 0;
  for (auto [f, k] : {std::pair{&dl, 12}, std::pair{&e4, 4}})
    for (Complex tau : {Complex(0, 1), Complex(0.3, 0.8)}) {
      Complex fv = eval_numeric(*f, tau, 80).value[0];
      w1 = std::max(w1, rel(deriv1(*f, tau), kernel_times(k - 2, tau, fv)));
    }
  c.require(w1 < 1e-4, "depth 1 identity");

  Complex tau(0.1, 0.95);
  auto a = iterated_integral({dl, dl}, tau + h, nf).c, b = iterated_integral({dl, dl}, tau - h, nf).c;
  auto inner = iterated_integral({dl}, tau, nf).c[0];
  auto k1 = kernel_times(10, tau, eval_numeric(dl, tau, 80).value[0]);
  double dmax = 0, smax = 0;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      Complex fd = (a[size_t(i)][size_t(j)] - b[size_t(i)][size_t(j)]) / (2 * h);
      Complex want = k1[size_t(i)] * inner[size_t(j)];
      dmax = std::max(dmax, std::abs(fd - want));
      smax = std::max(smax, std::abs(want));
    }
  c.require(dmax / smax < 1e-4, "depth 2 identity");

  // regularized E4: converged, and I(tau) = int_tau^tau' + I(tau')
  Complex t1(0.1, 0.9), t2(0.6, 1.4);
  IteratedValue ia = iterated_integral({e4}, t1, nf), ib = iterated_integral({e4}, t2, nf);
  auto seg = segment_integral(e4, t1, t2, 80);
  std::vector<Complex> sum(ia.c[0].size());
  for (size_t i = 0; i < sum.size(); ++i) sum[i] = seg[i] + ib.c[0][i];
  double split = rel(sum, ia.c[0]);
  c.require(split < 1e-6, "path splitting");
  c.require(ia.error < 1e-6, "E4 quadrature error estimate");
  info << "depth 1 " << w1 << ", depth 2 " << dmax / smax << ", E4 splitting " << split;
}

void criterion8(Check& c, std::ostream& info) {
  std::mt19937_64 g(2024);
  std::uniform_int_distribution<long> e(-1000000, 1000000);
  int words = 0;
  while (words < 10000) {
    long cc = e(g), dd = e(g);
    if (std::gcd(cc, dd) != 1) continue;
    GroupElement x = GroupElement::T(e(g)) * GroupElement::from_bottom_row(cc, dd);
    c.require(word_decompose(x).product() == x, "word reconstruction");
    ++words;
  }

  std::function<TypePtr(int)> gen = [&](int depth) -> TypePtr {
    switch (depth <= 0 ? int(g() % 2) : int(g() % 6)) {
      case 0: return make_trivial();
      case 1: return make_sym(int(g() % 7));
      case 2: return make_dual(gen(depth - 1));
      case 3: {
        auto a = gen(depth - 1), b = gen(depth - 1);
        return a->dim * b->dim > 30 ? a : make_tensor(a, b);
      }
      case 4: {
        auto a = gen(depth - 1), b = gen(depth - 1);
        return a->dim + b->dim > 30 ? a : make_direct_sum(a, b);
      }
      default: {
        auto q = make_sym(2 * int(g() % 6));
        auto u = universal_extension(make_trivial(), q, g() % 2, false);
        return u->dim > 30 ? q : u;
      }
    }
  };
  int cocycles = 0;
  for (int it = 0; it < 30; ++it) {
    TypePtr t = gen(3);
    c.require(t->dim <= 30, "fuzz type too large");
    CohomologyBasis b = cocycle_space(t);
    for (const auto& z : b.z1_basis) {
      c.require(affine_relations_hold(t, z.valS, z.valT), "cocycle fuzz");
      ++cocycles;
    }
  }

  auto e4 = classical_qexp("E4", 50), e6 = classical_qexp("E6", 50), dl = classical_qexp("Delta", 50);
  QSeries lhs = qs_sub(qs_mul(qs_mul(e4, e4), e4), qs_mul(e6, e6));
  bool ring = true;
  for (long n = 0; n <= 50; ++n) ring = ring && lhs.coeff(n) == 1728 * dl.coeff(n);
  c.require(ring, "E4^3 - E6^2 = 1728 Delta");

  std::ostringstream slopes;
  int seed = 1;
  for (const TypePtr& t : {make_trivial(), make_sym(4), make_example_type()}) {
    ProbeResult p = norm_growth_probe(*t, 10000, std::uint64_t(seed++));
    c.require(p.within, "probe slope above bound");
    slopes << p.slope << "/" << p.bound << " ";
  }
  info << words << " words, " << cocycles << " fuzzed cocycles, ring to n = 50, slopes " << slopes.str();
}

}  // namespace

int main() {
  report(1, "exact relations of the 23-dimensional example", criterion1);
  report(2, "parabolic H^1 of sym^(k-2) and the weight 12 period cocycles", criterion2);
  report(3, "Kuga-Shimura bases of M_12(sym^2) and M_16(sym^10)", criterion3);
  report(4, "E4 differential equation, Fourier and Taylor recursions", criterion4);
  report(5, "mock embedding of the Eichler integral of Delta", criterion5);
  report(6, "Eisenstein series and convergence bounds", criterion6);
  report(7, "iterated integrals of depth 1 and 2", criterion7);
  report(8, "property suites", criterion8);
  return failures;
}
