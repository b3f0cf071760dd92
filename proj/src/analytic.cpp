#include "vra/analytic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numeric>
#include <random>

namespace vra {

namespace {

const Complex I(0, 1);
const double TWO_PI = 2 * M_PI;

Complex to_c(const Integer& z) { return Complex(z.get_d(), 0); }

// Scalar q-series with constant coefficients, as doubles.
struct DSeries {
  long n0 = 0, nmax = 0;
  std::vector<double> c;
  int weight = 0;
  Complex operator()(Complex tau, long n_cut) const {
    long top = std::min(nmax, n_cut);
    if (top < n0) return 0;
    Complex q = std::exp(TWO_PI * I * tau);
    Complex s = 0;
    for (long n = top; n >= n0; --n) s = s * q + c[size_t(n - n0)];
    return n0 == 0 ? s : s * std::pow(q, double(n0));
  }
};

DSeries to_double(const QSeries& f) {
  if (!f.scalar()) throw Error(ErrorKind::Unsupported, "scalar series expected");
  DSeries d;
  d.n0 = f.n0;
  d.nmax = f.nmax;
  d.weight = f.weight;
  for (long n = f.n0; n <= f.nmax; ++n) {
    const Poly& p = f.c[size_t(n - f.n0)][0];
    if (p.degree() > 0) throw Error(ErrorKind::Unsupported, "coefficients must be constants");
    d.c.push_back(p.is_zero() ? 0.0 : p.coeff(0).get_d());
  }
  return d;
}

Complex slash_S_scalar(const DSeries& f, Complex tau, long n_cut) {
  return std::pow(tau, -f.weight) * f(-1.0 / tau, n_cut);
}

// (X - z)^m as coefficients of X^i
std::vector<Complex> kernel(int m, Complex z) {
  std::vector<Complex> out(size_t(m + 1));
  for (int i = 0; i <= m; ++i) out[size_t(i)] = binomial(m, i).get_d() * std::pow(-z, m - i);
  return out;
}

double binom_d(double n, int j) {
  double r = 1;
  for (int i = 0; i < j; ++i) r = r * (n - i) / (i + 1);
  return r;
}

double norm(const std::vector<Complex>& v) {
  double s = 0;
  for (const Complex& x : v) s += std::norm(x);
  return std::sqrt(s);
}

struct Kahan {
  double s = 0, c = 0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

}  // namespace

double incomplete_gamma_int(int s, double y) {
  if (s < 1) throw Error(ErrorKind::Domain, "incomplete gamma needs s >= 1");
  double term = 1, sum = 1;
  for (int j = 1; j < s; ++j) {
    term *= y / j;
    sum += term;
  }
  return std::tgamma(double(s)) * std::exp(-y) * sum;
}

QSeries eichler_integral(const QSeries& g) {
  if (!g.scalar()) throw Error(ErrorKind::Unsupported, "scalar cusp form expected");
  int k = g.weight;
  if (k < 4 || k % 2 != 0) throw Error(ErrorKind::Domain, "weight must be even and >= 4");
  std::vector<Rational> c(size_t(std::max(g.nmax, 0L) + 1));
  for (long n = g.n0; n <= g.nmax; ++n) {
    const Poly& p = g.c[size_t(n - g.n0)][0];
    if (p.degree() > 0) throw Error(ErrorKind::Unsupported, "coefficients must be constants");
    Rational v = p.coeff(0);
    if (n <= 0) {
      if (v != 0) throw Error(ErrorKind::NotCuspidal, "nonzero coefficient at n = " + std::to_string(n));
      continue;
    }
    Integer pw;
    mpz_pow_ui(pw.get_mpz_t(), Integer(n).get_mpz_t(), static_cast<unsigned long>(k - 1));
    c[size_t(n)] = v / Rational(pw);
  }
  return qs_scalar(2 - k, c, 0);
}

Complex period_S(const QSeries& f, Complex tau, long n_cut) {
  DSeries d = to_double(f);
  return slash_S_scalar(d, tau, n_cut) - d(tau, n_cut);
}

PolyFit fit_polynomial(const std::function<Complex(Complex)>& p, int degree) {
  // samples on |tau - i| = 1/2, where both tau and -1/tau stay well inside H
  const int N = 4 * (degree + 1) + 8;
  const double r = 0.5;
  std::vector<Complex> beta(size_t(degree + 1), 0.0);
  for (int j = 0; j < N; ++j) {
    Complex w = std::polar(1.0, TWO_PI * j / N);
    Complex v = p(I + r * w);
    for (int m = 0; m <= degree; ++m) beta[size_t(m)] += v * std::pow(std::conj(w), m);
  }
  for (int m = 0; m <= degree; ++m) beta[size_t(m)] /= N * std::pow(r, m);
  PolyFit out;
  out.coeffs.assign(size_t(degree + 1), 0.0);
  for (int m = 0; m <= degree; ++m)
    for (int j = 0; j <= m; ++j)
      out.coeffs[size_t(j)] += beta[size_t(m)] * binomial(m, j).get_d() * std::pow(-I, m - j);
  // check on a vertical line off the circle
  double dev = 0, scale = 0;
  for (double t : {0.7, 0.85, 1.0, 1.2, 1.4}) {
    Complex tau(0.1, t);
    Complex want = p(tau), got = 0;
    for (int j = degree; j >= 0; --j) got = got * tau + out.coeffs[size_t(j)];
    dev = std::max(dev, std::abs(got - want));
    scale = std::max(scale, std::abs(want));
  }
  out.residual = scale > 0 ? dev / scale : dev;
  return out;
}

PolyFit fit_period_polynomial(const QSeries& f, int degree, long n_cut) {
  DSeries d = to_double(f);
  return fit_polynomial([&](Complex tau) { return slash_S_scalar(d, tau, n_cut) - d(tau, n_cut); }, degree);
}

std::array<RatVector, 3> example_period_basis() { return {phi_plus_coeffs(), phi_minus_coeffs(), phi_zero_coeffs()}; }

PeriodFit fit_cocycle_periods(const std::vector<Complex>& sample, const std::array<RatVector, 3>& basis) {
  const size_t n = sample.size();
  for (const auto& b : basis)
    if (b.size() != n) throw Error(ErrorKind::DimensionMismatch, "basis and sample sizes differ");
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXcd rhs(n);
  for (size_t i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) A(Eigen::Index(i), j) = basis[size_t(j)][i].get_d();
    rhs(Eigen::Index(i)) = sample[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  if (sv(2) <= 1e-12 * sv(0)) throw Error(ErrorKind::IllConditioned, "period basis is near-singular");
  Eigen::MatrixXcd Ac = A.cast<Complex>();
  Eigen::VectorXcd x = Ac.colPivHouseholderQr().solve(rhs);
  PeriodFit out;
  out.a = x(0);
  out.b = x(1);
  out.c = x(2);
  double rn = rhs.norm();
  out.residual = rn > 0 ? (Ac * x - rhs).norm() / rn : 0;
  return out;
}

MockFit mock_fit(const QSeries& g, long prec, double tol) {
  if (g.weight != 12) throw Error(ErrorKind::Unsupported, "period basis is available for weight 12");
  MockFit m;
  m.f = eichler_integral(qs_truncate(g, std::min(prec, g.nmax)));
  m.period = fit_period_polynomial(m.f, 10, prec);
  m.fit = fit_cocycle_periods(m.period.coeffs, example_period_basis());
  if (m.period.residual > tol || m.fit.residual > tol)
    throw Error(ErrorKind::CocycleFitFailed, "period is not in the span of the cocycle basis");
  m.ratio = std::abs(m.fit.a) / std::abs(m.fit.b);
  return m;
}

std::vector<Complex> invariant_vector(int d, bool dual, Complex tau) {
  std::vector<Complex> w(size_t(d + 1));
  for (int j = 0; j <= d; ++j)
    w[size_t(j)] = dual ? std::pow(tau, j) : binomial(d, j).get_d() * std::pow(-tau, d - j);
  return w;
}

std::vector<Complex> MockEmbedding::operator()(Complex tau, long n_cut) const {
  DSeries fd = to_double(f);
  Complex c = 0;
  for (int j = d; j >= 0; --j) c = c * tau + C[size_t(j)];
  std::vector<Complex> out{fd(tau, n_cut) + c};
  std::vector<Complex> w = invariant_vector(d, dual_quot, tau);
  for (const Complex& a : alpha)
    for (const Complex& x : w) out.push_back(a * x);
  return out;
}

MockEmbedding mock_embed(const QSeries& f, const TypePtr& ext, long n_cut, double tol) {
  const TypeTree& tr = ext->tree;
  if (!tr || tr->kind != NodeKind::UniversalExt || tr->couniversal || tr->children.size() != 2 ||
      tr->children[0]->kind != NodeKind::Trivial)
    throw Error(ErrorKind::Unsupported, "mock_embed needs a universal extension of a symmetric power by triv");
  MockEmbedding m;
  m.type = ext;
  m.f = f;
  TypeTree q = tr->children[1];
  if (q->kind == NodeKind::Dual) {
    m.dual_quot = true;
    q = q->children[0];
  }
  if (q->kind != NodeKind::Sym) throw Error(ErrorKind::Unsupported, "quotient must be sym(d) or its dual");
  m.d = q->d;
  const int d = m.d, q_dim = d + 1;
  if (f.weight != -d) throw Error(ErrorKind::WeightMismatch, "f must have weight -d");
  if ((ext->dim - 1) % q_dim != 0) throw Error(ErrorKind::DimensionMismatch, "unexpected extension layout");
  const int e = (ext->dim - 1) / q_dim;

  // unknowns: alpha_1..alpha_e, C_0..C_d. Equations at sample points for
  // gamma in {S, T}: f|g - f + C|g - C = sum_i alpha_i Phi_i(g) w(tau).
  DSeries fd = to_double(f);
  auto slash_poly = [&](int j, const GroupElement& g, Complex tau) {
    Complex den = to_c(g.c) * tau + to_c(g.d);
    Complex gt = (to_c(g.a) * tau + to_c(g.b)) / den;
    return std::pow(den, d) * std::pow(gt, j) - std::pow(tau, j);
  };
  std::vector<Complex> pts;
  for (int j = 0; j < 3 * (d + e) + 8; ++j) pts.push_back(I + 0.45 * std::polar(1.0, TWO_PI * (j + 0.5) / (3 * (d + e) + 8)));
  const GroupElement gens[2] = {GroupElement::S(), GroupElement::T()};
  const RatMatrix* mats[2] = {&ext->S, &ext->T};
  Eigen::MatrixXcd A(2 * pts.size(), e + q_dim);
  Eigen::VectorXcd rhs(2 * pts.size());
  Eigen::Index row = 0;
  for (int gi = 0; gi < 2; ++gi) {
    const GroupElement& g = gens[gi];
    for (Complex tau : pts) {
      Complex den = to_c(g.c) * tau + to_c(g.d);
      Complex gt = (to_c(g.a) * tau + to_c(g.b)) / den;
      rhs(row) = -(std::pow(den, d) * fd(gt, n_cut) - fd(tau, n_cut));
      std::vector<Complex> w = invariant_vector(d, m.dual_quot, tau);
      for (int i = 0; i < e; ++i) {
        Complex s = 0;
        for (int j = 0; j < q_dim; ++j) s += (*mats[gi])(0, 1 + i * q_dim + j).get_d() * w[size_t(j)];
        A(row, i) = -s;
      }
      for (int j = 0; j <= d; ++j) A(row, e + j) = slash_poly(j, g, tau);
      ++row;
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(A);
  Eigen::VectorXcd x = cod.solve(rhs);
  double rn = rhs.norm();
  m.residual = rn > 0 ? (A * x - rhs).norm() / rn : 0;
  if (m.residual > tol) throw Error(ErrorKind::CocycleFitFailed, "periods of f are not realized by the extension");
  for (int i = 0; i < e; ++i) m.alpha.push_back(x(i));
  for (int j = 0; j <= d; ++j) m.C.push_back(x(e + j));
  return m;
}

// ---------------------------------------------------------------------------

struct NumericType::Impl {
  int n = 0;
  long h = 1;
  Eigen::MatrixXd S, Sinv;
  std::vector<Eigen::MatrixXd> Tpow;  // rho(T)^r, 0 <= r < h
  Eigen::MatrixXd N;                  // rho(T)^h - 1, nilpotent
  int nil = 0;                        // N^nil = 0

  static Eigen::MatrixXd conv(const RatMatrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
    return out;
  }

  // rho(T)^e v
  Eigen::VectorXcd T_apply(long long e, Eigen::VectorXcd v) const {
    long long q = e / h, r = e % h;
    if (r < 0) {
      r += h;
      --q;
    }
    if (q != 0) {
      Eigen::VectorXcd acc = v, term = v;
      for (int j = 1; j < nil; ++j) {
        term = N * term;
        acc += binom_d(double(q), j) * term;
      }
      v = acc;
    }
    if (r != 0) v = Tpow[size_t(r)] * v;
    return v;
  }
};

NumericType::NumericType(const ArithType& t) {
  if (!t.over_sl2z) throw Error(ErrorKind::Unsupported, "numeric evaluation needs an SL2(Z) type");
  auto p = std::make_shared<Impl>();
  p->n = t.dim;
  p->h = infer_denominator(t);
  p->S = Impl::conv(t.S);
  p->Sinv = Impl::conv(t.S_inverse());
  RatMatrix Th = t.T.pow(p->h);
  RatMatrix Nq = Th - RatMatrix::identity(t.dim);
  p->N = Impl::conv(Nq);
  RatMatrix acc = RatMatrix::identity(t.dim);
  p->nil = 0;
  while (!acc.is_zero()) {
    acc = acc * Nq;
    ++p->nil;
    if (p->nil > t.dim) throw Error(ErrorKind::Unsupported, "rho(T) is not quasi-unipotent");
  }
  RatMatrix tp = RatMatrix::identity(t.dim);
  for (long r = 0; r < p->h; ++r) {
    p->Tpow.push_back(Impl::conv(tp));
    tp = tp * t.T;
  }
  dim_ = t.dim;
  impl_ = std::move(p);
}

std::vector<Complex> NumericType::apply_inverse(const GroupElement& g, const std::vector<Complex>& v) const {
  const Impl& p = *impl_;
  WordDecomposition wd = word_decompose(g);
  Eigen::VectorXcd x(p.n);
  for (int i = 0; i < p.n; ++i) x(i) = v[size_t(i)];
  if (wd.sign < 0) x = p.Sinv * (p.Sinv * x);
  x = p.T_apply(-wd.m.get_si(), x);
  for (const Integer& a : wd.exponents) {
    x = p.Sinv * x;
    x = p.T_apply(-a.get_si(), x);
  }
  return std::vector<Complex>(x.data(), x.data() + p.n);
}

std::vector<double> NumericType::matrix(const GroupElement& g) const {
  GroupElement gi = g.inverse();
  std::vector<double> out(size_t(dim_) * dim_);
  for (int j = 0; j < dim_; ++j) {
    std::vector<Complex> e(size_t(dim_), 0.0);
    e[size_t(j)] = 1;
    auto col = apply_inverse(gi, e);
    for (int i = 0; i < dim_; ++i) out[size_t(i) * dim_ + j] = col[size_t(i)].real();
  }
  return out;
}

double slash_residual(const ArithType& rho, int k, const VectorFunction& F, const GroupElement& g, Complex tau) {
  NumericType nt(rho);
  Complex den = to_c(g.c) * tau + to_c(g.d);
  Complex gt = (to_c(g.a) * tau + to_c(g.b)) / den;
  std::vector<Complex> lhs = nt.apply_inverse(g, F(gt));
  std::vector<Complex> rhs = F(tau);
  std::vector<Complex> diff(rhs.size());
  for (size_t i = 0; i < rhs.size(); ++i) diff[i] = std::pow(den, -k) * lhs[i] - rhs[i];
  double s = norm(rhs);
  return s > 0 ? norm(diff) / s : norm(diff);
}

// ---------------------------------------------------------------------------

Complex HarmonicSplit::eval_minus(Complex tau, long n_cut) const {
  const double y = tau.imag();
  Complex s = 0;
  long top = std::min<long>(n_cut, long(minus.size()) - 1);
  for (long n = top; n >= 1; --n) {
    if (minus[size_t(n)] == 0) continue;
    // Gamma(k-1, 4 pi n y) q^-n with the exponentials combined
    double yy = 2 * TWO_PI * n * y, term = 1, sum = 1;
    for (int j = 1; j < k - 1; ++j) {
      term *= yy / j;
      sum += term;
    }
    double mag = std::tgamma(double(k - 1)) * sum * std::exp(-TWO_PI * n * y);
    s += minus[size_t(n)] * mag * std::polar(1.0, -TWO_PI * n * tau.real());
  }
  return s;
}

Complex HarmonicSplit::eval(Complex tau, long n_cut) const {
  DSeries p = to_double(plus);
  return p(tau, n_cut) + lambda * eval_minus(tau, n_cut) + c0 * std::pow(tau.imag(), k - 1);
}

HarmonicSplit harmonic_split(const QSeries& g, long prec) {
  HarmonicSplit h;
  h.k = g.weight;
  QSeries gt = qs_truncate(g, std::min(prec, g.nmax));
  h.plus = eichler_integral(gt);
  h.minus.assign(size_t(gt.nmax + 1), 0.0);
  for (long n = 1; n <= gt.nmax; ++n) h.minus[size_t(n)] = h.plus.coeff(n).get_d();
  return h;
}

CompletionFit fit_harmonic_completion(const QSeries& g, long prec) {
  if (g.weight != 12) throw Error(ErrorKind::Unsupported, "period basis is available for weight 12");
  CompletionFit out;
  out.split = harmonic_split(g, prec);
  HarmonicSplit& h = out.split;
  const int w = 2 - h.k;
  DSeries plus = to_double(h.plus);
  auto per_minus = [&](Complex tau) {
    return std::pow(tau, -w) * h.eval_minus(-1.0 / tau, prec) - h.eval_minus(tau, prec);
  };
  PolyFit pp = fit_polynomial([&](Complex tau) { return slash_S_scalar(plus, tau, prec) - plus(tau, prec); }, -w);
  PolyFit pm = fit_polynomial(per_minus, -w);
  out.plus_period = fit_cocycle_periods(pp.coeffs, example_period_basis());
  out.minus_period = fit_cocycle_periods(pm.coeffs, example_period_basis());
  h.lambda = -out.plus_period.a / out.minus_period.a;
  std::vector<Complex> tot(pp.coeffs.size());
  for (size_t i = 0; i < tot.size(); ++i) tot[i] = pp.coeffs[i] + h.lambda * pm.coeffs[i];
  out.total_period = fit_cocycle_periods(tot, example_period_basis());

  // c0: the period of f^+ + lambda f^- + c0 y^(k-1) is a polynomial only for
  // c0 = 0; fit c0 jointly with a free polynomial of degree -w.
  const int deg = -w;
  std::vector<Complex> pts;
  for (int j = 0; j < 40; ++j) pts.push_back(I + 0.45 * std::polar(1.0, TWO_PI * (j + 0.25) / 40));
  Eigen::MatrixXcd A(pts.size(), deg + 2);
  Eigen::VectorXcd rhs(pts.size());
  for (size_t r = 0; r < pts.size(); ++r) {
    Complex tau = pts[r];
    Complex st = -1.0 / tau;
    rhs(Eigen::Index(r)) = slash_S_scalar(plus, tau, prec) - plus(tau, prec) + h.lambda * per_minus(tau);
    for (int j = 0; j <= deg; ++j) A(Eigen::Index(r), j) = -std::pow(tau, j);
    A(Eigen::Index(r), deg + 1) = std::pow(tau, -w) * std::pow(st.imag(), h.k - 1) - std::pow(tau.imag(), h.k - 1);
  }
  Eigen::VectorXcd x = A.colPivHouseholderQr().solve(-rhs);
  h.c0 = x(deg + 1);
  out.c0_abs = std::abs(h.c0);

  Complex t0 = I;
  Complex v = h.eval(t0, prec);
  Complex sv = std::pow(t0, -w) * h.eval(-1.0 / t0, prec);
  out.s_residual = std::abs(sv - v) / std::abs(v);
  return out;
}

// ---------------------------------------------------------------------------

int convergence_bound(const ArithType& rho) {
  TypeInvariants inv = type_invariants(rho);
  return 5 + inv.shift + inv.pxs;
}

PoincareResult poincare_series(int k, const ArithType& rho, const std::vector<Poly>& psi, const Rational& m,
                               const NumericField& nf) {
  if (int(psi.size()) != rho.dim) throw Error(ErrorKind::DimensionMismatch, "psi has wrong length");
  if (k < convergence_bound(rho))
    throw Error(ErrorKind::BelowConvergenceWeight,
                "weight " + std::to_string(k) + " below " + std::to_string(convergence_bound(rho)));
  if (nf.tau.imag() <= 0) throw Error(ErrorKind::Domain, "tau must lie in the upper half plane");
  PoincareResult out;
  out.value.assign(size_t(rho.dim), 0.0);

  // psi e(m .) |_k T = psi e(m .) and |_k (-1) likewise, checked exactly;
  // psi is rational, so e(m) must be +-1.
  Rational twice = 2 * m;
  twice.canonicalize();
  bool ok = twice.get_den() == 1;
  int em = 1;
  if (ok && twice.get_num() % 2 != 0) em = -1;
  if (ok) {
    const RatMatrix& Tinv = rho.T_power(-1);
    std::vector<Poly> shifted;
    for (const Poly& p : psi) shifted.push_back(poly_compose_moebius(p, 1, -1, 0, 1, std::max(p.degree(), 0)));
    RatMatrix S2inv = rho.S_inverse() * rho.S_inverse();
    for (int i = 0; i < rho.dim && ok; ++i) {
      Poly a(psi[size_t(i)].var()), b(psi[size_t(i)].var());
      for (int j = 0; j < rho.dim; ++j) {
        a += shifted[size_t(j)].with_var(psi[size_t(i)].var()) * Tinv(i, j);
        b += psi[size_t(j)] * S2inv(i, j);
      }
      if (em < 0) a = -a;
      if (a != psi[size_t(i)]) ok = false;
      if ((k % 2 ? -b : b) != psi[size_t(i)]) ok = false;
    }
  }
  if (!ok) {
    out.zero_by_convention = true;
    return out;
  }

  NumericType nt(rho);
  auto orbit = enumerate_gamma_infty_orbit(nf.bound);
  std::sort(orbit.begin(), orbit.end(), [](const auto& x, const auto& y) {
    long sx = std::labs(x.first) + std::labs(x.second), sy = std::labs(y.first) + std::labs(y.second);
    if (sx != sy) return sx < sy;
    return x < y;
  });
  const double md = m.get_d();
  const Complex tau = nf.tau;
  std::vector<Kahan> re(size_t(rho.dim)), im(size_t(rho.dim));
  double outer = 0;  // |terms| with max(|c|, |d|) > bound / 2
  for (const auto& [c, d] : orbit) {
    GroupElement g = GroupElement::from_bottom_row(c, d);
    Complex den = double(c) * tau + double(d);
    Complex gt = (to_c(g.a) * tau + to_c(g.b)) / den;
    Complex ex = md == 0 ? Complex(1) : std::exp(TWO_PI * I * md * gt);
    std::vector<Complex> v(size_t(rho.dim));
    for (int j = 0; j < rho.dim; ++j) v[size_t(j)] = poly_eval_complex(psi[size_t(j)], gt) * ex;
    std::vector<Complex> t = nt.apply_inverse(g, v);
    Complex f = std::pow(den, -k);
    for (int j = 0; j < rho.dim; ++j) {
      Complex x = f * t[size_t(j)];
      re[size_t(j)].add(x.real());
      im[size_t(j)].add(x.imag());
    }
    if (2 * std::max(std::labs(c), std::labs(d)) > nf.bound) outer += norm(t) * std::abs(f);
    ++out.terms;
  }
  for (int j = 0; j < rho.dim; ++j) out.value[size_t(j)] = Complex(re[size_t(j)].s, im[size_t(j)].s);
  // each doubling of the box multiplies the shell sum by about 2^(2 + s - k)
  TypeInvariants inv = type_invariants(rho);
  double ratio = std::pow(2.0, 2 + inv.shift + inv.pxs - k);
  out.tail = outer * ratio / (1 - ratio);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <int P>
struct GL {
  using G = boost::math::quadrature::gauss<double, P>;
  // nodes and weights on [-1, 1]
  static std::vector<std::pair<double, double>> rule() {
    std::vector<std::pair<double, double>> r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) {
        r.push_back({0.0, w[i]});
      } else {
        r.push_back({-x[i], w[i]});
        r.push_back({x[i], w[i]});
      }
    }
    std::sort(r.begin(), r.end());
    return r;
  }
};

using Rule = std::vector<std::pair<double, double>>;

struct Path {
  Complex tau;
  double top;  // integrate tau + i t for t in [0, top]
  double step;
};

Path vertical_path(Complex tau, int m, double step) {
  // |q| (|z| + 1)^m below 1e-20 relative to the value scale at tau
  double top = (20 * std::log(10.0) + m * std::log(std::abs(tau) + 12)) / TWO_PI;
  return {tau, std::max(top, 1.0), step};
}

// depth-1 vertical integral of (f - a0)(z) (X - z)^m from tau to i infinity
std::vector<Complex> vertical_integral(const DSeries& f, double a0, int m, const Path& p, const Rule& rule, long n_cut) {
  std::vector<Complex> acc(size_t(m + 1), 0.0);
  int panels = int(std::ceil(p.top / p.step));
  double h = p.top / panels;
  for (int q = panels - 1; q >= 0; --q)
    for (const auto& [x, w] : rule) {
      double t = h * (q + 0.5 * (x + 1));
      Complex z = p.tau + I * t;
      Complex fv = (f(z, n_cut) - a0) * I * (0.5 * h * w);
      auto kz = kernel(m, z);
      for (int i = 0; i <= m; ++i) acc[size_t(i)] += fv * kz[size_t(i)];
    }
  return acc;
}

std::vector<Complex> depth1(const DSeries& f, double a0, int m, const Path& p, const Rule& rule, long n_cut) {
  std::vector<Complex> v = vertical_integral(f, a0, m, p, rule, n_cut);
  if (a0 != 0) {
    // a0 ((X - tau)^(m+1) - X^(m+1)) / (m + 1)
    auto kz = kernel(m + 1, p.tau);
    for (int i = 0; i <= m; ++i) v[size_t(i)] += a0 * kz[size_t(i)] / double(m + 1);
  }
  return v;
}

std::vector<std::vector<Complex>> depth2(const DSeries& f1, int m1, const DSeries& f2, int m2, const Path& p,
                                         const Rule& rule, long n_cut) {
  // inner integrals J(t) = int_t^top f2 (X2 - z)^m2 dz along the same line
  int panels = int(std::ceil(p.top / p.step));
  double h = p.top / panels;
  auto inner_piece = [&](double t0, double t1) {
    std::vector<Complex> acc(size_t(m2 + 1), 0.0);
    double hh = t1 - t0;
    for (const auto& [x, w] : rule) {
      double t = t0 + 0.5 * hh * (x + 1);
      Complex z = p.tau + I * t;
      Complex fv = f2(z, n_cut) * I * (0.5 * hh * w);
      auto kz = kernel(m2, z);
      for (int i = 0; i <= m2; ++i) acc[size_t(i)] += fv * kz[size_t(i)];
    }
    return acc;
  };
  std::vector<std::vector<Complex>> out(size_t(m1 + 1), std::vector<Complex>(size_t(m2 + 1), 0.0));
  std::vector<Complex> above(size_t(m2 + 1), 0.0);  // integral over panels above the current one
  for (int q = panels - 1; q >= 0; --q) {
    double t_hi = h * (q + 1);
    for (const auto& [x, w] : rule) {
      double t = h * (q + 0.5 * (x + 1));
      Complex z = p.tau + I * t;
      std::vector<Complex> J = inner_piece(t, t_hi);
      for (int j = 0; j <= m2; ++j) J[size_t(j)] += above[size_t(j)];
      Complex fv = f1(z, n_cut) * I * (0.5 * h * w);
      auto kz = kernel(m1, z);
      for (int i = 0; i <= m1; ++i)
        for (int j = 0; j <= m2; ++j) out[size_t(i)][size_t(j)] += fv * kz[size_t(i)] * J[size_t(j)];
    }
    auto full = inner_piece(h * q, t_hi);
    for (int j = 0; j <= m2; ++j) above[size_t(j)] += full[size_t(j)];
  }
  return out;
}

double max_abs(const std::vector<std::vector<Complex>>& v) {
  double s = 0;
  for (const auto& r : v)
    for (const Complex& x : r) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

IteratedValue iterated_integral(const std::vector<QSeries>& fs, Complex tau, const NumericField& nf) {
  if (fs.empty()) throw Error(ErrorKind::Domain, "no forms given");
  if (fs.size() > 2) throw Error(ErrorKind::DepthUnsupported, "depth " + std::to_string(fs.size()) + " > 2");
  if (tau.imag() <= 0) throw Error(ErrorKind::Domain, "tau must lie in the upper half plane");
  std::vector<DSeries> ds;
  for (const QSeries& f : fs) {
    if (f.weight < 2) throw Error(ErrorKind::Domain, "forms of weight >= 2 expected");
    ds.push_back(to_double(f));
  }
  static const Rule hi = GL<20>::rule(), lo = GL<14>::rule();
  IteratedValue out;
  out.depth = int(fs.size());
  const int m1 = fs[0].weight - 2;
  Path p = vertical_path(tau, m1 + (fs.size() > 1 ? fs[1].weight - 2 : 0), nf.step);
  std::vector<std::vector<Complex>> a, b;
  if (fs.size() == 1) {
    double a0 = fs[0].n0 <= 0 ? fs[0].coeff(0).get_d() : 0.0;
    a = {depth1(ds[0], a0, m1, p, hi, nf.n_cut)};
    b = {depth1(ds[0], a0, m1, p, lo, nf.n_cut)};
  } else {
    if (fs[1].n0 <= 0 && fs[1].coeff(0) != 0)
      throw Error(ErrorKind::NotCuspidal, "the inner form of a depth-2 integral must be cuspidal");
    // the inner integral decays, so the outer form needs no regularization
    const int m2 = fs[1].weight - 2;
    a = depth2(ds[0], m1, ds[1], m2, p, hi, nf.n_cut);
    b = depth2(ds[0], m1, ds[1], m2, p, lo, nf.n_cut);
  }
  double err = 0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) err = std::max(err, std::abs(a[i][j] - b[i][j]));
  double scale = max_abs(a);
  if (err > nf.tol * std::max(scale, 1e-300))
    throw Error(ErrorKind::QuadratureNotConverged, "rules of order 20 and 14 differ by " + std::to_string(err));
  out.c = a;
  out.error = err;
  return out;
}

std::vector<Complex> segment_integral(const QSeries& f, Complex a, Complex b, long n_cut) {
  DSeries d = to_double(f);
  const int m = f.weight - 2;
  static const Rule rule = GL<20>::rule();
  int panels = std::max(1, int(std::ceil(std::abs(b - a) / 0.1)));
  Complex h = (b - a) / double(panels);
  std::vector<Complex> acc(size_t(m + 1), 0.0);
  for (int q = 0; q < panels; ++q)
    for (const auto& [x, w] : rule) {
      Complex z = a + h * (q + 0.5 * (x + 1));
      Complex fv = d(z, n_cut) * h * (0.5 * w);
      auto kz = kernel(m, z);
      for (int i = 0; i <= m; ++i) acc[size_t(i)] += fv * kz[size_t(i)];
    }
  return acc;
}

// ---------------------------------------------------------------------------

ProbeResult norm_growth_probe(const ArithType& rho, long B, std::uint64_t seed, long samples) {
  if (B < 4) throw Error(ErrorKind::Domain, "sample bound too small");
  TypeInvariants inv = type_invariants(rho);
  NumericType nt(rho);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logu(std::log(2.0), std::log(double(B)));
  const int bins = 16;
  std::vector<double> best(bins, -1e300);
  ProbeResult out;
  out.bound = 3 + inv.shift + inv.pxs + 1;
  const double lb = std::log(double(B));
  while (out.samples < samples) {
    long N = std::lround(std::exp(logu(rng)));
    if (N < 2) continue;
    long c = std::uniform_int_distribution<long>(1, N - 1)(rng);
    long d = (rng() & 1) ? N - c : c - N;
    if (std::gcd(c, d) != 1) continue;
    GroupElement g = GroupElement::from_bottom_row(c, d);
    WordDecomposition wd = word_decompose(g);
    GroupElement red = GroupElement::T(-wd.m.get_si()) * g;
    std::vector<double> M = nt.matrix(red);
    double nrm = 0;
    for (double x : M) nrm += x * x;
    double ln = 0.5 * std::log(nrm), lx = std::log(double(N));
    int bin = std::min(bins - 1, int(bins * (lx - std::log(2.0)) / (lb - std::log(2.0))));
    best[size_t(bin)] = std::max(best[size_t(bin)], ln);
    if (lx >= 0.5 * lb) out.max_slope = std::max(out.max_slope, ln / lx);
    ++out.samples;
  }
  // least-squares slope through the per-bin maxima
  std::vector<double> xs, ys;
  for (int b = 0; b < bins; ++b)
    if (best[size_t(b)] > -1e299) {
      xs.push_back(std::log(2.0) + (b + 0.5) * (lb - std::log(2.0)) / bins);
      ys.push_back(best[size_t(b)]);
    }
  if (xs.size() >= 2) {
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.slope = sxy / sxx;
  }
  if (std::abs(out.slope) < 1e-12) out.slope = 0;
  out.within = out.slope <= out.bound;
  return out;
}

}  // namespace vra
