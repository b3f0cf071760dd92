#include "vra/qseries.hpp"

#include <algorithm>
#include <cmath>

namespace vra {

namespace {

const double kTwoPi = 6.283185307179586476925286766559;

std::vector<Poly> zero_vec(int dim) { return std::vector<Poly>(size_t(dim), Poly(Var::T)); }

void require_same_grid(const QSeries& f, const QSeries& g) {
  if (f.h != g.h) throw Error(ErrorKind::TypeMismatch, "q-series with different denominators");
}

bool same_type(const QSeries& f, const QSeries& g) {
  if (f.dim() != g.dim()) return false;
  if (f.dim() == 1) return true;
  return f.type == g.type || (f.type->S == g.type->S && f.type->T == g.type->T);
}

// n0 becomes the leading exponent.
void strip_leading(QSeries& f) {
  size_t k = 0;
  while (k + 1 < f.c.size()) {
    bool z = true;
    for (const auto& p : f.c[k]) z = z && p.is_zero();
    if (!z) break;
    ++k;
  }
  if (k == 0) return;
  f.c.erase(f.c.begin(), f.c.begin() + long(k));
  f.n0 += long(k);
}

}  // namespace

std::vector<Poly> QSeries::at(long n) const {
  if (n > nmax) throw Error(ErrorKind::PrecisionExhausted, "coefficient beyond the valid precision");
  if (n < n0) return zero_vec(dim());
  return c[size_t(n - n0)];
}

Rational QSeries::coeff(long n) const {
  if (dim() != 1) throw Error(ErrorKind::TypeMismatch, "scalar coefficient of a vector-valued series");
  auto v = at(n);
  if (v[0].degree() > 0) throw Error(ErrorKind::TypeMismatch, "coefficient depends on T");
  return v[0].coeff(0);
}

bool QSeries::is_zero() const {
  for (const auto& v : c)
    for (const auto& p : v)
      if (!p.is_zero()) return false;
  return true;
}

QSeries qs_zero(int weight, TypePtr type, long n0, long nmax, long h) {
  QSeries f;
  f.weight = weight;
  f.type = type ? std::move(type) : make_trivial();
  f.h = h;
  f.n0 = n0;
  f.nmax = nmax;
  if (nmax >= n0) f.c.assign(size_t(nmax - n0 + 1), zero_vec(f.dim()));
  return f;
}

QSeries qs_scalar(int weight, const std::vector<Rational>& coeffs, long n0) {
  QSeries f = qs_zero(weight, nullptr, n0, n0 + long(coeffs.size()) - 1);
  for (size_t i = 0; i < coeffs.size(); ++i) f.c[i][0] = Poly::constant(coeffs[i], Var::T);
  strip_leading(f);
  return f;
}

QSeries qs_constant(const Rational& c, long nmax) {
  QSeries f = qs_zero(0, nullptr, 0, nmax);
  if (nmax >= 0) f.c[0][0] = Poly::constant(c, Var::T);
  return f;
}

QSeries qs_add(const QSeries& f, const QSeries& g) {
  if (f.weight != g.weight) throw Error(ErrorKind::WeightMismatch, "sum of series of different weights");
  if (!same_type(f, g)) throw Error(ErrorKind::TypeMismatch, "sum of series of different types");
  require_same_grid(f, g);
  long n0 = std::min(f.n0, g.n0), nmax = std::min(f.nmax, g.nmax);
  QSeries r = qs_zero(f.weight, f.type, n0, nmax, f.h);
  for (long n = n0; n <= nmax; ++n) {
    auto a = f.at(n), b = g.at(n);
    for (int j = 0; j < r.dim(); ++j) r.c[size_t(n - n0)][j] = a[j] + b[j];
  }
  return r;
}

QSeries qs_scale(const QSeries& f, const Rational& s) {
  QSeries r = f;
  for (auto& v : r.c)
    for (auto& p : v) p *= s;
  return r;
}

QSeries qs_sub(const QSeries& f, const QSeries& g) { return qs_add(f, qs_scale(g, -1)); }

QSeries qs_mul(const QSeries& f, const QSeries& g) {
  if (!f.scalar() && !g.scalar()) throw Error(ErrorKind::TypeMismatch, "product of two vector-valued series");
  if (!g.scalar()) return qs_mul(g, f);
  require_same_grid(f, g);
  // f may be vector-valued, g is scalar
  long n0 = f.n0 + g.n0;
  long nmax = std::min(f.nmax + g.n0, g.nmax + f.n0);
  QSeries r = qs_zero(f.weight + g.weight, f.type, n0, nmax, f.h);
  for (long i = f.n0; i <= f.nmax; ++i) {
    const auto& a = f.c[size_t(i - f.n0)];
    bool nz = false;
    for (const auto& p : a) nz = nz || !p.is_zero();
    if (!nz) continue;
    for (long j = g.n0; i + j <= nmax && j <= g.nmax; ++j) {
      const Poly& b = g.c[size_t(j - g.n0)][0];
      if (b.is_zero()) continue;
      auto& out = r.c[size_t(i + j - n0)];
      for (int k = 0; k < r.dim(); ++k)
        if (!a[k].is_zero()) out[k] += a[k] * b;
    }
  }
  strip_leading(r);
  return r;
}

QSeries qs_truncate(const QSeries& f, long nmax) {
  if (nmax > f.nmax) throw Error(ErrorKind::PrecisionExhausted, "cannot extend precision by truncation");
  QSeries r = f;
  r.nmax = nmax;
  r.c.resize(size_t(std::max(0L, nmax - f.n0 + 1)));
  return r;
}

QSeries qs_shift(const QSeries& f, long s) {
  QSeries r = f;
  r.n0 += s;
  r.nmax += s;
  return r;
}

QSeries qs_theta(const QSeries& f) {
  QSeries r = f;
  r.weight += 2;
  for (long n = f.n0; n <= f.nmax; ++n)
    for (auto& p : r.c[size_t(n - f.n0)]) p = p * make_q(n, f.h) + p.derivative();
  return r;
}

Rational sigma(long k, long n) {
  Integer s = 0;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    Integer t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k));
    s += t;
    long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(k));
      s += t;
    }
  }
  return Rational(s);
}

QSeries classical_qexp(const std::string& name, long n_max) {
  if (n_max < 0) throw Error(ErrorKind::Domain, "precision must be nonnegative");
  std::vector<Rational> c(size_t(n_max) + 1);
  if (name == "E2" || name == "E4" || name == "E6") {
    int k = name[1] - '0';
    Rational a = k == 2 ? -24 : k == 4 ? 240 : -504;
    c[0] = 1;
    for (long n = 1; n <= n_max; ++n) c[n] = a * sigma(k - 1, n);
    return qs_scalar(k, c);
  }
  if (name == "Delta") {
    // prod (1 - q^n) up to q^(n_max - 1), then the 24th power, then shift by q
    long m = n_max;
    std::vector<Integer> p(size_t(m) + 1);
    p[0] = 1;
    for (long n = 1; n <= m; ++n)
      for (long i = m; i >= n; --i) p[i] -= p[i - n];
    auto mul = [m](const std::vector<Integer>& a, const std::vector<Integer>& b) {
      std::vector<Integer> r(size_t(m) + 1);
      for (long i = 0; i <= m; ++i) {
        if (a[i] == 0) continue;
        for (long j = 0; i + j <= m; ++j) r[i + j] += a[i] * b[j];
      }
      return r;
    };
    auto p3 = mul(mul(p, p), p);
    auto p6 = mul(p3, p3);
    auto p12 = mul(p6, p6);
    auto p24 = mul(p12, p12);
    for (long n = 1; n <= n_max; ++n) c[n] = Rational(p24[n - 1]);
    return qs_scalar(12, c);
  }
  throw Error(ErrorKind::NotFound, "unknown classical series '" + name + "'");
}

QSeries serre_derivative(const QSeries& f) {
  QSeries e2 = classical_qexp("E2", std::max(0L, f.nmax - f.n0));
  QSeries corr = qs_scale(qs_mul(f, e2), make_q(f.weight, 12));
  QSeries t = qs_theta(f);
  corr.weight = t.weight;
  return qs_sub(t, corr);
}

QSeries ramanujan_theta(const std::string& name, long n_max) {
  QSeries e2 = classical_qexp("E2", n_max), e4 = classical_qexp("E4", n_max), e6 = classical_qexp("E6", n_max);
  if (name == "E2") return qs_scale(qs_sub(qs_mul(e2, e2), e4), make_q(1, 12));
  if (name == "E4") return qs_scale(qs_sub(qs_mul(e2, e4), e6), make_q(1, 3));
  if (name == "E6") return qs_scale(qs_sub(qs_mul(e2, e6), qs_mul(e4, e4)), make_q(1, 2));
  throw Error(ErrorKind::NotFound, "no Ramanujan identity for '" + name + "'");
}

long infer_denominator(const ArithType& t) {
  if (t.T_unipotent()) return 1;
  RatMatrix p = t.T;
  RatMatrix I = RatMatrix::identity(t.dim);
  for (long h = 1; h <= 4 * long(t.dim) + 24; ++h) {
    if (h > 1) p = p * t.T;
    RatMatrix n = p - I, q = n;
    bool nil = false;
    for (int j = 0; j <= t.dim; ++j) {
      if (q.is_zero()) {
        nil = true;
        break;
      }
      q = q * n;
    }
    if (nil) return h;
  }
  throw Error(ErrorKind::Unsupported, "rho(T) has no rational spectrum of finite order");
}

Complex poly_eval_complex(const Poly& p, Complex x) {
  Complex acc = 0;
  const auto& cs = p.coeffs();
  for (size_t i = cs.size(); i-- > 0;) acc = acc * x + cs[i].get_d();
  return acc;
}

NumericValue eval_numeric(const QSeries& f, Complex tau, long n_cut) {
  if (tau.imag() <= 0) throw Error(ErrorKind::NonconvergentWarning, "|q| >= 1: tau is not in the upper half plane");
  if (n_cut > f.nmax) throw Error(ErrorKind::PrecisionExhausted, "n_cut beyond the stored precision");
  NumericValue out;
  out.value.assign(size_t(f.dim()), Complex(0));
  const Complex T = Complex(0, kTwoPi) * tau;
  const double absq = std::exp(-kTwoPi * tau.imag() / double(f.h));
  double last = 0;
  for (long n = f.n0; n <= n_cut; ++n) {
    Complex qn = std::exp(Complex(0, kTwoPi) * tau * (double(n) / double(f.h)));
    double mag = 0;
    for (int j = 0; j < f.dim(); ++j) {
      Complex term = poly_eval_complex(f.c[size_t(n - f.n0)][j], T) * qn;
      out.value[j] += term;
      mag = std::max(mag, std::abs(term));
    }
    if (mag > 0) last = mag;
  }
  out.tail = last * absq / (1 - absq);
  return out;
}

}  // namespace vra
