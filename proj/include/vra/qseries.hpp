#pragma once

// Exact q-expansions. Coefficients are vectors (one entry per coordinate of
// the type) of polynomials in T = 2 pi i tau, so theta = q d/dq acts on
// c(T) q^n as (n c + c') q^n and everything stays rational.

#include <complex>
#include <string>
#include <vector>

#include "vra/types.hpp"

namespace vra {

using Complex = std::complex<double>;

struct QSeries {
  int weight = 0;
  TypePtr type;       // trivial for scalar series
  long h = 1;         // exponents are n / h
  long n0 = 0;        // first stored exponent (numerator)
  long nmax = 0;      // last valid exponent (numerator), inclusive
  std::vector<std::vector<Poly>> c;  // c[n - n0][component]

  int dim() const { return type ? type->dim : 1; }
  bool scalar() const { return dim() == 1; }
  // zero vector below n0; PrecisionExhausted above nmax
  std::vector<Poly> at(long n) const;
  // constant coefficient of a scalar series
  Rational coeff(long n) const;
  bool is_zero() const;
};

QSeries qs_zero(int weight, TypePtr type, long n0, long nmax, long h = 1);
QSeries qs_scalar(int weight, const std::vector<Rational>& coeffs, long n0 = 0);
QSeries qs_constant(const Rational& c, long nmax);

QSeries qs_add(const QSeries& f, const QSeries& g);
QSeries qs_sub(const QSeries& f, const QSeries& g);
QSeries qs_scale(const QSeries& f, const Rational& s);
QSeries qs_mul(const QSeries& f, const QSeries& g);
QSeries qs_truncate(const QSeries& f, long nmax);
QSeries qs_theta(const QSeries& f);  // weight += 2 (formal)
// q^s f, weight unchanged
QSeries qs_shift(const QSeries& f, long s);

Rational sigma(long k, long n);
// E2, E4, E6, Delta up to q^n_max.
QSeries classical_qexp(const std::string& name, long n_max);
QSeries serre_derivative(const QSeries& f);
// Right-hand side of theta E2 = (E2^2 - E4)/12, theta E4 = (E2 E4 - E6)/3,
// theta E6 = (E2 E6 - E4^2)/2.
QSeries ramanujan_theta(const std::string& name, long n_max);

// Denominator of rho(T): least h with rho(T)^h unipotent.
long infer_denominator(const ArithType& t);

Complex poly_eval_complex(const Poly& p, Complex x);

struct NumericValue {
  std::vector<Complex> value;
  double tail = 0;  // geometric estimate from the last included term
};
NumericValue eval_numeric(const QSeries& f, Complex tau, long n_cut);

}  // namespace vra
