#pragma once

// Modular linear differential equations and the coefficient recursions they
// drive. D is the Serre derivative; theta = q d/dq = (2 pi i)^-1 d/dtau.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "vra/qseries.hpp"

namespace vra {

// Polynomial in E2, E4, E6 with rational coefficients. Key = exponents.
class QMPoly {
 public:
  using Key = std::array<int, 3>;
  QMPoly() = default;
  static QMPoly constant(const Rational& c);
  static QMPoly E(int w);  // w in {2, 4, 6}
  static QMPoly monomial(int a2, int a4, int a6, const Rational& c = 1);

  bool is_zero() const { return t_.empty(); }
  const std::map<Key, Rational>& terms() const { return t_; }
  // theta via theta E2 = (E2^2 - E4)/12, theta E4 = (E2 E4 - E6)/3,
  // theta E6 = (E2 E6 - E4^2)/2
  QMPoly theta() const;
  QSeries series(long nmax) const;
  Complex eval(Complex e2, Complex e4, Complex e6) const;
  std::string str() const;

  QMPoly& operator+=(const QMPoly& o);
  friend QMPoly operator+(QMPoly a, const QMPoly& b) { return a += b; }
  friend QMPoly operator-(QMPoly a, const QMPoly& b) { return a += b * Rational(-1); }
  friend QMPoly operator*(const QMPoly& a, const QMPoly& b);
  friend QMPoly operator*(QMPoly a, const Rational& s);
  bool operator==(const QMPoly& o) const { return t_ == o.t_; }

 private:
  void add(const Key& k, const Rational& c);
  std::map<Key, Rational> t_;
};

struct MLDE {
  int k = 0;               // weight of f
  int r = 0, l = 0;        // order, weight parameter
  std::vector<QMPoly> g;   // g[j] in M_{l-2j}: sum_j g_j D^j f = 0
  std::vector<QMPoly> h;   // theta form: sum_j h_j theta^j f = 0
  bool g0_zero = false;    // flagged: only relations with g_0 = 0 exist
  long verified_to = -1;   // relation checked through this exponent
};

// D^j f = D_{k+2j-2} ... D_k f
QSeries serre_power(const QSeries& f, int j);
// Smallest (r, l), r >= 1, with sum_{j <= r} g_j D^j f = 0. f.weight is k.
MLDE find_mlde(const QSeries& f, int r_max, int l_max);
// theta-form coefficients of an MLDE given by k, r, g.
std::vector<QMPoly> expand_quasimodular(const MLDE& m);
// sum_j h_j theta^j f, to the precision of f
QSeries apply_theta_form(const MLDE& m, const QSeries& f);

// Indicial polynomial P(n) = sum_j c(h_j; 0) n^j, evaluated.
Rational indicial(const MLDE& m, const Rational& n);
// Largest n in [n_lo, n_hi] with P(n/h) = 0, or n_lo - 1. Seeds must reach it.
long last_indicial_root(const MLDE& m, long n_lo, long n_hi, long h = 1);
// Extends the seed coefficients (all stored exponents) to n_max.
QSeries fourier_recursion(const MLDE& m, const QSeries& seeds, long n_max);

struct TaylorSeries {
  Complex tau0;
  // a[n][comp] = theta^n f (tau0) = (2 pi i)^-n f^(n)(tau0)
  std::vector<std::vector<Complex>> a;
  // c_tau0(f; n) = (2 pi i)^n f^(n)(tau0)
  std::vector<Complex> coefficient(long n) const;
  // f^(n)(tau0)
  std::vector<Complex> derivative(long n) const;
};
// theta^n f (tau0) for n < count, straight from the q-expansion
std::vector<std::vector<Complex>> taylor_seeds(const QSeries& f, Complex tau0, int count, long n_cut);
// (E2, E4, E6) at tau
std::array<Complex, 3> eisenstein_values(Complex tau, long n_cut = 200);
TaylorSeries taylor_recursion(const MLDE& m, Complex tau0, const std::vector<std::vector<Complex>>& seeds,
                              long n_max);

// Rank over Q of a family of Poly-vectors.
int rational_span_dim(const std::vector<std::vector<Poly>>& family);
// Coefficients c(f; n) for n0 <= n <= upto as a family.
std::vector<std::vector<Poly>> coefficient_family(const QSeries& f, long upto);

}  // namespace vra
