#pragma once

// Exact scalars, dense polynomials and dense matrices over Q.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "vra/error.hpp"

namespace vra {

using Rational = mpq_class;
using Integer = mpz_class;
using RatVector = std::vector<Rational>;

std::string to_string(const Rational& r);   // "p/q", q omitted when 1
Rational rational_from_string(const std::string& s);
// mpq_class(n, d) does not reduce; this does.
inline Rational make_q(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}
Rational binomial(long n, long k);           // 0 outside 0 <= k <= n
Rational factorial(long n);

// T stands for 2 pi i tau.
enum class Var { X, Xp, Y, Tau, T };
const char* var_name(Var v);

class Poly {
 public:
  Poly() = default;
  explicit Poly(Var v) : var_(v) {}
  Poly(Var v, std::vector<Rational> coeffs);
  static Poly constant(const Rational& c, Var v = Var::X);
  static Poly monomial(int deg, const Rational& c = 1, Var v = Var::X);

  Var var() const { return var_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const;
  void set_coeff(int i, const Rational& v);

  Poly derivative() const;
  Rational eval(const Rational& x) const;
  Poly pow(int e) const;
  Poly with_var(Var v) const { Poly p = *this; p.var_ = v; return p; }

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const { return *this * Rational(-1); }
  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  std::string str() const;

 private:
  void trim();
  Var var_ = Var::X;
  std::vector<Rational> c_;
};

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(int rows, int cols) : r_(rows), c_(cols), e_(size_t(rows) * cols) {}
  static RatMatrix identity(int n);
  static RatMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  int rows() const { return r_; }
  int cols() const { return c_; }
  Rational& operator()(int i, int j) { return e_[size_t(i) * c_ + j]; }
  const Rational& operator()(int i, int j) const { return e_[size_t(i) * c_ + j]; }

  RatMatrix transpose() const;
  RatMatrix inverse() const;  // throws Domain if singular
  RatMatrix pow(long e) const;
  RatMatrix block(int r0, int c0, int nr, int nc) const;
  void set_block(int r0, int c0, const RatMatrix& b);
  RatVector row(int i) const;
  RatVector col(int j) const;
  bool is_zero() const;
  bool is_identity() const;
  int rank() const;

  RatMatrix operator*(const RatMatrix& o) const;
  RatVector operator*(const RatVector& v) const;
  RatMatrix operator+(const RatMatrix& o) const;
  RatMatrix operator-(const RatMatrix& o) const;
  RatMatrix operator*(const Rational& s) const;
  bool operator==(const RatMatrix& o) const {
    return r_ == o.r_ && c_ == o.c_ && e_ == o.e_;
  }
  bool operator!=(const RatMatrix& o) const { return !(*this == o); }

  std::vector<std::vector<std::string>> to_strings() const;

 private:
  int r_ = 0, c_ = 0;
  std::vector<Rational> e_;
};

RatMatrix kron(const RatMatrix& a, const RatMatrix& b);
RatMatrix direct_sum(const RatMatrix& a, const RatMatrix& b);
RatMatrix stack_rows(const std::vector<RatMatrix>& parts);

// Kernel basis: one vector per free column, free coordinate 1, other free
// coordinates 0. Ordered by free column.
std::vector<RatVector> mat_kernel(const RatMatrix& m);
std::optional<RatVector> mat_solve(const RatMatrix& m, const RatVector& b);
// Rank of a family of vectors (as rows).
int vector_rank(const std::vector<RatVector>& vs);

// (-cX+a)^w p((dX-b)/(-cX+a)), i.e. p |_{-w} gamma^{-1} for gamma=[[a,b],[c,d]].
Poly poly_compose_moebius(const Poly& p, const Rational& a, const Rational& b,
                          const Rational& c, const Rational& d, int weight);

RatVector operator+(const RatVector& a, const RatVector& b);
RatVector operator-(const RatVector& a, const RatVector& b);
RatVector operator*(const Rational& s, const RatVector& a);
bool is_zero(const RatVector& v);

}  // namespace vra
