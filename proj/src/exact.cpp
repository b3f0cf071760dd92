#include "vra/exact.hpp"

#include <algorithm>
#include <sstream>

namespace vra {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::RelationViolation: return "RelationViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotInSubgroup: return "NotInSubgroup";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::SubgroupUnsupported: return "SubgroupUnsupported";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::WeightMismatch: return "WeightMismatch";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::SingularLeadingCoefficient: return "SingularLeadingCoefficient";
    case ErrorKind::NotCuspidal: return "NotCuspidal";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::CocycleFitFailed: return "CocycleFitFailed";
    case ErrorKind::BelowConvergenceWeight: return "BelowConvergenceWeight";
    case ErrorKind::DepthUnsupported: return "DepthUnsupported";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::NonconvergentWarning: return "NonconvergentWarning";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ArityError: return "ArityError";
    case ErrorKind::UnknownConstructor: return "UnknownConstructor";
  }
  return "Error";
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational rational_from_string(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0 || s.empty())
    throw Error(ErrorKind::Domain, "not a rational: '" + s + "'");
  if (r.get_den() == 0) throw Error(ErrorKind::Domain, "zero denominator");
  r.canonicalize();
  return r;
}

Rational binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer z;
  mpz_bin_uiui(z.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(z);
}

Rational factorial(long n) {
  if (n < 0) throw Error(ErrorKind::Domain, "factorial of negative integer");
  Integer z;
  mpz_fac_ui(z.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(z);
}

const char* var_name(Var v) {
  switch (v) {
    case Var::X: return "X";
    case Var::Xp: return "X'";
    case Var::Y: return "Y";
    case Var::Tau: return "tau";
    case Var::T: return "T";
  }
  return "?";
}

// ---------------------------------------------------------------- Poly

Poly::Poly(Var v, std::vector<Rational> coeffs) : var_(v), c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rational& c, Var v) { return Poly(v, {c}); }

Poly Poly::monomial(int deg, const Rational& c, Var v) {
  std::vector<Rational> cs(size_t(deg) + 1);
  cs[deg] = c;
  return Poly(v, std::move(cs));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[i];
}

void Poly::set_coeff(int i, const Rational& v) {
  if (i >= static_cast<int>(c_.size())) {
    if (v == 0) return;
    c_.resize(size_t(i) + 1);
  }
  c_[i] = v;
  trim();
}

Poly Poly::derivative() const {
  std::vector<Rational> d;
  for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Rational(long(i)));
  return Poly(var_, std::move(d));
}

Rational Poly::eval(const Rational& x) const {
  Rational acc = 0;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

Poly Poly::pow(int e) const {
  if (e < 0) throw Error(ErrorKind::Domain, "negative polynomial power");
  Poly r = constant(1, var_), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& x : c_) x *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly(a.var());
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(a.var(), std::move(r));
}

std::string Poly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << to_string(c_[i]);
    if (i >= 1) os << "*" << var_name(var_);
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

// ---------------------------------------------------------------- RatMatrix

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  RatMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RatMatrix RatMatrix::inverse() const {
  if (r_ != c_) throw Error(ErrorKind::DimensionMismatch, "inverse of non-square matrix");
  int n = r_;
  RatMatrix a = *this, inv = identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (a(i, col) != 0) { piv = i; break; }
    if (piv < 0) throw Error(ErrorKind::Domain, "singular matrix");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    Rational p = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      Rational f = a(i, col);
      for (int j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

RatMatrix RatMatrix::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  RatMatrix r = identity(r_), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

RatMatrix RatMatrix::block(int r0, int c0, int nr, int nc) const {
  RatMatrix b(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void RatMatrix::set_block(int r0, int c0, const RatMatrix& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

RatVector RatMatrix::row(int i) const {
  return RatVector(e_.begin() + size_t(i) * c_, e_.begin() + size_t(i + 1) * c_);
}

RatVector RatMatrix::col(int j) const {
  RatVector v(r_);
  for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

bool RatMatrix::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const Rational& x) { return x == 0; });
}

bool RatMatrix::is_identity() const {
  if (r_ != c_) return false;
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  if (c_ != o.r_) throw Error(ErrorKind::DimensionMismatch, "matrix product shape");
  RatMatrix p(r_, o.c_);
  Rational t;
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.c_; ++j) {
        const Rational& b = o(k, j);
        if (b == 0) continue;
        t = a * b;
        p(i, j) += t;
      }
    }
  return p;
}

RatVector RatMatrix::operator*(const RatVector& v) const {
  if (static_cast<int>(v.size()) != c_)
    throw Error(ErrorKind::DimensionMismatch, "matrix-vector shape");
  RatVector r(r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j)
      if ((*this)(i, j) != 0 && v[j] != 0) r[i] += (*this)(i, j) * v[j];
  return r;
}

RatMatrix RatMatrix::operator+(const RatMatrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw Error(ErrorKind::DimensionMismatch, "matrix sum shape");
  RatMatrix s = *this;
  for (size_t i = 0; i < e_.size(); ++i) s.e_[i] += o.e_[i];
  return s;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw Error(ErrorKind::DimensionMismatch, "matrix difference shape");
  RatMatrix s = *this;
  for (size_t i = 0; i < e_.size(); ++i) s.e_[i] -= o.e_[i];
  return s;
}

RatMatrix RatMatrix::operator*(const Rational& s) const {
  RatMatrix m = *this;
  for (auto& x : m.e_) x *= s;
  return m;
}

std::vector<std::vector<std::string>> RatMatrix::to_strings() const {
  std::vector<std::vector<std::string>> out(r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) out[i].push_back(to_string((*this)(i, j)));
  return out;
}

RatMatrix kron(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      for (int p = 0; p < b.rows(); ++p)
        for (int q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    }
  return k;
}

RatMatrix direct_sum(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix s(a.rows() + b.rows(), a.cols() + b.cols());
  s.set_block(0, 0, a);
  s.set_block(a.rows(), a.cols(), b);
  return s;
}

RatMatrix stack_rows(const std::vector<RatMatrix>& parts) {
  int r = 0, c = parts.empty() ? 0 : parts[0].cols();
  for (auto& p : parts) {
    if (p.cols() != c) throw Error(ErrorKind::DimensionMismatch, "stack_rows widths");
    r += p.rows();
  }
  RatMatrix m(r, c);
  int at = 0;
  for (auto& p : parts) {
    m.set_block(at, 0, p);
    at += p.rows();
  }
  return m;
}

// ---------------------------------------------------------------- elimination

namespace {

// Fraction-free (Bareiss) row echelon form on integer rows. Rows are scaled
// to integers first; the row space is unchanged.
struct Echelon {
  std::vector<std::vector<Integer>> rows;
  std::vector<int> pivots;  // pivot column per leading row
};

Echelon echelon(const RatMatrix& m) {
  int R = m.rows(), C = m.cols();
  Echelon e;
  e.rows.assign(R, std::vector<Integer>(C));
  for (int i = 0; i < R; ++i) {
    Integer l = 1;
    for (int j = 0; j < C; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (int j = 0; j < C; ++j) e.rows[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
  }
  Integer prev = 1;
  int r = 0;
  for (int col = 0; col < C && r < R; ++col) {
    int piv = -1;
    for (int i = r; i < R; ++i)
      if (e.rows[i][col] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(e.rows[piv], e.rows[r]);
    const Integer p = e.rows[r][col];
    for (int i = r + 1; i < R; ++i) {
      Integer f = e.rows[i][col];
      for (int j = col + 1; j < C; ++j) {
        Integer t = p * e.rows[i][j] - f * e.rows[r][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        e.rows[i][j] = t;
      }
      e.rows[i][col] = 0;
    }
    prev = p;
    e.pivots.push_back(col);
    ++r;
  }
  e.rows.resize(r);
  // Remove common content so entries stay small for the rational back-solve.
  for (auto& row : e.rows) {
    Integer g = 0;
    for (auto& x : row) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
      for (auto& x : row) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
  return e;
}

// Back-substitute with prescribed free values; rhs column optional.
RatVector back_solve(const Echelon& e, int ncols, const RatVector& free_vals,
                     const std::vector<Integer>* rhs) {
  RatVector x = free_vals;
  for (int r = static_cast<int>(e.pivots.size()) - 1; r >= 0; --r) {
    int pc = e.pivots[r];
    Rational s = rhs ? Rational((*rhs)[r]) : Rational(0);
    for (int j = pc + 1; j < ncols; ++j)
      if (e.rows[r][j] != 0 && x[j] != 0) s -= Rational(e.rows[r][j]) * x[j];
    x[pc] = s / Rational(e.rows[r][pc]);
  }
  return x;
}

}  // namespace

std::vector<RatVector> mat_kernel(const RatMatrix& m) {
  Echelon e = echelon(m);
  int C = m.cols();
  std::vector<bool> is_piv(C, false);
  for (int p : e.pivots) is_piv[p] = true;
  std::vector<RatVector> basis;
  for (int f = 0; f < C; ++f) {
    if (is_piv[f]) continue;
    RatVector fv(C);
    fv[f] = 1;
    basis.push_back(back_solve(e, C, fv, nullptr));
  }
  return basis;
}

std::optional<RatVector> mat_solve(const RatMatrix& m, const RatVector& b) {
  if (static_cast<int>(b.size()) != m.rows())
    throw Error(ErrorKind::DimensionMismatch, "mat_solve: rhs length");
  int C = m.cols();
  RatMatrix aug(m.rows(), C + 1);
  aug.set_block(0, 0, m);
  for (int i = 0; i < m.rows(); ++i) aug(i, C) = b[i];
  Echelon e = echelon(aug);
  if (!e.pivots.empty() && e.pivots.back() == C) return std::nullopt;
  std::vector<Integer> rhs;
  for (auto& row : e.rows) rhs.push_back(row[C]);
  return back_solve(e, C, RatVector(C), &rhs);
}

int RatMatrix::rank() const { return static_cast<int>(echelon(*this).pivots.size()); }

int vector_rank(const std::vector<RatVector>& vs) {
  if (vs.empty()) return 0;
  RatMatrix m(static_cast<int>(vs.size()), static_cast<int>(vs[0].size()));
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = 0; j < vs[i].size(); ++j) m(int(i), int(j)) = vs[i][j];
  return m.rank();
}

Poly poly_compose_moebius(const Poly& p, const Rational& a, const Rational& b,
                          const Rational& c, const Rational& d, int weight) {
  if (weight < 0) throw Error(ErrorKind::Domain, "negative weight bound");
  if (a * d - b * c != 1) throw Error(ErrorKind::Domain, "moebius matrix must have determinant 1");
  if (p.degree() > weight)
    throw Error(ErrorKind::DegreeMismatch, "polynomial degree exceeds weight bound");
  Var v = p.var();
  Poly num(v, {-b, d});   // dX - b
  Poly den(v, {a, -c});   // -cX + a
  Poly out(v);
  std::vector<Poly> dp{Poly::constant(1, v)};
  for (int j = 1; j <= weight; ++j) dp.push_back(dp.back() * den);
  Poly np = Poly::constant(1, v);
  for (int j = 0; j <= p.degree(); ++j) {
    if (p.coeff(j) != 0) out += (np * dp[weight - j]) * p.coeff(j);
    np = np * num;
  }
  return out;
}

RatVector operator+(const RatVector& a, const RatVector& b) {
  RatVector r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

RatVector operator-(const RatVector& a, const RatVector& b) {
  RatVector r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

RatVector operator*(const Rational& s, const RatVector& a) {
  RatVector r(a);
  for (auto& x : r) x *= s;
  return r;
}

bool is_zero(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

}  // namespace vra
