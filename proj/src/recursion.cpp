#include "vra/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vra {

namespace {

const Complex kTwoPiI(0, 6.283185307179586476925286766559);

QSeries unweighted(QSeries s) {
  s.weight = 0;
  return s;
}

// (a4, a6) with 4 a4 + 6 a6 = w, a6 increasing
std::vector<std::pair<int, int>> basis_exponents(int w) {
  std::vector<std::pair<int, int>> out;
  if (w < 0 || w % 2) return out;
  for (int b = 0; 6 * b <= w; ++b)
    if ((w - 6 * b) % 4 == 0) out.emplace_back((w - 6 * b) / 4, b);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- QMPoly

QMPoly QMPoly::constant(const Rational& c) { return monomial(0, 0, 0, c); }

QMPoly QMPoly::E(int w) {
  if (w == 2) return monomial(1, 0, 0);
  if (w == 4) return monomial(0, 1, 0);
  if (w == 6) return monomial(0, 0, 1);
  throw Error(ErrorKind::Domain, "generators are E2, E4, E6");
}

QMPoly QMPoly::monomial(int a2, int a4, int a6, const Rational& c) {
  QMPoly p;
  p.add({a2, a4, a6}, c);
  return p;
}

void QMPoly::add(const Key& k, const Rational& c) {
  if (c == 0) return;
  auto it = t_.find(k);
  if (it == t_.end()) {
    t_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second == 0) t_.erase(it);
}

QMPoly& QMPoly::operator+=(const QMPoly& o) {
  for (const auto& [k, c] : o.t_) add(k, c);
  return *this;
}

QMPoly operator*(const QMPoly& a, const QMPoly& b) {
  QMPoly r;
  for (const auto& [ka, ca] : a.t_)
    for (const auto& [kb, cb] : b.t_) r.add({ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}, ca * cb);
  return r;
}

QMPoly operator*(QMPoly a, const Rational& s) {
  if (s == 0) return QMPoly();
  for (auto& [k, c] : a.t_) c *= s;
  return a;
}

QMPoly QMPoly::theta() const {
  static const QMPoly d2 = (E(2) * E(2) - E(4)) * make_q(1, 12);
  static const QMPoly d4 = (E(2) * E(4) - E(6)) * make_q(1, 3);
  static const QMPoly d6 = (E(2) * E(6) - E(4) * E(4)) * make_q(1, 2);
  const QMPoly* d[3] = {&d2, &d4, &d6};
  QMPoly r;
  for (const auto& [k, c] : t_)
    for (int g = 0; g < 3; ++g) {
      if (k[g] == 0) continue;
      Key rest = k;
      --rest[g];
      r += monomial(rest[0], rest[1], rest[2], c * k[g]) * *d[g];
    }
  return r;
}

QSeries QMPoly::series(long nmax) const {
  QSeries out = qs_zero(0, nullptr, 0, nmax);
  if (t_.empty()) return out;
  const char* names[3] = {"E2", "E4", "E6"};
  std::vector<QSeries> pw[3];
  for (int g = 0; g < 3; ++g) pw[g].push_back(qs_constant(1, nmax));
  auto power = [&](int g, int e) -> const QSeries& {
    while (static_cast<int>(pw[g].size()) <= e)
      pw[g].push_back(unweighted(qs_mul(pw[g].back(), unweighted(classical_qexp(names[g], nmax)))));
    return pw[g][size_t(e)];
  };
  for (const auto& [k, c] : t_) {
    QSeries term = unweighted(qs_mul(qs_mul(power(0, k[0]), power(1, k[1])), power(2, k[2])));
    out = qs_add(out, qs_scale(unweighted(term), c));
  }
  return out;
}

Complex QMPoly::eval(Complex e2, Complex e4, Complex e6) const {
  Complex s = 0;
  for (const auto& [k, c] : t_) s += c.get_d() * std::pow(e2, k[0]) * std::pow(e4, k[1]) * std::pow(e6, k[2]);
  return s;
}

std::string QMPoly::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : t_) {
    std::string cs = to_string(c);
    if (!first) os << (cs[0] == '-' ? " - " : " + ");
    if (!first && cs[0] == '-') cs = cs.substr(1);
    bool unit = k[0] + k[1] + k[2] > 0;
    if (!unit || cs != "1") os << cs;
    const char* names[3] = {"E2", "E4", "E6"};
    for (int g = 0; g < 3; ++g) {
      if (k[g] == 0) continue;
      if (!unit || cs != "1" || g != (k[0] ? 0 : k[1] ? 1 : 2)) os << "*";
      os << names[g];
      if (k[g] > 1) os << "^" << k[g];
    }
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------- MLDE

QSeries serre_power(const QSeries& f, int j) {
  QSeries r = f;
  for (int i = 0; i < j; ++i) r = serre_derivative(r);
  return r;
}

std::vector<QMPoly> expand_quasimodular(const MLDE& m) {
  std::vector<QMPoly> A{QMPoly::constant(1)};  // D^j = sum_i A[i] theta^i
  std::vector<QMPoly> h(size_t(m.r) + 1);
  for (int j = 0; j <= m.r; ++j) {
    if (j < static_cast<int>(m.g.size()))
      for (size_t i = 0; i < A.size(); ++i) h[i] += m.g[size_t(j)] * A[i];
    if (j == m.r) break;
    std::vector<QMPoly> B(A.size() + 1);
    Rational s = make_q(-(m.k + 2 * j), 12);
    for (size_t i = 0; i < A.size(); ++i) {
      B[i] += A[i].theta();
      B[i + 1] += A[i];
      B[i] += A[i] * QMPoly::E(2) * s;
    }
    A = std::move(B);
  }
  return h;
}

QSeries apply_theta_form(const MLDE& m, const QSeries& f) {
  QSeries th = unweighted(f);
  QSeries out = qs_scale(th, 0);
  long nmax = f.nmax - f.n0;
  for (size_t j = 0; j < m.h.size(); ++j) {
    if (!m.h[j].is_zero()) out = qs_add(out, qs_mul(th, m.h[j].series(std::max(0L, nmax))));
    th = unweighted(qs_theta(th));
  }
  return out;
}

MLDE find_mlde(const QSeries& f, int r_max, int l_max) {
  if (f.h != 1) throw Error(ErrorKind::Unsupported, "MLDE search for integral exponents only");
  if (f.is_zero()) throw Error(ErrorKind::Domain, "the zero series satisfies every equation");
  const long N = f.nmax;
  const long span = N - f.n0;
  std::vector<QSeries> Dj{unweighted(f)};
  {
    QSeries cur = f;
    for (int j = 1; j <= r_max; ++j) {
      cur = serre_derivative(cur);
      Dj.push_back(unweighted(cur));
    }
  }
  std::map<std::pair<int, int>, QSeries> bcache;
  auto bseries = [&](int a, int b) -> const QSeries& {
    auto it = bcache.find({a, b});
    if (it != bcache.end()) return it->second;
    return bcache.emplace(std::pair{a, b}, QMPoly::monomial(0, a, b).series(std::max(0L, span))).first->second;
  };
  for (int r = 1; r <= r_max; ++r) {
    for (int l = 0; l <= l_max; l += 2) {
      if (basis_exponents(l - 2 * r).empty()) continue;
      struct Col {
        int j, a, b;
        QSeries s;
      };
      std::vector<Col> cols;
      for (int j = 0; j <= r; ++j)
        for (auto [a, b] : basis_exponents(l - 2 * j)) cols.push_back({j, a, b, qs_mul(Dj[size_t(j)], bseries(a, b))});
      const int nc = static_cast<int>(cols.size());
      // a zero column is stored from its last exponent, so rows start at f.n0
      long lo = f.n0, hi = cols[0].s.nmax;
      int tdeg = 0;
      for (const auto& c : cols) {
        hi = std::min(hi, c.s.nmax);
        for (const auto& v : c.s.c)
          for (const auto& p : v) tdeg = std::max(tdeg, p.degree());
      }
      if (hi - lo + 1 < nc + 5)
        throw Error(ErrorKind::PrecisionExhausted, "not enough coefficients for the MLDE search");
      const int dim = f.dim();
      RatMatrix M(int((hi - lo + 1) * dim * (tdeg + 1)), nc);
      for (int ci = 0; ci < nc; ++ci) {
        int row = 0;
        for (long n = lo; n <= hi; ++n) {
          auto v = cols[size_t(ci)].s.at(n);
          for (int i = 0; i < dim; ++i)
            for (int t = 0; t <= tdeg; ++t) M(row++, ci) = v[size_t(i)].coeff(t);
        }
      }
      auto ker = mat_kernel(M);
      if (ker.empty()) continue;
      auto g0_part = [&](const RatVector& v) {
        for (int ci = 0; ci < nc; ++ci)
          if (cols[size_t(ci)].j == 0 && v[size_t(ci)] != 0) return true;
        return false;
      };
      const RatVector* pick = &ker[0];
      for (const auto& v : ker)
        if (g0_part(v)) {
          pick = &v;
          break;
        }
      RatVector v = *pick;
      Rational lead = 0;
      for (int ci = 0; ci < nc && lead == 0; ++ci)
        if (cols[size_t(ci)].j == r) lead = v[size_t(ci)];
      if (lead == 0) continue;  // lower-order relation; cannot occur after the earlier slots
      MLDE m;
      m.k = f.weight;
      m.r = r;
      m.l = l;
      m.g.assign(size_t(r) + 1, QMPoly());
      for (int ci = 0; ci < nc; ++ci) {
        const auto& c = cols[size_t(ci)];
        m.g[size_t(c.j)] += QMPoly::monomial(0, c.a, c.b, v[size_t(ci)] / lead);
      }
      m.g0_zero = m.g[0].is_zero();
      m.h = expand_quasimodular(m);
      QSeries chk = apply_theta_form(m, f);
      for (long n = chk.n0; n <= chk.nmax; ++n)
        for (const auto& p : chk.at(n))
          if (!p.is_zero()) throw Error(ErrorKind::Domain, "theta form does not annihilate f");
      m.verified_to = chk.nmax;
      return m;
    }
  }
  throw Error(ErrorKind::NotFound, "no MLDE within the given order and weight bounds");
}

// ---------------------------------------------------------------- Fourier

Rational indicial(const MLDE& m, const Rational& n) {
  Rational s = 0, p = 1;
  for (const auto& h : m.h) {
    auto it = h.terms().begin();
    Rational c0 = 0;
    // constant term of a quasimodular form is the sum of its coefficients
    for (; it != h.terms().end(); ++it) c0 += it->second;
    s += c0 * p;
    p *= n;
  }
  return s;
}

long last_indicial_root(const MLDE& m, long n_lo, long n_hi, long h) {
  long last = n_lo - 1;
  for (long n = n_lo; n <= n_hi; ++n)
    if (indicial(m, make_q(n, h)) == 0) last = n;
  return last;
}

QSeries fourier_recursion(const MLDE& m, const QSeries& seeds, long n_max) {
  if (m.h.empty()) throw Error(ErrorKind::Domain, "MLDE without theta form");
  const long hd = seeds.h;
  const int r = static_cast<int>(m.h.size()) - 1;
  const int dim = seeds.dim();
  const long n0 = seeds.n0;
  if (n_max <= seeds.nmax) return qs_truncate(seeds, n_max);
  // H[j][n] = c(h_j; n), T-free
  std::vector<std::vector<Rational>> H(size_t(r) + 1);
  const long hn = (n_max - n0) / hd + 1;
  for (int j = 0; j <= r; ++j) {
    QSeries s = m.h[size_t(j)].series(hn);
    H[size_t(j)].resize(size_t(hn) + 1);
    for (long n = 0; n <= hn; ++n) H[size_t(j)][size_t(n)] = s.at(n)[0].coeff(0);
  }
  std::vector<Rational> H0(size_t(r) + 1);
  for (int j = 0; j <= r; ++j) H0[size_t(j)] = H[size_t(j)][0];

  QSeries out = qs_zero(seeds.weight, seeds.type, n0, n_max, hd);
  // P[m - n0][j][comp] = (m/h + d/dT)^j c_m
  std::vector<std::vector<std::vector<Poly>>> P;
  auto push_powers = [&](long mm, const std::vector<Poly>& c) {
    Rational x = make_q(mm, hd);
    std::vector<std::vector<Poly>> pw(size_t(r) + 1);
    pw[0] = c;
    for (int j = 1; j <= r; ++j) {
      pw[size_t(j)].resize(size_t(dim));
      for (int i = 0; i < dim; ++i) {
        const Poly& p = pw[size_t(j - 1)][size_t(i)];
        pw[size_t(j)][size_t(i)] = p * x + p.derivative();
      }
    }
    P.push_back(std::move(pw));
  };
  for (long n = n0; n <= seeds.nmax; ++n) {
    out.c[size_t(n - n0)] = seeds.at(n);
    push_powers(n, out.c[size_t(n - n0)]);
  }
  for (long n = seeds.nmax + 1; n <= n_max; ++n) {
    Rational x = make_q(n, hd);
    // L = sum_i L_i d^i with L_i = sum_j c(h_j;0) C(j,i) x^(j-i)
    std::vector<Rational> L(size_t(r) + 1);
    for (int j = 0; j <= r; ++j) {
      Rational xp = 1;
      for (int i = j; i >= 0; --i) {
        L[size_t(i)] += H0[size_t(j)] * binomial(j, i) * xp;
        xp *= x;
      }
    }
    if (L[0] == 0)
      throw Error(ErrorKind::SingularLeadingCoefficient,
                  "indicial polynomial vanishes at exponent " + to_string(x) + "; supply more seeds");
    std::vector<Poly> c(size_t(dim), Poly(Var::T));
    for (int i = 0; i < dim; ++i) {
      Poly rhs(Var::T);
      for (long mm = n0; mm < n; ++mm) {
        if ((n - mm) % hd) continue;
        long idx = (n - mm) / hd;
        for (int j = 0; j <= r; ++j) {
          const Rational& hv = H[size_t(j)][size_t(idx)];
          if (hv == 0) continue;
          const Poly& p = P[size_t(mm - n0)][size_t(j)][size_t(i)];
          if (!p.is_zero()) rhs -= p * hv;
        }
      }
      // back substitution from the top T-degree
      int deg = rhs.degree();
      std::vector<Rational> sol(size_t(std::max(deg, 0) + 1));
      for (int t = deg; t >= 0; --t) {
        Rational acc = rhs.coeff(t);
        Rational fall = 1;  // (t+s)!/t!
        for (int s = 1; s <= r && t + s <= deg; ++s) {
          fall *= t + s;
          acc -= L[size_t(s)] * fall * sol[size_t(t + s)];
        }
        sol[size_t(t)] = acc / L[0];
      }
      c[size_t(i)] = deg < 0 ? Poly(Var::T) : Poly(Var::T, sol);
    }
    out.c[size_t(n - n0)] = c;
    push_powers(n, c);
  }
  return out;
}

// ---------------------------------------------------------------- Taylor

std::vector<Complex> TaylorSeries::coefficient(long n) const {
  std::vector<Complex> v = a.at(size_t(n));
  Complex s = std::pow(kTwoPiI, 2.0 * double(n));
  for (auto& x : v) x *= s;
  return v;
}

std::vector<Complex> TaylorSeries::derivative(long n) const {
  std::vector<Complex> v = a.at(size_t(n));
  Complex s = std::pow(kTwoPiI, double(n));
  for (auto& x : v) x *= s;
  return v;
}

std::array<Complex, 3> eisenstein_values(Complex tau, long n_cut) {
  std::array<Complex, 3> out;
  const char* names[3] = {"E2", "E4", "E6"};
  for (int g = 0; g < 3; ++g) out[size_t(g)] = eval_numeric(classical_qexp(names[g], n_cut), tau, n_cut).value[0];
  return out;
}

std::vector<std::vector<Complex>> taylor_seeds(const QSeries& f, Complex tau0, int count, long n_cut) {
  std::vector<std::vector<Complex>> out;
  QSeries th = f;
  for (int i = 0; i < count; ++i) {
    out.push_back(eval_numeric(th, tau0, n_cut).value);
    th = qs_theta(th);
  }
  return out;
}

TaylorSeries taylor_recursion(const MLDE& m, Complex tau0, const std::vector<std::vector<Complex>>& seeds,
                              long n_max) {
  if (tau0.imag() <= 0) throw Error(ErrorKind::Domain, "tau0 must lie in the upper half plane");
  const int r = static_cast<int>(m.h.size()) - 1;
  if (r < 0) throw Error(ErrorKind::Domain, "MLDE without theta form");
  if (static_cast<int>(seeds.size()) < r) throw Error(ErrorKind::Domain, "need theta^j f (tau0) for j < r");
  const size_t dim = seeds.empty() ? 1 : seeds[0].size();
  auto ev = eisenstein_values(tau0);
  // hc[j][n] = theta^n h_j (tau0)
  std::vector<std::vector<Complex>> hc(size_t(r) + 1);
  double scale = 0;
  for (int j = 0; j <= r; ++j) {
    QMPoly p = m.h[size_t(j)];
    for (long n = 0; n <= n_max; ++n) {
      hc[size_t(j)].push_back(p.eval(ev[0], ev[1], ev[2]));
      if (n < n_max) p = p.theta();
    }
    scale = std::max(scale, std::abs(hc[size_t(j)][0]));
  }
  const Complex lead = hc[size_t(r)][0];
  TaylorSeries ts;
  ts.tau0 = tau0;
  ts.a.assign(seeds.begin(), seeds.end());
  if (long(ts.a.size()) > n_max + 1) ts.a.resize(size_t(n_max) + 1);
  for (long N = long(ts.a.size()) - r; N + r <= n_max; ++N) {
    if (N < 0) continue;
    if (std::abs(lead) <= 1e-12 * std::max(scale, 1.0))
      throw Error(ErrorKind::SingularLeadingCoefficient, "c(h_r; 0) vanishes at tau0");
    std::vector<Complex> acc(dim);
    for (int j = 0; j <= r; ++j)
      for (long mm = 0; mm <= N; ++mm) {
        if (j == r && mm == N) continue;
        Complex w = binomial(N, mm).get_d() * hc[size_t(j)][size_t(N - mm)];
        for (size_t i = 0; i < dim; ++i) acc[i] += w * ts.a[size_t(mm + j)][i];
      }
    for (auto& x : acc) x = -x / lead;
    ts.a.push_back(acc);
  }
  return ts;
}

// ---------------------------------------------------------------- spans

int rational_span_dim(const std::vector<std::vector<Poly>>& family) {
  int tdeg = 0;
  size_t dim = 0;
  for (const auto& v : family) {
    dim = std::max(dim, v.size());
    for (const auto& p : v) tdeg = std::max(tdeg, p.degree());
  }
  std::vector<RatVector> rows;
  for (const auto& v : family) {
    RatVector r(dim * size_t(tdeg + 1));
    for (size_t i = 0; i < v.size(); ++i)
      for (int t = 0; t <= v[i].degree(); ++t) r[i * size_t(tdeg + 1) + size_t(t)] = v[i].coeff(t);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) return 0;
  return vector_rank(rows);
}

std::vector<std::vector<Poly>> coefficient_family(const QSeries& f, long upto) {
  std::vector<std::vector<Poly>> out;
  for (long n = f.n0; n <= upto; ++n) out.push_back(f.at(n));
  return out;
}

}  // namespace vra
