#include "vra/structure.hpp"

#include <algorithm>
#include <cmath>

#include "vra/cohomology.hpp"

namespace vra {

namespace {

const Complex kTwoPiI(0, 6.283185307179586476925286766559);

QSeries unweighted(QSeries s) {
  s.weight = 0;
  return s;
}

QSeries zero_like(const QSeries& f) { return qs_zero(0, f.type, f.n0, f.nmax, f.h); }

void check_jet(const JetFunction& f) {
  if (f.g.empty()) throw Error(ErrorKind::Domain, "empty jet");
}

}  // namespace

JetFunction jet_from_series(const QSeries& f, int weight) {
  JetFunction j;
  j.weight = weight;
  j.type = f.type;
  j.g.push_back(unweighted(f));
  return j;
}

JetFunction raise_step(const JetFunction& f) {
  check_jet(f);
  JetFunction r;
  r.weight = f.weight + 1;
  r.type = f.type;
  r.g.assign(f.g.size() + 1, zero_like(f.g[0]));
  for (size_t j = 0; j < f.g.size(); ++j) {
    r.g[j + 1] = qs_add(r.g[j + 1], unweighted(qs_theta(f.g[j])));
    r.g[j] = qs_add(r.g[j], qs_scale(f.g[j], -long(j) - f.weight));
  }
  return r;
}

JetFunction raise(const JetFunction& f, int times) {
  if (times < 0) throw Error(ErrorKind::Domain, "negative number of raising steps");
  JetFunction r = f;
  for (int i = 0; i < times; ++i) r = raise_step(r);
  return r;
}

JetFunction raise_closed(const QSeries& f, int k, int d) {
  if (d < 0) throw Error(ErrorKind::Domain, "negative number of raising steps");
  JetFunction r;
  r.weight = k + d;
  r.type = f.type;
  QSeries th = unweighted(f);
  for (int j = 0; j <= d; ++j) {
    Rational c = binomial(d, j);
    for (int i = j; i < d; ++i) c *= k + i;
    if ((d - j) % 2) c = -c;
    r.g.push_back(qs_scale(th, c));
    th = unweighted(qs_theta(th));
  }
  return r;
}

JetFunction lower(const JetFunction& f, int k) {
  check_jet(f);
  if (k == 0) throw Error(ErrorKind::Domain, "R_0 is not injective; no left inverse");
  if (f.degree() > 1) throw Error(ErrorKind::DegreeMismatch, "left inverse acts on jets of degree <= 1");
  JetFunction r;
  r.weight = f.weight - 1;
  r.type = f.type;
  // (X - tau) d/dX acts on (X - tau)^j by j
  r.g.push_back(qs_scale(f.g[0], make_q(-1, k)));
  return r;
}

JetFunction jet_mul_power(const JetFunction& f, int kappa) {
  check_jet(f);
  if (kappa < 0) throw Error(ErrorKind::Domain, "negative power of (X - tau)");
  JetFunction r = f;
  r.weight -= kappa;
  r.g.insert(r.g.begin(), size_t(kappa), zero_like(f.g[0]));
  return r;
}

bool jet_equal(const JetFunction& a, const JetFunction& b) {
  if (a.weight != b.weight) return false;
  size_t n = std::max(a.g.size(), b.g.size());
  for (size_t j = 0; j < n; ++j) {
    if (j >= a.g.size()) {
      if (!b.g[j].is_zero()) return false;
    } else if (j >= b.g.size()) {
      if (!a.g[j].is_zero()) return false;
    } else if (!qs_sub(a.g[j], b.g[j]).is_zero()) {
      return false;
    }
  }
  return true;
}

QSeries jet_to_sym(const JetFunction& f, int d) {
  check_jet(f);
  if (f.g[0].dim() != 1) throw Error(ErrorKind::TypeMismatch, "sym view of a vector-valued jet");
  if (f.degree() > d) throw Error(ErrorKind::DegreeMismatch, "jet degree exceeds the sym degree");
  long n0 = f.g[0].n0, nmax = f.g[0].nmax;
  for (const auto& s : f.g) {
    n0 = std::min(n0, s.n0);
    nmax = std::min(nmax, s.nmax);
  }
  QSeries out = qs_zero(f.weight, make_sym(d), n0, nmax, f.g[0].h);
  for (int j = 0; j <= f.degree(); ++j) {
    const QSeries& s = f.g[size_t(j)];
    for (int i = 0; i <= j; ++i) {
      // C(j,i) (-T)^(j-i)
      Poly p = Poly::monomial(j - i, binomial(j, i) * ((j - i) % 2 ? -1 : 1), Var::T);
      for (long n = std::max(n0, s.n0); n <= nmax; ++n) {
        const Poly& c = s.c[size_t(n - s.n0)][0];
        if (!c.is_zero()) out.c[size_t(n - n0)][size_t(i)] += c * p;
      }
    }
  }
  return out;
}

std::vector<Complex> sym_series_values(const QSeries& F, Complex tau, long n_cut) {
  NumericValue v = eval_numeric(F, tau, n_cut);
  Complex s = 1;
  for (auto& x : v.value) {
    x *= s;
    s *= kTwoPiI;
  }
  return v.value;
}

Complex mobius(const GroupElement& g, Complex tau) {
  return (g.a.get_d() * tau + g.b.get_d()) / (g.c.get_d() * tau + g.d.get_d());
}

std::vector<Complex> slash_sym(const std::vector<Complex>& p, int k, const GroupElement& g, Complex tau) {
  const int deg = static_cast<int>(p.size()) - 1;
  const double a = g.a.get_d(), b = g.b.get_d(), c = g.c.get_d(), d = g.d.get_d();
  auto mul = [](const std::vector<Complex>& x, const std::vector<Complex>& y) {
    std::vector<Complex> r(x.size() + y.size() - 1);
    for (size_t i = 0; i < x.size(); ++i)
      for (size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
    return r;
  };
  std::vector<Complex> out(p.size());
  for (int i = 0; i <= deg; ++i) {
    std::vector<Complex> t{1};
    for (int e = 0; e < i; ++e) t = mul(t, {b, a});
    for (int e = i; e < deg; ++e) t = mul(t, {d, c});
    for (size_t m = 0; m < t.size(); ++m) out[m] += p[size_t(i)] * t[m];
  }
  Complex f = std::pow(c * tau + d, -k);
  for (auto& x : out) x *= f;
  return out;
}

RatMatrix raise_polynomial(const Poly& f, int k, int d) {
  if (d < 0) throw Error(ErrorKind::Domain, "negative number of raising steps");
  int dt = std::max(0, f.degree());
  RatMatrix out(d + 1, dt + 1);
  Poly der = f;
  for (int j = 0; j <= d; ++j) {
    Rational c = binomial(d, j);
    for (int i = j; i < d; ++i) c *= k + i;
    if ((d - j) % 2) c = -c;
    // c (X - tau)^j der(tau)
    for (int a = 0; a <= j; ++a) {
      Rational xa = c * binomial(j, a) * ((j - a) % 2 ? -1 : 1);
      for (int m = 0; m <= der.degree(); ++m) out(a, j - a + m) += xa * der.coeff(m);
    }
    der = der.derivative();
  }
  return out;
}

Rational sym_pairing(const Poly& p, const Poly& q, int d) {
  if (p.degree() > d || q.degree() > d) throw Error(ErrorKind::DegreeMismatch, "polynomial degree exceeds d");
  Rational s = 0;
  for (int i = 0; i <= d; ++i) {
    Rational t = p.coeff(i) * q.coeff(d - i) / binomial(d, i);
    s += (d - i) % 2 ? -t : t;
  }
  return s;
}

Poly sym_pairing_partial(const Poly& p, const RatMatrix& Q, int d) {
  if (p.degree() > d || Q.cols() != d + 1) throw Error(ErrorKind::DegreeMismatch, "polynomial degree exceeds d");
  Poly out(Var::X);
  for (int a = 0; a < Q.rows(); ++a) {
    Poly qy(Var::Y);
    for (int b = 0; b <= d; ++b) qy.set_coeff(b, Q(a, b));
    out += Poly::monomial(a, sym_pairing(p, qy, d));
  }
  return out;
}

RatMatrix clebsch_gordan_matrix(int d, int dp) {
  if (d < 0 || dp < 0) throw Error(ErrorKind::DegreeMismatch, "negative degree");
  RatMatrix M((d + 1) * (dp + 1), d + dp + 1);
  Rational scale = factorial(d + dp) / factorial(dp);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= dp; ++j)
      M(i * (dp + 1) + j, i + j) = scale * binomial(d, i) * binomial(dp, j) / binomial(d + dp, i + j);
  return M;
}

RatMatrix clebsch_gordan(const Poly& p, int d, int dp) {
  if (p.degree() > d + dp) throw Error(ErrorKind::DegreeMismatch, "polynomial degree exceeds d + d'");
  RatVector v(size_t(d + dp + 1));
  for (int n = 0; n <= d + dp; ++n) v[size_t(n)] = p.coeff(n);
  RatVector w = clebsch_gordan_matrix(d, dp) * v;
  RatMatrix out(d + 1, dp + 1);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= dp; ++j) out(i, j) = w[size_t(i * (dp + 1) + j)];
  return out;
}

JetFunction w_forward(const AlmostHolomorphic& f, int d) {
  if (f.f.empty()) throw Error(ErrorKind::Domain, "empty almost-holomorphic expansion");
  if (f.depth() > d) throw Error(ErrorKind::DepthExceeded, "depth exceeds the sym degree");
  JetFunction r;
  r.weight = f.weight - d;
  r.type = f.f[0].type;
  r.g.assign(size_t(d) + 1, zero_like(f.f[0]));
  for (int j = 0; j <= f.depth(); ++j) r.g[size_t(d - j)] = unweighted(f.f[size_t(j)]);
  return r;
}

AlmostHolomorphic w_inverse(const JetFunction& F) {
  check_jet(F);
  int d = F.degree();
  AlmostHolomorphic r;
  r.weight = F.weight + d;
  for (int j = 0; j <= d; ++j) r.f.push_back(F.g[size_t(d - j)]);
  while (r.f.size() > 1 && r.f.back().is_zero()) r.f.pop_back();
  return r;
}

AlmostHolomorphic e2_star(long nmax) {
  AlmostHolomorphic r;
  r.weight = 2;
  r.f.push_back(unweighted(classical_qexp("E2", nmax)));
  r.f.push_back(unweighted(qs_constant(-12, nmax)));
  return r;
}

long classical_dim(int w) {
  if (w < 0 || w % 2) return 0;
  if (w % 12 == 2) return w / 12;
  return w / 12 + 1;
}

std::vector<QSeries> classical_basis(int w, long nmax) {
  std::vector<QSeries> out;
  if (w < 0 || w % 2) return out;
  QSeries e4 = classical_qexp("E4", nmax), e6 = classical_qexp("E6", nmax);
  for (int b = 0; 6 * b <= w; ++b) {
    int r = w - 6 * b;
    if (r % 4) continue;
    QSeries f = qs_constant(1, nmax);
    for (int i = 0; i < r / 4; ++i) f = qs_mul(f, e4);
    for (int i = 0; i < b; ++i) f = qs_mul(f, e6);
    out.push_back(f);
  }
  return out;
}

bool ks_hypothesis(int k, int d) { return (k + d) % 2 != 0 || k > d || k < -d; }

std::vector<KSElement> kuga_shimura_basis(int k, int d, long prec) {
  if (d < 0) throw Error(ErrorKind::Domain, "negative sym degree");
  if (!ks_hypothesis(k, d))
    throw Error(ErrorKind::HypothesisViolated, "need k + d odd, k > d or k < -d");
  std::vector<KSElement> out;
  for (int j = -d; j <= d; j += 2) {
    auto basis = classical_basis(k + j, prec);
    for (size_t idx = 0; idx < basis.size(); ++idx) {
      KSElement e;
      e.j = j;
      e.n = (d - j) / 2;
      e.kappa = (d + j) / 2;
      e.index = static_cast<int>(idx);
      e.f = basis[idx];
      e.jet = jet_mul_power(raise(jet_from_series(e.f, k + j), e.n), e.kappa);
      e.F = jet_to_sym(e.jet, d);
      out.push_back(std::move(e));
    }
  }
  return out;
}

int series_rank(const std::vector<QSeries>& fs) {
  if (fs.empty()) return 0;
  long n0 = fs[0].n0, nmax = fs[0].nmax;
  int dim = 0, tdeg = 0;
  for (const auto& f : fs) {
    n0 = std::min(n0, f.n0);
    nmax = std::min(nmax, f.nmax);
    dim = std::max(dim, f.dim());
    for (const auto& v : f.c)
      for (const auto& p : v) tdeg = std::max(tdeg, p.degree());
  }
  std::vector<RatVector> rows;
  for (const auto& f : fs) {
    RatVector r;
    for (long n = n0; n <= nmax; ++n) {
      auto v = f.at(n);
      for (int i = 0; i < dim; ++i)
        for (int t = 0; t <= tdeg; ++t) r.push_back(i < f.dim() ? v[size_t(i)].coeff(t) : Rational(0));
    }
    rows.push_back(std::move(r));
  }
  return vector_rank(rows);
}

namespace {

DimResult leaf(long d, bool valid, const std::string& note = "") {
  DimResult r;
  r.dim = r.lower = r.upper = d;
  r.valid = valid;
  r.note = note;
  return r;
}

DimResult scaled(DimResult r, long m) {
  r.dim *= m;
  r.lower *= m;
  r.upper *= m;
  return r;
}

DimResult dims(const TypeTree& t, bool dual, int k) {
  switch (t->kind) {
    case NodeKind::Trivial: return leaf(classical_dim(k), true);
    case NodeKind::Sym: {
      // sym^d is self-dual through the pairing
      if (t->d == 0) return leaf(classical_dim(k), true);
      long s = 0;
      for (int j = -t->d; j <= t->d; j += 2) s += classical_dim(k + j);
      bool ok = ks_hypothesis(k, t->d);
      return leaf(s, ok, ok ? "" : "Kuga-Shimura hypotheses fail");
    }
    case NodeKind::Dual: return dims(t->children.at(0), !dual, k);
    case NodeKind::DirectSum: {
      DimResult a = dims(t->children.at(0), dual, k), b = dims(t->children.at(1), dual, k);
      DimResult r;
      r.dim = a.dim + b.dim;
      r.lower = a.lower + b.lower;
      r.upper = a.upper + b.upper;
      r.valid = a.valid && b.valid;
      r.note = !a.note.empty() ? a.note : b.note;
      return r;
    }
    case NodeKind::UniversalExt: {
      TypePtr whole = type_from_tree(t);
      TypePtr sub = type_from_tree(t->children.at(0)), quot = type_from_tree(t->children.at(1));
      long e = t->couniversal ? (whole->dim - quot->dim) / sub->dim : (whole->dim - sub->dim) / quot->dim;
      // (tree, multiplicity) of the bottom and top pieces
      TypeTree bot = t->children.at(0), top = t->children.at(1);
      long mb = t->couniversal ? e : 1, mt = t->couniversal ? 1 : e;
      if (dual) {
        std::swap(bot, top);
        std::swap(mb, mt);
      }
      DimResult a = scaled(dims(bot, dual, k), mb), b = scaled(dims(top, dual, k), mt);
      DimResult crit = dims(bot, !dual, 2 - k);
      DimResult r;
      r.lower = a.lower;
      r.upper = a.upper + b.upper;
      if (a.valid && b.valid && crit.valid && crit.dim == 0) {
        r.dim = a.dim + b.dim;
        r.valid = true;
      } else {
        r.dim = r.lower;
        r.valid = false;
        r.note = "upper/lower bounds only";
      }
      return r;
    }
    default: break;
  }
  throw Error(ErrorKind::Unsupported, "dimension formula not available for '" + t->pretty() + "'");
}

}  // namespace

DimResult dim_modular_forms(const ArithType& t, int k) {
  if (!t.tree || !t.over_sl2z) throw Error(ErrorKind::Unsupported, "dimensions need a tree-built SL2(Z) type");
  return dims(t.tree, false, k);
}

}  // namespace vra
