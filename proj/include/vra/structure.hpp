#pragma once

// Raising operators, pairing, Clebsch-Gordan, W, Kuga-Shimura, dimensions.
//
// Normalization: series live in T = 2 pi i tau and the sym variable is
// Xt = 2 pi i X. Then (X - tau) d/dtau = (Xt - T) theta and R_k is rational.
// A jet stores F = sum_j g_j (Xt - T)^j, which is the true function once
// Xt and T are evaluated; the X^i coefficient is (2 pi i)^i times the Xt^i
// coefficient.

#include <string>
#include <vector>

#include "vra/qseries.hpp"

namespace vra {

struct JetFunction {
  int weight = 0;
  TypePtr type;            // coefficient type of each g_j
  std::vector<QSeries> g;  // g[j] multiplies (Xt - T)^j
  int degree() const { return static_cast<int>(g.size()) - 1; }
};

JetFunction jet_from_series(const QSeries& f, int weight);
// R_k with k = f.weight, one step.
JetFunction raise_step(const JetFunction& f);
JetFunction raise(const JetFunction& f, int times);
// g_j = C(d,j) (k+j)...(k+d-1) (-1)^(d-j) theta^j f
JetFunction raise_closed(const QSeries& f, int k, int d);
// ((X - tau) d/dX - 1) / k on jets of degree <= 1
JetFunction lower(const JetFunction& f, int k);
// multiply by (Xt - T)^kappa; weight drops by kappa
JetFunction jet_mul_power(const JetFunction& f, int kappa);
bool jet_equal(const JetFunction& a, const JetFunction& b);

// Scalar jet as a sym^d series in Xt-coordinates.
QSeries jet_to_sym(const JetFunction& f, int d);
// X^i coefficients of a sym^d series (Xt-coordinates) at tau.
std::vector<Complex> sym_series_values(const QSeries& F, Complex tau, long n_cut);
// (c tau + d)^-k (cX + d)^deg P(gX) from the X-coefficients of P at g tau.
std::vector<Complex> slash_sym(const std::vector<Complex>& p_at_gtau, int k, const GroupElement& g,
                               Complex tau);
Complex mobius(const GroupElement& g, Complex tau);

// R^d_k applied to a polynomial f(tau); entry (i, j) is the coefficient of
// X^i tau^j. Exact derivatives.
RatMatrix raise_polynomial(const Poly& f, int k, int d);

// <X^i, Y^j> = (-1)^j / C(d, i) for i + j = d.
Rational sym_pairing(const Poly& p, const Poly& q, int d);
// Pairs p(X) with the Y-slot of Q, Q(a, b) = coefficient of X^a Y^b.
Poly sym_pairing_partial(const Poly& p, const RatMatrix& Q, int d);

// Y^n -> (d+d')!/d'! sum_{i+j=n} C(d,i) C(d',j) / C(d+d',n) X^i X'^j.
// Column n of the matrix is the image of Y^n; row index i (d'+1) + j.
RatMatrix clebsch_gordan_matrix(int d, int dp);
// Entry (i, j) = coefficient of X^i X'^j.
RatMatrix clebsch_gordan(const Poly& p, int d, int dp);

// f = sum_j (4 pi y)^-j f_j. With y^-1 -> -2i / (X - tau) this becomes
// (4 pi y)^-1 -> 1 / (Xt - T), so W f = sum_j (Xt - T)^(d-j) f_j is rational
// and equals (2 pi i)^d times the displayed W.
struct AlmostHolomorphic {
  int weight = 0;
  std::vector<QSeries> f;
  int depth() const { return static_cast<int>(f.size()) - 1; }
};
JetFunction w_forward(const AlmostHolomorphic& f, int d);
AlmostHolomorphic w_inverse(const JetFunction& F);
// E2 - 3/(pi y) = E2 - 12 (4 pi y)^-1
AlmostHolomorphic e2_star(long nmax);

long classical_dim(int w);
// E4^a E6^b, b increasing.
std::vector<QSeries> classical_basis(int w, long nmax);

bool ks_hypothesis(int k, int d);
struct KSElement {
  int j = 0, kappa = 0, n = 0;  // f in M_{k+j}, F = (Xt-T)^kappa R^n f
  int index = 0;                 // position in classical_basis(k + j)
  QSeries f;
  JetFunction jet;
  QSeries F;  // sym^d, Xt-coordinates
};
std::vector<KSElement> kuga_shimura_basis(int k, int d, long prec);
// Flattened rationals of all coefficients, one row per series.
int series_rank(const std::vector<QSeries>& fs);

struct DimResult {
  long dim = 0;
  bool valid = true;
  long lower = 0, upper = 0;
  std::string note;
};
DimResult dim_modular_forms(const ArithType& t, int k);

}  // namespace vra
