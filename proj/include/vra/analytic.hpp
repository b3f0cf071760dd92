#pragma once

// Floating-point evaluation: Eichler integrals, period fits, the mock
// embedding, Eisenstein and Poincare series, iterated integrals, norm probes.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "vra/qseries.hpp"

namespace vra {

struct NumericField {
  Complex tau{0, 1};
  long n_cut = 50;
  long bound = 200;
  double tol = 1e-6;
  double step = 0.25;  // quadrature panel length
};

// Gamma(s, y) for integer s >= 1: (s-1)! e^-y sum_{j<s} y^j / j!
double incomplete_gamma_int(int s, double y);

// sum_{n>=1} c(g; n) / n^(k-1) q^n, weight 2 - k
QSeries eichler_integral(const QSeries& g);
// (f |_w S - f)(tau) = tau^-w f(-1/tau) - f(tau)
Complex period_S(const QSeries& f, Complex tau, long n_cut);

// Polynomial in tau through samples on a circle; coefficients of tau^m.
struct PolyFit {
  std::vector<Complex> coeffs;
  double residual = 0;  // max deviation at off-circle check points, relative
};
PolyFit fit_polynomial(const std::function<Complex(Complex)>& p, int degree);
PolyFit fit_period_polynomial(const QSeries& f, int degree, long n_cut);

struct PeriodFit {
  Complex a, b, c;  // on phi_+, phi_-, phi_0
  double residual = 0;  // relative l2 distance to the span
};
PeriodFit fit_cocycle_periods(const std::vector<Complex>& sample, const std::array<RatVector, 3>& basis);
std::array<RatVector, 3> example_period_basis();

struct MockFit {
  QSeries f;     // Eichler integral
  PolyFit period;
  PeriodFit fit;
  double ratio = 0;  // |a| / |b|
};
// Periods of the Eichler integral of a weight 12 cusp form against the
// example basis; CocycleFitFailed above tol.
MockFit mock_fit(const QSeries& g, long prec, double tol = 1e-5);

// F = (f + C, alpha_1 w, ..., alpha_e w) for an extension of quot by the
// trivial type (first-row blocks are cocycles), with w(tau) the invariant
// vector of quot in {Sym(d), Dual(Sym(d))} and C a polynomial of degree <= d
// absorbing coboundaries. alpha and C are fitted from the periods of f.
struct MockEmbedding {
  TypePtr type;
  QSeries f;
  int d = 0;
  bool dual_quot = false;
  std::vector<Complex> alpha, C;
  double residual = 0;
  std::vector<Complex> operator()(Complex tau, long n_cut) const;
};
MockEmbedding mock_embed(const QSeries& f, const TypePtr& ext, long n_cut, double tol = 1e-5);
// invariant vector of weight -d: (X - tau)^d in the monomial or dual basis
std::vector<Complex> invariant_vector(int d, bool dual, Complex tau);

// ||F |_{k, rho} g - F|| / ||F|| at tau
using VectorFunction = std::function<std::vector<Complex>(Complex)>;
double slash_residual(const ArithType& rho, int k, const VectorFunction& F, const GroupElement& g, Complex tau);

// Completion f^+ + lambda f^- + c0 y^(k-1) of the Eichler integral of a
// cusp form g of weight k, with f^- = sum_n c(g;n)/n^(k-1) Gamma(k-1, 4 pi n y) q^-n.
struct HarmonicSplit {
  int k = 0;  // weight of g
  QSeries plus;
  std::vector<double> minus;  // minus[n] multiplies Gamma(k-1, 4 pi n y) q^-n
  Complex lambda = 0, c0 = 0;
  Complex eval(Complex tau, long n_cut) const;
  Complex eval_minus(Complex tau, long n_cut) const;
};
HarmonicSplit harmonic_split(const QSeries& g, long prec);
struct CompletionFit {
  HarmonicSplit split;
  PeriodFit plus_period, minus_period, total_period;
  double c0_abs = 0;
  double s_residual = 0;  // relative S-residual of the best completion at tau = i
};
CompletionFit fit_harmonic_completion(const QSeries& g, long prec);

// Double-precision images of S and T with word evaluation.
class NumericType {
 public:
  explicit NumericType(const ArithType& t);
  int dim() const { return dim_; }
  // rho(g)^-1 v
  std::vector<Complex> apply_inverse(const GroupElement& g, const std::vector<Complex>& v) const;
  // rho(g) as a dense row-major matrix
  std::vector<double> matrix(const GroupElement& g) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  int dim_ = 0;
};

int convergence_bound(const ArithType& rho);

struct PoincareResult {
  std::vector<Complex> value;
  double tail = 0;
  bool zero_by_convention = false;  // psi e(m .) not T-invariant
  long terms = 0;
};
// psi[j] is the polynomial (in Var::Tau) of coordinate j.
PoincareResult poincare_series(int k, const ArithType& rho, const std::vector<Poly>& psi, const Rational& m,
                               const NumericField& nf);

// Iterated integrals of level-one forms along vertical paths to i infinity.
// Depth 1: coefficients of X^i; depth 2: entry [i][j] of X1^i X2^j.
struct IteratedValue {
  int depth = 0;
  std::vector<std::vector<Complex>> c;
  double error = 0;
};
IteratedValue iterated_integral(const std::vector<QSeries>& fs, Complex tau, const NumericField& nf);
// integral over the segment [a, b] of f(z) (X - z)^(k-2) dz
std::vector<Complex> segment_integral(const QSeries& f, Complex a, Complex b, long n_cut);

struct ProbeResult {
  double slope = 0;       // fitted exponent of the upper envelope
  double max_slope = 0;   // largest log-ratio seen in the top decade
  double bound = 0;       // 3 + shift + pxs + 1
  bool within = true;
  long samples = 0;
};
ProbeResult norm_growth_probe(const ArithType& rho, long B, std::uint64_t seed, long samples = 2000);

}  // namespace vra
