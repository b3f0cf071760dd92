#pragma once

// SL2(Z) elements, minus continued fractions, words in S and T, cosets.

#include <string>
#include <utility>
#include <vector>

#include "vra/exact.hpp"

namespace vra {

struct GroupElement {
  Integer a = 1, b = 0, c = 0, d = 1;

  GroupElement() = default;
  GroupElement(Integer a_, Integer b_, Integer c_, Integer d_);  // checks det
  static GroupElement S() { return GroupElement(0, -1, 1, 0); }
  static GroupElement T(long m = 1) { return GroupElement(1, m, 0, 1); }
  static GroupElement from_bottom_row(const Integer& c, const Integer& d);

  GroupElement operator*(const GroupElement& o) const;
  GroupElement inverse() const { return GroupElement(d, -b, -c, a); }
  GroupElement operator-() const { return GroupElement(-a, -b, -c, -d); }
  bool operator==(const GroupElement& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
  bool operator!=(const GroupElement& o) const { return !(*this == o); }
  std::string str() const;
};

struct MinusCF {
  std::vector<Integer> terms;  // alpha_0, ..., alpha_l
  Rational value() const;
  int length() const { return static_cast<int>(terms.size()) - 1; }
};

// Ceiling variant: alpha_i = ceil(x_i), hence alpha_i >= 2 for i >= 1.
MinusCF minus_cf(const Integer& d, const Integer& c);
// Nearest-integer variant: |alpha_i| >= 2 for i >= 1, logarithmic length.
MinusCF minus_cf_nearest(const Integer& d, const Integer& c);

struct WordDecomposition {
  int sign = 1;
  Integer m = 0;
  std::vector<Integer> exponents;  // alpha_l, ..., alpha_0
  GroupElement product() const;    // sign * T^m S T^{alpha_l} ... S T^{alpha_0}
};

// Uses the nearest-integer minus continued fraction of d/c.
WordDecomposition word_decompose(const GroupElement& g);

enum class SubgroupKind { Gamma0, Gamma };

struct Subgroup {
  SubgroupKind kind = SubgroupKind::Gamma0;
  long N = 1;
  bool contains(const GroupElement& g) const;
  long index() const;  // [SL2(Z) : subgroup], for Gamma(N) including -1 issues
  std::string str() const;
  bool operator==(const Subgroup& o) const { return kind == o.kind && N == o.N; }
};

// Right coset representatives of subgroup \ SL2(Z), by breadth-first closure
// under right multiplication with S and T; first element is the identity.
std::vector<GroupElement> enumerate_cosets(const Subgroup& h);
// Index of the representative beta with H g = H beta.
int coset_index(const Subgroup& h, const std::vector<GroupElement>& reps, const GroupElement& g);

// One (c, d) per Gamma_infty orbit with gcd 1, 0 <= c <= bound, |d| <= bound.
std::vector<std::pair<long, long>> enumerate_gamma_infty_orbit(long bound);

}  // namespace vra
