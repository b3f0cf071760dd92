#pragma once

// Z^1, B^1, H^1 of SL2(Z) with values in an arithmetic type; extensions.
//
// Convention: right cocycles, phi(g h) = rho(h)^-1 phi(g) + phi(h). A cocycle
// is fixed by (valS, valT) = (phi(S), phi(T)); it extends to words by
//   phi(g_1 ... g_n) = sum_i rho(g_{i+1} ... g_n)^-1 phi(g_i),
//   phi(S^-1) = -rho(S) phi(S),  phi(T^-1) = -rho(T) phi(T).
// The linear conditions on (valS, valT) are phi(w) = 0 for the three words
// S^4, (ST)^3 S^-2, S^2 T S^-2 T^-1. Coboundaries: phi_v(g) = rho(g)^-1 v - v.

#include <vector>

#include "vra/types.hpp"

namespace vra {

struct Cocycle {
  TypePtr host;
  RatVector valS, valT;
};

struct CohomologyBasis {
  TypePtr host;
  std::vector<Cocycle> z1_basis, b1_basis, h1_reps;
  std::vector<bool> parabolic_flags;  // per h1 representative
  int dim_z1() const { return static_cast<int>(z1_basis.size()); }
  int dim_b1() const { return static_cast<int>(b1_basis.size()); }
  int dim_h1() const { return static_cast<int>(h1_reps.size()); }
  int dim_h1_par() const;
};

// Stacked relation matrix (3 dim) x (2 dim) in the unknowns (valS, valT).
RatMatrix cocycle_relation_matrix(const ArithType& t);
bool cocycle_verify(const Cocycle& c);
RatVector cocycle_eval(const Cocycle& c, const GroupElement& g);
Cocycle coboundary(const TypePtr& t, const RatVector& v);

CohomologyBasis cocycle_space(const TypePtr& t);
// Classes of Ext^1(quot, sub), i.e. H^1 of tensor(dual(quot), sub).
CohomologyBasis ext_group(const TypePtr& quot, const TypePtr& sub, bool parabolic);

// Whether a cocycle is cohomologous to one with valT = 0.
bool is_parabolic(const Cocycle& c);
// Coordinates of the class of c in the h1_reps of b; throws if c is not a cocycle.
RatVector class_coordinates(const CohomologyBasis& b, const Cocycle& c);

// Extension of quot by sub along cocycles of tensor(dual(quot), sub).
TypePtr ext_by_cocycles(const TypePtr& sub, const TypePtr& quot, const std::vector<Cocycle>& cs,
                        bool couniversal, TypeTree tree, bool parabolic);
TypePtr ext_by_cocycle(const TypePtr& sub, const TypePtr& quot, const Cocycle& c, const std::string& id);

// Extension along the n-th representative of H^1 in ext_group(quot, sub, false);
// the tree records n as the cocycle id.
TypePtr ext_by_index(const TypePtr& sub, const TypePtr& quot, int n);

TypePtr universal_extension(const TypePtr& sub, const TypePtr& quot, bool parabolic, bool couniversal);
// (v_1 .. v_e, v') -> (v_1 + ... + v_e, v', ..., v').
RatVector couniversal_to_universal(const RatVector& v, int e, int dim_sub, int dim_quot);
RatMatrix couniversal_to_universal_matrix(int e, int dim_sub, int dim_quot);

// The higher-order type 1^[d] over gamma0(N).
TypePtr higher_order_type(int d, const Subgroup& h);
// dim H^1(h, 1) through Shapiro.
int subgroup_h1_dim(const Subgroup& h);

// Rebuilds a type from its construction tree. Raw nodes and extensions by
// cocycles other than indexed ones are Unsupported.
TypePtr type_from_tree(const TypeTree& t);

}  // namespace vra
