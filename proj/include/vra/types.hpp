#pragma once

// Arithmetic types: exact images of S and T plus the construction tree.

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "vra/exact.hpp"
#include "vra/modgroup.hpp"

namespace vra {

enum class NodeKind {
  Trivial,
  Sym,
  Dual,
  Tensor,
  DirectSum,
  Induced,
  Restricted,
  ExtByCocycle,
  UniversalExt,
  HigherOrder,
  Raw,
};

struct TypeNode;
using TypeTree = std::shared_ptr<const TypeNode>;

struct TypeNode {
  NodeKind kind = NodeKind::Raw;
  int d = 0;                 // Sym degree, HigherOrder order
  Subgroup subgroup;         // Induced, Restricted, HigherOrder
  bool parabolic = true;     // extension nodes
  bool couniversal = false;  // UniversalExt variant
  std::string cocycle_id;    // ExtByCocycle
  std::vector<TypeTree> children;

  std::string pretty() const;
};

// One socle layer: largest symmetric power occurring, and whether the
// extension joining it to the layer below is parabolic.
struct SocleLayer {
  int shift = 0;
  bool parabolic_join = true;
};

struct TypeInvariants {
  int depth = 0;
  int shift = 0;
  int pxs = 0;
  bool is_vra = true;
};

class ArithType;
using TypePtr = std::shared_ptr<const ArithType>;

class ArithType {
 public:
  int dim = 0;
  RatMatrix S, T;                // images of S and T (SL2(Z) types only)
  bool over_sl2z = true;
  Subgroup group;                // when !over_sl2z
  TypeTree tree;
  std::vector<SocleLayer> layers;

  // Subgroup types are stored through their induction to SL2(Z); the first
  // coset is the trivial one, and its diagonal block is the type itself.
  TypePtr induced;
  std::vector<GroupElement> cosets;

  // rho(T)^n with a binomial shortcut when rho(T) is unipotent.
  RatMatrix T_power(const Integer& n) const;
  const RatMatrix& S_inverse() const;
  bool T_unipotent() const;

 private:
  void init_cache() const;
  mutable std::once_flag cache_once_;
  mutable bool unipotent_ = false;
  mutable std::vector<RatMatrix> nil_powers_;  // (T - 1)^j
  mutable RatMatrix T_inv_, S_inv_;
};

TypePtr make_trivial();
TypePtr make_sym(int d);
TypePtr make_dual(const TypePtr& t);
TypePtr make_tensor(const TypePtr& a, const TypePtr& b);
TypePtr make_direct_sum(const TypePtr& a, const TypePtr& b);
TypePtr make_induced(const Subgroup& h, const TypePtr& t);
TypePtr make_restricted(const TypePtr& t, const Subgroup& h);
TypePtr make_raw(const RatMatrix& S, const RatMatrix& T);
// Subgroup type from an evaluator on elements of h.
TypePtr make_subgroup_type(const Subgroup& h, int dim,
                           const std::function<RatMatrix(const GroupElement&)>& eval,
                           TypeTree tree, std::vector<SocleLayer> layers);

// [[rho_sub, Phi_1 ... Phi_e], [0, rho_quot x I_e]] (universal layout) or
// [[rho_sub x I_e, Phi], [0, rho_quot]] (couniversal layout). Blocks are
// given for S and T; relations are verified.
struct ExtBlocks {
  RatMatrix S, T;  // dim_sub x dim_quot
};
TypePtr assemble_extension(const TypePtr& sub, const TypePtr& quot,
                           const std::vector<ExtBlocks>& blocks, bool couniversal,
                           TypeTree tree, bool parabolic);

// The 23-dimensional extension of dual(sym^10) by the trivial type with the
// period cocycles phi_+ and phi_- in the first row.
TypePtr make_example_type();
RatVector phi_plus_coeffs();
RatVector phi_minus_coeffs();
RatVector phi_zero_coeffs();

RatMatrix sym_matrix(int d, const GroupElement& g);
RatMatrix evaluate_type(const ArithType& t, const GroupElement& g);

// Empty string on success, else the name of the first failing relation.
std::string verify_relations(const RatMatrix& S, const RatMatrix& T);
void require_relations(const RatMatrix& S, const RatMatrix& T);

TypeInvariants type_invariants(const ArithType& t);

enum class TypeOp { Dual, Tensor, Sum };
TypePtr dual_tensor_sum(const TypePtr& a, const TypePtr& b, TypeOp op);

TypeTree node(NodeKind k, std::vector<TypeTree> children = {});

}  // namespace vra
