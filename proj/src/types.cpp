#include "vra/types.hpp"

#include <algorithm>

namespace vra {

TypeTree node(NodeKind k, std::vector<TypeTree> children) {
  auto n = std::make_shared<TypeNode>();
  n->kind = k;
  n->children = std::move(children);
  return n;
}

std::string TypeNode::pretty() const {
  auto c = [&](size_t i) { return children.at(i)->pretty(); };
  switch (kind) {
    case NodeKind::Trivial: return "triv";
    case NodeKind::Sym: return "sym(" + std::to_string(d) + ")";
    case NodeKind::Dual: return "dual(" + c(0) + ")";
    case NodeKind::Tensor: return "tensor(" + c(0) + ", " + c(1) + ")";
    case NodeKind::DirectSum: return "sum(" + c(0) + ", " + c(1) + ")";
    case NodeKind::Induced: return "ind(" + subgroup.str() + ", " + c(0) + ")";
    case NodeKind::Restricted: return "res(" + subgroup.str() + ", " + c(0) + ")";
    case NodeKind::ExtByCocycle: return "ext(" + c(0) + ", " + c(1) + ", " + cocycle_id + ")";
    case NodeKind::UniversalExt: {
      if (cocycle_id == "example") return "example23";
      std::string name = std::string(couniversal ? "couext" : "uext") + (parabolic ? "_par" : "");
      return name + "(" + c(0) + ", " + c(1) + ")";
    }
    case NodeKind::HigherOrder:
      if (subgroup.N == 1) return "horder(" + std::to_string(d) + ")";
      return "horder(" + std::to_string(d) + ", " + subgroup.str() + ")";
    case NodeKind::Raw: return "raw";
  }
  return "?";
}

// ---------------------------------------------------------------- caches

void ArithType::init_cache() const {
  std::call_once(cache_once_, [this] {
    RatMatrix N = T - RatMatrix::identity(dim);
    nil_powers_.push_back(RatMatrix::identity(dim));
    RatMatrix P = N;
    for (int j = 1; j <= dim; ++j) {
      if (P.is_zero()) {
        unipotent_ = true;
        break;
      }
      nil_powers_.push_back(P);
      P = P * N;
    }
    if (!unipotent_) {
      nil_powers_.clear();
      T_inv_ = T.inverse();
    }
    S_inv_ = S.inverse();
  });
}

const RatMatrix& ArithType::S_inverse() const {
  init_cache();
  return S_inv_;
}

bool ArithType::T_unipotent() const {
  init_cache();
  return unipotent_;
}

RatMatrix ArithType::T_power(const Integer& n) const {
  init_cache();
  if (unipotent_) {
    // (1 + N)^n = sum_j binom(n, j) N^j, valid for negative n as N is nilpotent
    RatMatrix r(dim, dim);
    Rational b = 1;
    for (size_t j = 0; j < nil_powers_.size(); ++j) {
      if (j > 0) b = b * (Rational(n) - Rational(long(j) - 1)) / Rational(long(j));
      if (b == 0) break;
      r = r + nil_powers_[j] * b;
    }
    return r;
  }
  if (!n.fits_slong_p()) throw Error(ErrorKind::Domain, "T exponent out of range");
  long e = n.get_si();
  return e >= 0 ? T.pow(e) : T_inv_.pow(-e);
}

// ---------------------------------------------------------------- relations

std::string verify_relations(const RatMatrix& S, const RatMatrix& T) {
  if (S.rows() != S.cols() || T.rows() != T.cols() || S.rows() != T.rows())
    return "shape";
  RatMatrix S2 = S * S;
  if (!(S2 * S2).is_identity()) return "S^4 = 1";
  RatMatrix ST = S * T;
  if (ST * ST * ST != S2) return "(ST)^3 = S^2";
  if (S2 * T != T * S2) return "S^2 central";
  return "";
}

void require_relations(const RatMatrix& S, const RatMatrix& T) {
  std::string bad = verify_relations(S, T);
  if (!bad.empty()) throw Error(ErrorKind::RelationViolation, "relation fails: " + bad);
}

// ---------------------------------------------------------------- evaluation

RatMatrix sym_matrix(int d, const GroupElement& g) {
  RatMatrix m(d + 1, d + 1);
  for (int j = 0; j <= d; ++j) {
    Poly p = poly_compose_moebius(Poly::monomial(j), Rational(g.a), Rational(g.b),
                                  Rational(g.c), Rational(g.d), d);
    for (int i = 0; i <= d; ++i) m(i, j) = p.coeff(i);
  }
  return m;
}

RatMatrix evaluate_type(const ArithType& t, const GroupElement& g) {
  if (!t.over_sl2z) {
    if (!t.group.contains(g))
      throw Error(ErrorKind::NotInSubgroup, g.str() + " is not in " + t.group.str());
    return evaluate_type(*t.induced, g).block(0, 0, t.dim, t.dim);
  }
  WordDecomposition w = word_decompose(g);
  RatMatrix m = t.T_power(w.m);
  for (const auto& e : w.exponents) m = m * t.S * t.T_power(e);
  if (w.sign < 0) m = t.S * t.S * m;
  return m;
}

// ---------------------------------------------------------------- layers

namespace {

std::vector<SocleLayer> layers_sum(const std::vector<SocleLayer>& a, const std::vector<SocleLayer>& b) {
  std::vector<SocleLayer> r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) {
      r[i].shift = std::max(r[i].shift, a[i].shift);
      r[i].parabolic_join = r[i].parabolic_join && a[i].parabolic_join;
    }
    if (i < b.size()) {
      r[i].shift = std::max(r[i].shift, b[i].shift);
      r[i].parabolic_join = r[i].parabolic_join && b[i].parabolic_join;
    }
  }
  return r;
}

std::vector<SocleLayer> layers_tensor(const std::vector<SocleLayer>& a, const std::vector<SocleLayer>& b) {
  std::vector<SocleLayer> r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) {
      auto& l = r[i + j];
      l.shift = std::max(l.shift, a[i].shift + b[j].shift);
      if (i > 0) l.parabolic_join = l.parabolic_join && a[i].parabolic_join;
      if (j > 0) l.parabolic_join = l.parabolic_join && b[j].parabolic_join;
    }
  return r;
}

std::vector<SocleLayer> layers_ext(const std::vector<SocleLayer>& sub, const std::vector<SocleLayer>& quot,
                                   bool parabolic) {
  std::vector<SocleLayer> r = sub;
  for (size_t i = 0; i < quot.size(); ++i) {
    SocleLayer l = quot[i];
    if (i == 0) l.parabolic_join = parabolic;
    r.push_back(l);
  }
  return r;
}

std::shared_ptr<ArithType> blank(int dim) {
  auto t = std::make_shared<ArithType>();
  t->dim = dim;
  return t;
}

TypePtr induce(const Subgroup& h, int dim, const std::function<RatMatrix(const GroupElement&)>& eval,
               TypeTree tree, std::vector<SocleLayer> layers) {
  auto reps = enumerate_cosets(h);
  int n = static_cast<int>(reps.size());
  auto t = blank(n * dim);
  t->S = RatMatrix(n * dim, n * dim);
  t->T = RatMatrix(n * dim, n * dim);
  const GroupElement gens[2] = {GroupElement::S(), GroupElement::T()};
  for (int gi = 0; gi < 2; ++gi) {
    const GroupElement ginv = gens[gi].inverse();
    RatMatrix& M = gi == 0 ? t->S : t->T;
    for (int i = 0; i < n; ++i) {
      int j = coset_index(h, reps, reps[i] * ginv);
      GroupElement x = reps[j] * gens[gi] * reps[i].inverse();
      M.set_block(j * dim, i * dim, eval(x));
    }
  }
  require_relations(t->S, t->T);
  auto nd = std::make_shared<TypeNode>();
  nd->kind = NodeKind::Induced;
  nd->subgroup = h;
  nd->children = {std::move(tree)};
  t->tree = nd;
  t->layers = std::move(layers);
  return t;
}

}  // namespace

// ---------------------------------------------------------------- constructors

TypePtr make_trivial() {
  auto t = blank(1);
  t->S = RatMatrix::identity(1);
  t->T = RatMatrix::identity(1);
  t->tree = node(NodeKind::Trivial);
  t->layers = {SocleLayer{0, true}};
  return t;
}

TypePtr make_sym(int d) {
  if (d < 0) throw Error(ErrorKind::Domain, "sym degree must be nonnegative");
  auto t = blank(d + 1);
  t->S = sym_matrix(d, GroupElement::S());
  t->T = sym_matrix(d, GroupElement::T());
  auto n = std::make_shared<TypeNode>();
  n->kind = NodeKind::Sym;
  n->d = d;
  t->tree = n;
  t->layers = {SocleLayer{d, true}};
  return t;
}

TypePtr make_subgroup_type(const Subgroup& h, int dim,
                           const std::function<RatMatrix(const GroupElement&)>& eval,
                           TypeTree tree, std::vector<SocleLayer> layers) {
  auto t = blank(dim);
  t->over_sl2z = false;
  t->group = h;
  t->induced = induce(h, dim, eval, tree, layers);
  t->tree = std::move(tree);
  t->layers = std::move(layers);
  t->cosets = enumerate_cosets(h);
  return t;
}

TypePtr make_dual(const TypePtr& a) {
  TypeTree tr = node(NodeKind::Dual, {a->tree});
  if (!a->over_sl2z) {
    TypePtr src = a;
    return make_subgroup_type(a->group, a->dim,
                              [src](const GroupElement& x) { return evaluate_type(*src, x).inverse().transpose(); },
                              tr, a->layers);
  }
  auto t = blank(a->dim);
  t->S = a->S.inverse().transpose();
  t->T = a->T.inverse().transpose();
  require_relations(t->S, t->T);
  t->tree = tr;
  t->layers = a->layers;
  return t;
}

TypePtr make_tensor(const TypePtr& a, const TypePtr& b) {
  if (a->over_sl2z != b->over_sl2z || (!a->over_sl2z && !(a->group == b->group)))
    throw Error(ErrorKind::GroupMismatch, "tensor of types over different groups");
  TypeTree tr = node(NodeKind::Tensor, {a->tree, b->tree});
  auto ls = layers_tensor(a->layers, b->layers);
  if (!a->over_sl2z) {
    TypePtr x = a, y = b;
    return make_subgroup_type(a->group, a->dim * b->dim,
                              [x, y](const GroupElement& g) { return kron(evaluate_type(*x, g), evaluate_type(*y, g)); },
                              tr, ls);
  }
  auto t = blank(a->dim * b->dim);
  t->S = kron(a->S, b->S);
  t->T = kron(a->T, b->T);
  require_relations(t->S, t->T);
  t->tree = tr;
  t->layers = ls;
  return t;
}

TypePtr make_direct_sum(const TypePtr& a, const TypePtr& b) {
  if (a->over_sl2z != b->over_sl2z || (!a->over_sl2z && !(a->group == b->group)))
    throw Error(ErrorKind::GroupMismatch, "sum of types over different groups");
  TypeTree tr = node(NodeKind::DirectSum, {a->tree, b->tree});
  auto ls = layers_sum(a->layers, b->layers);
  if (!a->over_sl2z) {
    TypePtr x = a, y = b;
    return make_subgroup_type(a->group, a->dim + b->dim,
                              [x, y](const GroupElement& g) { return direct_sum(evaluate_type(*x, g), evaluate_type(*y, g)); },
                              tr, ls);
  }
  auto t = blank(a->dim + b->dim);
  t->S = direct_sum(a->S, b->S);
  t->T = direct_sum(a->T, b->T);
  t->tree = tr;
  t->layers = ls;
  return t;
}

TypePtr make_induced(const Subgroup& h, const TypePtr& a) {
  if (!a->over_sl2z && !(a->group == h))
    throw Error(ErrorKind::GroupMismatch, "induction from a different subgroup");
  TypePtr src = a;
  return induce(h, a->dim, [src](const GroupElement& x) { return evaluate_type(*src, x); },
                a->tree, a->layers);
}

TypePtr make_restricted(const TypePtr& a, const Subgroup& h) {
  if (!a->over_sl2z) throw Error(ErrorKind::GroupMismatch, "restriction of a subgroup type");
  auto nd = std::make_shared<TypeNode>();
  nd->kind = NodeKind::Restricted;
  nd->subgroup = h;
  nd->children = {a->tree};
  TypePtr src = a;
  return make_subgroup_type(h, a->dim, [src](const GroupElement& x) { return evaluate_type(*src, x); },
                            nd, a->layers);
}

TypePtr make_raw(const RatMatrix& S, const RatMatrix& T) {
  require_relations(S, T);
  auto t = blank(S.rows());
  t->S = S;
  t->T = T;
  t->tree = node(NodeKind::Raw);
  return t;
}

TypePtr assemble_extension(const TypePtr& sub, const TypePtr& quot, const std::vector<ExtBlocks>& blocks,
                           bool couniversal, TypeTree tree, bool parabolic) {
  if (!sub->over_sl2z || !quot->over_sl2z)
    throw Error(ErrorKind::SubgroupUnsupported, "extensions are built over SL2(Z)");
  int e = static_cast<int>(blocks.size());
  int ds = sub->dim, dq = quot->dim;
  for (const auto& b : blocks)
    if (b.S.rows() != ds || b.S.cols() != dq || b.T.rows() != ds || b.T.cols() != dq)
      throw Error(ErrorKind::DimensionMismatch, "extension block shape");
  int dim = couniversal ? e * ds + dq : ds + e * dq;
  auto t = blank(dim);
  t->S = RatMatrix(dim, dim);
  t->T = RatMatrix(dim, dim);
  if (!couniversal) {
    t->S.set_block(0, 0, sub->S);
    t->T.set_block(0, 0, sub->T);
    for (int i = 0; i < e; ++i) {
      int off = ds + i * dq;
      t->S.set_block(0, off, blocks[i].S);
      t->T.set_block(0, off, blocks[i].T);
      t->S.set_block(off, off, quot->S);
      t->T.set_block(off, off, quot->T);
    }
  } else {
    int off = e * ds;
    for (int i = 0; i < e; ++i) {
      t->S.set_block(i * ds, i * ds, sub->S);
      t->T.set_block(i * ds, i * ds, sub->T);
      t->S.set_block(i * ds, off, blocks[i].S);
      t->T.set_block(i * ds, off, blocks[i].T);
    }
    t->S.set_block(off, off, quot->S);
    t->T.set_block(off, off, quot->T);
  }
  require_relations(t->S, t->T);
  t->tree = std::move(tree);
  t->layers = e == 0 ? layers_sum(sub->layers, quot->layers) : layers_ext(sub->layers, quot->layers, parabolic);
  return t;
}

RatVector phi_plus_coeffs() {
  return {Rational(192, 691), 0, Rational(-16, 3), 0, 16, 0, -16, 0, Rational(16, 3), 0, Rational(-192, 691)};
}

RatVector phi_minus_coeffs() { return {0, 768, 0, -4800, 0, 8064, 0, -4800, 0, 768, 0}; }

RatVector phi_zero_coeffs() { return {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1}; }

TypePtr make_example_type() {
  TypePtr triv = make_trivial();
  TypePtr quot = make_dual(make_sym(10));
  std::vector<ExtBlocks> blocks;
  for (const RatVector& row : {phi_plus_coeffs(), phi_minus_coeffs()}) {
    ExtBlocks b{RatMatrix(1, 11), RatMatrix(1, 11)};
    for (int j = 0; j < 11; ++j) b.S(0, j) = row[j];
    blocks.push_back(b);
  }
  auto nd = std::make_shared<TypeNode>();
  nd->kind = NodeKind::UniversalExt;
  nd->parabolic = true;
  nd->cocycle_id = "example";
  nd->children = {triv->tree, quot->tree};
  return assemble_extension(triv, quot, blocks, false, nd, true);
}

TypeInvariants type_invariants(const ArithType& t) {
  if (!t.tree || t.tree->kind == NodeKind::Raw || t.layers.empty())
    throw Error(ErrorKind::Unsupported, "invariants need a construction tree");
  TypeInvariants inv;
  inv.depth = static_cast<int>(t.layers.size()) - 1;
  for (size_t i = 0; i < t.layers.size(); ++i) {
    inv.shift += t.layers[i].shift;
    if (i > 0 && !t.layers[i].parabolic_join) ++inv.pxs;
  }
  inv.is_vra = true;
  return inv;
}

TypePtr dual_tensor_sum(const TypePtr& a, const TypePtr& b, TypeOp op) {
  switch (op) {
    case TypeOp::Dual: return make_dual(a);
    case TypeOp::Tensor: return make_tensor(a, b);
    case TypeOp::Sum: return make_direct_sum(a, b);
  }
  return nullptr;
}

}  // namespace vra
