#include "vra/cohomology.hpp"

#include <algorithm>
#include <functional>

namespace vra {

namespace {

void require_sl2z(const ArithType& t) {
  if (!t.over_sl2z)
    throw Error(ErrorKind::SubgroupUnsupported,
                "cohomology of subgroup types goes through the induced type (Shapiro)");
}

// Incremental row echelon span, used to pick representatives greedily.
class Span {
 public:
  bool add(RatVector v) {
    reduce(v);
    size_t p = 0;
    while (p < v.size() && v[p] == 0) ++p;
    if (p == v.size()) return false;
    Rational inv = 1 / v[p];
    for (auto& x : v) x *= inv;
    rows_.push_back(std::move(v));
    piv_.push_back(p);
    return true;
  }

 private:
  void reduce(RatVector& v) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
      Rational f = v[piv_[r]];
      if (f == 0) continue;
      for (size_t j = 0; j < v.size(); ++j)
        if (rows_[r][j] != 0) v[j] -= f * rows_[r][j];
    }
  }
  std::vector<RatVector> rows_;
  std::vector<size_t> piv_;
};

RatVector join(const RatVector& a, const RatVector& b) {
  RatVector r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Cocycle split(const TypePtr& t, const RatVector& v) {
  size_t n = static_cast<size_t>(t->dim);
  return Cocycle{t, RatVector(v.begin(), v.begin() + n), RatVector(v.begin() + n, v.end())};
}

// phi(w) = A valS + B valT, built by appending generators on the right.
struct Lin {
  RatMatrix A, B;
};

enum class Gen { S, Si, T, Ti };

void append(Lin& l, Gen g, const ArithType& t, const RatMatrix& Si, const RatMatrix& Ti) {
  RatMatrix I = RatMatrix::identity(t.dim);
  switch (g) {
    case Gen::S:
      l.A = Si * l.A + I;
      l.B = Si * l.B;
      break;
    case Gen::Si:
      l.A = t.S * l.A - t.S;
      l.B = t.S * l.B;
      break;
    case Gen::T:
      l.A = Ti * l.A;
      l.B = Ti * l.B + I;
      break;
    case Gen::Ti:
      l.A = t.T * l.A;
      l.B = t.T * l.B - t.T;
      break;
  }
}

// (rho(g)^-1, phi(g)) with composition (x)(y) = (My Mx, My vx + vy).
struct Pair {
  RatMatrix M;
  RatVector v;
};

Pair compose(const Pair& x, const Pair& y) { return Pair{y.M * x.M, y.M * x.v + y.v}; }

Pair pair_power(const Pair& p, Integer n, const Pair& unit) {
  Pair base = p, acc = unit;
  while (n > 0) {
    if (mpz_odd_p(n.get_mpz_t())) acc = compose(acc, base);
    n >>= 1;
    if (n > 0) base = compose(base, base);
  }
  return acc;
}

}  // namespace

int CohomologyBasis::dim_h1_par() const {
  int n = 0;
  for (bool b : parabolic_flags) n += b;
  return n;
}

RatMatrix cocycle_relation_matrix(const ArithType& t) {
  require_sl2z(t);
  const RatMatrix& Si = t.S_inverse();
  RatMatrix Ti = t.T.inverse();
  const std::vector<std::vector<Gen>> words = {
      {Gen::S, Gen::S, Gen::S, Gen::S},
      {Gen::S, Gen::T, Gen::S, Gen::T, Gen::S, Gen::T, Gen::Si, Gen::Si},
      {Gen::S, Gen::S, Gen::T, Gen::Si, Gen::Si, Gen::Ti},
  };
  int n = t.dim;
  RatMatrix m(3 * n, 2 * n);
  for (size_t w = 0; w < words.size(); ++w) {
    Lin l{RatMatrix(n, n), RatMatrix(n, n)};
    for (Gen g : words[w]) append(l, g, t, Si, Ti);
    m.set_block(int(w) * n, 0, l.A);
    m.set_block(int(w) * n, n, l.B);
  }
  return m;
}

bool cocycle_verify(const Cocycle& c) {
  if (!c.host) return false;
  size_t n = static_cast<size_t>(c.host->dim);
  if (c.valS.size() != n || c.valT.size() != n) return false;
  return is_zero(cocycle_relation_matrix(*c.host) * join(c.valS, c.valT));
}

RatVector cocycle_eval(const Cocycle& c, const GroupElement& g) {
  const ArithType& t = *c.host;
  require_sl2z(t);
  int n = t.dim;
  // phi(T^m) for m >= 0: sum_{i<m} rho(T)^-i valT
  std::function<RatVector(const Integer&)> phi_t;
  if (t.T_unipotent()) {
    RatMatrix N = t.T_power(-1) - RatMatrix::identity(n);
    phi_t = [N, &c, n](const Integer& m) {
      // sum_j binom(m, j + 1) N^j valT
      RatVector acc(n), v = c.valT;
      Rational b = Rational(m);
      for (int j = 0; j <= n && !is_zero(v) && b != 0; ++j) {
        acc = acc + b * v;
        v = N * v;
        b = b * (Rational(m) - (j + 1)) / (j + 2);
      }
      return acc;
    };
  } else {
    Pair unit{RatMatrix::identity(n), RatVector(n)};
    Pair pT{t.T_power(-1), c.valT};
    phi_t = [pT, unit](const Integer& m) { return pair_power(pT, m, unit).v; };
  }
  auto apply_t = [&](RatVector acc, const Integer& m) {
    if (m == 0) return acc;
    RatVector step = m > 0 ? phi_t(m) : -1 * (t.T_power(-m) * phi_t(-m));
    return t.T_power(-m) * acc + step;
  };
  const RatMatrix& Si = t.S_inverse();
  WordDecomposition w = word_decompose(g);
  RatVector acc(n);
  if (w.sign < 0) acc = Si * c.valS + c.valS;
  acc = apply_t(acc, w.m);
  for (const auto& e : w.exponents) acc = apply_t(Si * acc + c.valS, e);
  return acc;
}

Cocycle coboundary(const TypePtr& t, const RatVector& v) {
  require_sl2z(*t);
  if (static_cast<int>(v.size()) != t->dim) throw Error(ErrorKind::DimensionMismatch, "coboundary vector size");
  return Cocycle{t, t->S_inverse() * v - v, t->T.inverse() * v - v};
}

CohomologyBasis cocycle_space(const TypePtr& t) {
  require_sl2z(*t);
  int n = t->dim;
  CohomologyBasis out;
  out.host = t;
  RatMatrix rel = cocycle_relation_matrix(*t);
  for (const auto& v : mat_kernel(rel)) out.z1_basis.push_back(split(t, v));

  Span span;
  for (int i = 0; i < n; ++i) {
    RatVector e(n);
    e[i] = 1;
    Cocycle b = coboundary(t, e);
    if (span.add(join(b.valS, b.valT))) out.b1_basis.push_back(b);
  }
  // valT = 0 part: kernel of the valS columns alone
  for (const auto& s : mat_kernel(rel.block(0, 0, 3 * n, n))) {
    Cocycle c{t, s, RatVector(n)};
    if (span.add(join(c.valS, c.valT))) {
      out.h1_reps.push_back(c);
      out.parabolic_flags.push_back(true);
    }
  }
  for (const auto& z : out.z1_basis) {
    if (span.add(join(z.valS, z.valT))) {
      out.h1_reps.push_back(z);
      out.parabolic_flags.push_back(false);
    }
  }
  return out;
}

CohomologyBasis ext_group(const TypePtr& quot, const TypePtr& sub, bool parabolic) {
  if (quot->over_sl2z != sub->over_sl2z) throw Error(ErrorKind::GroupMismatch, "ext of types over different groups");
  CohomologyBasis b = cocycle_space(make_tensor(make_dual(quot), sub));
  if (parabolic) {
    std::vector<Cocycle> reps;
    for (size_t i = 0; i < b.h1_reps.size(); ++i)
      if (b.parabolic_flags[i]) reps.push_back(b.h1_reps[i]);
    b.h1_reps = reps;
    b.parabolic_flags.assign(reps.size(), true);
  }
  return b;
}

bool is_parabolic(const Cocycle& c) {
  RatMatrix m = c.host->T.inverse() - RatMatrix::identity(c.host->dim);
  return mat_solve(m, -1 * c.valT).has_value();
}

RatVector class_coordinates(const CohomologyBasis& b, const Cocycle& c) {
  if (!cocycle_verify(c)) throw Error(ErrorKind::RelationViolation, "not a cocycle");
  int n = b.host->dim, e = b.dim_h1(), k = b.dim_b1();
  RatMatrix m(2 * n, e + k);
  for (int i = 0; i < e + k; ++i) {
    const Cocycle& x = i < e ? b.h1_reps[i] : b.b1_basis[i - e];
    RatVector v = join(x.valS, x.valT);
    for (int r = 0; r < 2 * n; ++r) m(r, i) = v[r];
  }
  auto sol = mat_solve(m, join(c.valS, c.valT));
  if (!sol) throw Error(ErrorKind::BasisMismatch, "class is not in the span of the representatives");
  return RatVector(sol->begin(), sol->begin() + e);
}

TypePtr ext_by_cocycles(const TypePtr& sub, const TypePtr& quot, const std::vector<Cocycle>& cs, bool couniversal,
                        TypeTree tree, bool parabolic) {
  int ds = sub->dim, dq = quot->dim;
  std::vector<ExtBlocks> blocks;
  for (const auto& c : cs) {
    if (!c.host || c.host->dim != ds * dq)
      throw Error(ErrorKind::DimensionMismatch, "cocycle does not live in Hom(quot, sub)");
    if (!cocycle_verify(c)) throw Error(ErrorKind::RelationViolation, "extension data is not a cocycle");
    auto as_block = [&](const RatVector& w) {
      RatMatrix A(ds, dq);
      for (int i = 0; i < dq; ++i)
        for (int j = 0; j < ds; ++j) A(j, i) = w[size_t(i) * ds + j];
      return A;
    };
    blocks.push_back(ExtBlocks{sub->S * as_block(c.valS), sub->T * as_block(c.valT)});
  }
  return assemble_extension(sub, quot, blocks, couniversal, std::move(tree), parabolic);
}

TypePtr ext_by_cocycle(const TypePtr& sub, const TypePtr& quot, const Cocycle& c, const std::string& id) {
  auto nd = std::make_shared<TypeNode>();
  nd->kind = NodeKind::ExtByCocycle;
  nd->cocycle_id = id;
  nd->parabolic = is_parabolic(c);
  nd->children = {sub->tree, quot->tree};
  return ext_by_cocycles(sub, quot, {c}, false, nd, nd->parabolic);
}

TypePtr ext_by_index(const TypePtr& sub, const TypePtr& quot, int n) {
  CohomologyBasis b = ext_group(quot, sub, false);
  if (n < 0 || n >= b.dim_h1())
    throw Error(ErrorKind::Domain, "extension index " + std::to_string(n) + " out of range (dim H^1 = " +
                                       std::to_string(b.dim_h1()) + ")");
  return ext_by_cocycle(sub, quot, b.h1_reps[size_t(n)], std::to_string(n));
}

TypePtr universal_extension(const TypePtr& sub, const TypePtr& quot, bool parabolic, bool couniversal) {
  CohomologyBasis b = ext_group(quot, sub, parabolic);
  if (b.h1_reps.empty()) return make_direct_sum(sub, quot);
  auto nd = std::make_shared<TypeNode>();
  nd->kind = NodeKind::UniversalExt;
  nd->parabolic = parabolic;
  nd->couniversal = couniversal;
  nd->children = {sub->tree, quot->tree};
  bool all_par = true;
  for (bool f : b.parabolic_flags) all_par = all_par && f;
  return ext_by_cocycles(sub, quot, b.h1_reps, couniversal, nd, all_par);
}

RatMatrix couniversal_to_universal_matrix(int e, int dim_sub, int dim_quot) {
  int n = e * dim_sub + dim_quot;
  int m = dim_sub + e * dim_quot;
  RatMatrix M(m, n);
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < dim_sub; ++j) M(j, i * dim_sub + j) = 1;
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < dim_quot; ++j) M(dim_sub + i * dim_quot + j, e * dim_sub + j) = 1;
  return M;
}

RatVector couniversal_to_universal(const RatVector& v, int e, int dim_sub, int dim_quot) {
  if (e < 0 || static_cast<int>(v.size()) != e * dim_sub + dim_quot)
    throw Error(ErrorKind::BasisMismatch, "vector does not match the co-universal layout");
  return couniversal_to_universal_matrix(e, dim_sub, dim_quot) * v;
}

// ---------------------------------------------------------------- 1^[d]

int subgroup_h1_dim(const Subgroup& h) { return cocycle_space(make_induced(h, make_trivial())).dim_h1(); }

TypePtr higher_order_type(int d, const Subgroup& h) {
  if (d < 0) throw Error(ErrorKind::Domain, "order must be nonnegative");
  if (h.kind != SubgroupKind::Gamma0) throw Error(ErrorKind::SubgroupUnsupported, "higher-order types over gamma0(N)");
  auto tree_for = [&](int k) {
    auto nd = std::make_shared<TypeNode>();
    nd->kind = NodeKind::HigherOrder;
    nd->d = k;
    nd->subgroup = h;
    return TypeTree(nd);
  };
  TypePtr triv = make_trivial();
  if (h.N == 1) {
    auto t = std::make_shared<ArithType>();
    t->dim = 1;
    t->S = triv->S;
    t->T = triv->T;
    t->tree = tree_for(d);
    t->layers = triv->layers;
    return t;
  }
  TypePtr ind_one = make_induced(h, triv);
  CohomologyBasis base = cocycle_space(ind_one);
  const int hd = base.dim_h1();
  const int n = ind_one->dim;
  bool all_par = true;
  for (bool f : base.parabolic_flags) all_par = all_par && f;

  std::vector<SocleLayer> layers{SocleLayer{0, true}};
  TypePtr cur = make_subgroup_type(
      h, 1, [](const GroupElement&) { return RatMatrix::identity(1); }, tree_for(0), layers);
  for (int level = 1; level <= d && hd > 0; ++level) {
    TypePtr W = make_dual(cur);
    TypePtr indW = W->induced;
    const int w = W->dim;
    CohomologyBasis zb = cocycle_space(indW);
    const int K = zb.dim_z1();
    // Pi: blockwise coordinate 0, Ind W -> Ind 1
    auto project = [&](const RatVector& v) {
      RatVector r(n);
      for (int c = 0; c < n; ++c) r[c] = v[size_t(c) * w];
      return r;
    };
    RatMatrix sys(2 * n, K + n);
    for (int k = 0; k < K; ++k) {
      RatVector v = join(project(zb.z1_basis[k].valS), project(zb.z1_basis[k].valT));
      for (int r = 0; r < 2 * n; ++r) sys(r, k) = v[r];
    }
    for (int j = 0; j < n; ++j) {
      RatVector e(n);
      e[j] = 1;
      Cocycle b = coboundary(ind_one, e);
      RatVector v = join(b.valS, b.valT);
      for (int r = 0; r < 2 * n; ++r) sys(r, K + j) = v[r];
    }
    std::vector<Cocycle> lifts;
    for (const auto& hi : base.h1_reps) {
      auto sol = mat_solve(sys, join(hi.valS, hi.valT));
      if (!sol) throw Error(ErrorKind::HypothesisViolated, "class does not lift to the next order");
      Cocycle psi{indW, RatVector(size_t(n) * w), RatVector(size_t(n) * w)};
      for (int k = 0; k < K; ++k) {
        psi.valS = psi.valS + (*sol)[k] * zb.z1_basis[k].valS;
        psi.valT = psi.valT + (*sol)[k] * zb.z1_basis[k].valT;
      }
      lifts.push_back(psi);
    }
    TypePtr prev = cur;
    const int dim = 1 + hd * w;
    auto eval = [prev, lifts, w, hd, dim](const GroupElement& g) {
      RatMatrix m(dim, dim);
      m(0, 0) = 1;
      RatMatrix r = evaluate_type(*prev, g);
      for (int i = 0; i < hd; ++i) {
        RatVector phi = cocycle_eval(lifts[i], g);
        for (int j = 0; j < w; ++j) m(0, 1 + i * w + j) = phi[j];  // trivial-coset block
        m.set_block(1 + i * w, 1 + i * w, r);
      }
      return m;
    };
    layers.push_back(SocleLayer{0, all_par});
    cur = make_subgroup_type(h, dim, eval, tree_for(level), layers);
  }
  if (hd == 0) {
    return make_subgroup_type(
        h, 1, [](const GroupElement&) { return RatMatrix::identity(1); }, tree_for(d), {SocleLayer{0, true}});
  }
  return cur;
}

TypePtr type_from_tree(const TypeTree& t) {
  if (!t) throw Error(ErrorKind::Unsupported, "missing construction tree");
  auto c = [&](size_t i) { return type_from_tree(t->children.at(i)); };
  switch (t->kind) {
    case NodeKind::Trivial: return make_trivial();
    case NodeKind::Sym: return make_sym(t->d);
    case NodeKind::Dual: return make_dual(c(0));
    case NodeKind::Tensor: return make_tensor(c(0), c(1));
    case NodeKind::DirectSum: return make_direct_sum(c(0), c(1));
    case NodeKind::Induced: return make_induced(t->subgroup, c(0));
    case NodeKind::Restricted: return make_restricted(c(0), t->subgroup);
    case NodeKind::UniversalExt:
      if (t->cocycle_id == "example") return make_example_type();
      return universal_extension(c(0), c(1), t->parabolic, t->couniversal);
    case NodeKind::HigherOrder: return higher_order_type(t->d, t->subgroup);
    case NodeKind::ExtByCocycle:
      if (!t->cocycle_id.empty() && std::all_of(t->cocycle_id.begin(), t->cocycle_id.end(), ::isdigit))
        return ext_by_index(c(0), c(1), std::stoi(t->cocycle_id));
      break;
    case NodeKind::Raw: break;
  }
  throw Error(ErrorKind::Unsupported, "node '" + t->pretty() + "' cannot be rebuilt from its tree");
}

}  // namespace vra
