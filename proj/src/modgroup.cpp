#include "vra/modgroup.hpp"

#include <deque>
#include <numeric>
#include <sstream>

namespace vra {

GroupElement::GroupElement(Integer a_, Integer b_, Integer c_, Integer d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  if (a * d - b * c != 1) throw Error(ErrorKind::Domain, "determinant is not 1: " + str());
}

GroupElement GroupElement::from_bottom_row(const Integer& c, const Integer& d) {
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), d.get_mpz_t(), c.get_mpz_t());
  if (g != 1) throw Error(ErrorKind::Domain, "bottom row is not coprime");
  // s d + t c = 1  =>  a = s, b = -t
  return GroupElement(s, -t, c, d);
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  GroupElement r;
  r.a = a * o.a + b * o.c;
  r.b = a * o.b + b * o.d;
  r.c = c * o.a + d * o.c;
  r.d = c * o.b + d * o.d;
  return r;
}

std::string GroupElement::str() const {
  std::ostringstream os;
  os << "[[" << a << "," << b << "],[" << c << "," << d << "]]";
  return os.str();
}

Rational MinusCF::value() const {
  if (terms.empty()) throw Error(ErrorKind::Domain, "empty minus continued fraction");
  Rational x(terms.back());
  for (size_t i = terms.size() - 1; i-- > 0;) x = Rational(terms[i]) - 1 / x;
  return x;
}

namespace {

Integer ceil_q(const Rational& x) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Integer round_q(const Rational& x) {
  Rational h = x + Rational(1, 2);
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
  return r;
}

template <class Pick>
MinusCF expand(const Integer& d, const Integer& c, Pick pick) {
  if (c == 0) throw Error(ErrorKind::Domain, "minus continued fraction needs c != 0");
  Rational x(d, c);
  x.canonicalize();
  MinusCF cf;
  for (;;) {
    Integer a = pick(x);
    cf.terms.push_back(a);
    Rational rest = Rational(a) - x;
    if (rest == 0) break;
    x = 1 / rest;
  }
  return cf;
}

}  // namespace

MinusCF minus_cf(const Integer& d, const Integer& c) { return expand(d, c, ceil_q); }

MinusCF minus_cf_nearest(const Integer& d, const Integer& c) { return expand(d, c, round_q); }

GroupElement WordDecomposition::product() const {
  GroupElement g = GroupElement::T(0);
  g.b = m;
  for (const auto& e : exponents) {
    g = g * GroupElement::S();
    GroupElement t;
    t.b = e;
    g = g * t;
  }
  return sign < 0 ? -g : g;
}

WordDecomposition word_decompose(const GroupElement& g) {
  WordDecomposition w;
  if (g.c == 0) {
    w.sign = g.a > 0 ? 1 : -1;
    w.m = g.b * g.a;  // a = d = sign
    return w;
  }
  MinusCF cf = minus_cf_nearest(g.d, g.c);
  const GroupElement s_inv = GroupElement::S().inverse();
  GroupElement cur = g;
  for (size_t i = 0; i < cf.terms.size(); ++i) {
    GroupElement t;
    t.b = -cf.terms[i];
    cur = cur * t;
    w.exponents.insert(w.exponents.begin(), cf.terms[i]);
    if (i + 1 == cf.terms.size()) break;
    cur = cur * s_inv;
  }
  // cur = [[a', -c], [c, 0]] with c = +-1, i.e. +-T^{+-a'} S
  if (cur.d != 0 || (cur.c != 1 && cur.c != -1))
    throw Error(ErrorKind::Domain, "word decomposition did not terminate at T^m S");
  w.sign = cur.c > 0 ? 1 : -1;
  w.m = cur.a * cur.c;
  return w;
}

// ---------------------------------------------------------------- subgroups

namespace {
long mod(const Integer& x, long n) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(n));
  return r.get_si();
}

std::vector<long> prime_divisors(long n) {
  std::vector<long> ps;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}
}  // namespace

bool Subgroup::contains(const GroupElement& g) const {
  if (N == 1) return true;
  if (kind == SubgroupKind::Gamma0) return mod(g.c, N) == 0;
  return mod(g.c, N) == 0 && mod(g.b, N) == 0 && mod(g.a, N) == 1 % N && mod(g.d, N) == 1 % N;
}

long Subgroup::index() const {
  long idx = N;
  if (kind == SubgroupKind::Gamma0) {
    for (long p : prime_divisors(N)) idx = idx / p * (p + 1);
    return idx;
  }
  idx = N * N * N;
  for (long p : prime_divisors(N)) idx = idx / (p * p) * (p * p - 1);
  return idx;
}

std::string Subgroup::str() const {
  return std::string(kind == SubgroupKind::Gamma0 ? "gamma0(" : "gamma(") + std::to_string(N) + ")";
}

int coset_index(const Subgroup& h, const std::vector<GroupElement>& reps, const GroupElement& g) {
  for (size_t i = 0; i < reps.size(); ++i)
    if (h.contains(g * reps[i].inverse())) return static_cast<int>(i);
  return -1;
}

std::vector<GroupElement> enumerate_cosets(const Subgroup& h) {
  if (h.N <= 0) throw Error(ErrorKind::Domain, "subgroup level must be positive");
  std::vector<GroupElement> reps{GroupElement()};
  std::deque<size_t> todo{0};
  const GroupElement gens[2] = {GroupElement::S(), GroupElement::T()};
  while (!todo.empty()) {
    size_t i = todo.front();
    todo.pop_front();
    for (const auto& s : gens) {
      GroupElement g = reps[i] * s;
      if (coset_index(h, reps, g) < 0) {
        reps.push_back(g);
        todo.push_back(reps.size() - 1);
      }
    }
  }
  return reps;
}

std::vector<std::pair<long, long>> enumerate_gamma_infty_orbit(long bound) {
  if (bound < 1) throw Error(ErrorKind::Domain, "orbit bound must be positive");
  std::vector<std::pair<long, long>> out{{0, 1}};
  for (long c = 1; c <= bound; ++c)
    for (long d = -bound; d <= bound; ++d)
      if (std::gcd(c, d) == 1) out.emplace_back(c, d);
  return out;
}

}  // namespace vra
