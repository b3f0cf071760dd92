#include "vra/dsl.hpp"

#include <cctype>
#include <map>

#include "vra/cohomology.hpp"

namespace vra {

namespace {

enum class Kind { Type, Int, Group };

struct Signature {
  Kind result;
  std::vector<std::vector<Kind>> forms;  // accepted argument lists
};

const std::map<std::string, Signature>& signatures() {
  using K = Kind;
  static const std::map<std::string, Signature> s = {
      {"triv", {K::Type, {{}}}},
      {"example23", {K::Type, {{}}}},
      {"sym", {K::Type, {{K::Int}}}},
      {"dual", {K::Type, {{K::Type}}}},
      {"tensor", {K::Type, {{K::Type, K::Type}}}},
      {"sum", {K::Type, {{K::Type, K::Type}}}},
      {"ind", {K::Type, {{K::Group, K::Type}}}},
      {"res", {K::Type, {{K::Group, K::Type}}}},
      {"ext", {K::Type, {{K::Type, K::Type, K::Int}}}},
      {"uext", {K::Type, {{K::Type, K::Type}}}},
      {"uext_par", {K::Type, {{K::Type, K::Type}}}},
      {"couext", {K::Type, {{K::Type, K::Type}}}},
      {"couext_par", {K::Type, {{K::Type, K::Type}}}},
      {"horder", {K::Type, {{K::Int}, {K::Int, K::Group}}}},
      {"gamma0", {K::Group, {{K::Int}}}},
      {"gamma", {K::Group, {{K::Int}}}},
  };
  return s;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Type: return "type";
    case Kind::Int: return "integer";
    case Kind::Group: return "subgroup";
  }
  return "?";
}

Kind kind_of(const TypeExpr& e) { return e.is_int() ? Kind::Int : signatures().at(e.name).result; }

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  TypeExpr top() {
    TypeExpr e = expr();
    skip();
    if (p_ != s_.size()) fail(ErrorKind::SyntaxError, "unexpected '" + std::string(1, s_[p_]) + "'");
    if (kind_of(e) != Kind::Type) throw ParseError(ErrorKind::ArityError, e.begin, "a type expression is required");
    return e;
  }

 private:
  [[noreturn]] void fail(ErrorKind k, const std::string& msg) { throw ParseError(k, p_, msg); }

  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }

  TypeExpr expr() {
    skip();
    TypeExpr e;
    e.begin = p_;
    if (p_ >= s_.size()) fail(ErrorKind::SyntaxError, "expression expected, found end of input");
    char c = s_[p_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
      std::string digits = s_.substr(e.begin, p_ - e.begin);
      if (digits.size() > 9) throw ParseError(ErrorKind::SyntaxError, e.begin, "integer too large");
      e.value = std::stol(digits);
      e.end = p_;
      return e;
    }
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_'))
      fail(ErrorKind::SyntaxError, "unexpected '" + std::string(1, c) + "'");
    while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) ++p_;
    e.name = s_.substr(e.begin, p_ - e.begin);
    auto it = signatures().find(e.name);
    if (it == signatures().end())
      throw ParseError(ErrorKind::UnknownConstructor, e.begin, "unknown constructor '" + e.name + "'");
    skip();
    if (p_ < s_.size() && s_[p_] == '(') {
      ++p_;
      skip();
      if (p_ < s_.size() && s_[p_] == ')') {
        ++p_;
      } else {
        for (;;) {
          e.args.push_back(expr());
          skip();
          if (p_ < s_.size() && s_[p_] == ',') {
            ++p_;
            continue;
          }
          if (p_ < s_.size() && s_[p_] == ')') {
            ++p_;
            break;
          }
          fail(ErrorKind::SyntaxError, "expected ',' or ')'");
        }
      }
    }
    e.end = p_;
    check(e, it->second);
    return e;
  }

  void check(const TypeExpr& e, const Signature& sig) {
    const std::vector<Kind>* match = nullptr;
    for (const auto& f : sig.forms)
      if (f.size() == e.args.size()) match = &f;
    if (!match) {
      std::string want;
      for (const auto& f : sig.forms) want += (want.empty() ? "" : " or ") + std::to_string(f.size());
      throw ParseError(ErrorKind::ArityError, e.begin,
                       "'" + e.name + "' takes " + want + " argument(s), got " + std::to_string(e.args.size()));
    }
    for (size_t i = 0; i < e.args.size(); ++i)
      if (kind_of(e.args[i]) != (*match)[i])
        throw ParseError(ErrorKind::ArityError, e.args[i].begin,
                         "argument " + std::to_string(i + 1) + " of '" + e.name + "' must be a " + kind_name((*match)[i]));
  }

  const std::string& s_;
  size_t p_ = 0;
};

Subgroup group_of(const TypeExpr& g) {
  if (g.args[0].value < 1) throw Error(ErrorKind::Domain, "level must be positive");
  return Subgroup{g.name == "gamma0" ? SubgroupKind::Gamma0 : SubgroupKind::Gamma, g.args[0].value};
}

}  // namespace

TypeExpr parse_type_expr(const std::string& src) { return Parser(src).top(); }

std::string pretty(const TypeExpr& e) {
  if (e.is_int()) return std::to_string(e.value);
  if (e.args.empty()) return e.name;
  std::string s = e.name + "(";
  for (size_t i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + pretty(e.args[i]);
  return s + ")";
}

TypePtr build_type(const TypeExpr& e) {
  const std::string& n = e.name;
  auto arg = [&](size_t i) { return build_type(e.args[i]); };
  if (n == "triv") return make_trivial();
  if (n == "example23") return make_example_type();
  if (n == "sym") return make_sym(int(e.args[0].value));
  if (n == "dual") return make_dual(arg(0));
  if (n == "tensor") return make_tensor(arg(0), arg(1));
  if (n == "sum") return make_direct_sum(arg(0), arg(1));
  if (n == "ind") return make_induced(group_of(e.args[0]), arg(1));
  if (n == "res") return make_restricted(arg(1), group_of(e.args[0]));
  if (n == "ext") return ext_by_index(arg(0), arg(1), int(e.args[2].value));
  if (n == "uext" || n == "uext_par" || n == "couext" || n == "couext_par") {
    bool par = n.size() > 4 && n.substr(n.size() - 4) == "_par";
    return universal_extension(arg(0), arg(1), par, n.rfind("co", 0) == 0);
  }
  if (n == "horder")
    return higher_order_type(int(e.args[0].value), e.args.size() > 1 ? group_of(e.args[1]) : Subgroup{});
  throw Error(ErrorKind::UnknownConstructor, "'" + n + "' is not a type");
}

}  // namespace vra
