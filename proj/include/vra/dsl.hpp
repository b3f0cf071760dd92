#pragma once

// Type expressions:
//   triv | example23 | sym(d) | dual(e) | tensor(e, e) | sum(e, e)
//   | ind(G, e) | res(G, e) | ext(e, e, n) | uext(e, e) | uext_par(e, e)
//   | couext(e, e) | couext_par(e, e) | horder(d) | horder(d, G)
// with G = gamma0(N) | gamma(N). ext(sub, quot, n) uses the n-th class of
// H^1; the uext family extends quot by sub.

#include <string>
#include <vector>

#include "vra/types.hpp"

namespace vra {

struct TypeExpr {
  std::string name;            // constructor, or empty for an integer literal
  long value = 0;              // integer literal
  std::vector<TypeExpr> args;
  size_t begin = 0, end = 0;   // byte span in the source

  bool is_int() const { return name.empty(); }
  bool operator==(const TypeExpr& o) const {  // spans ignored
    return name == o.name && value == o.value && args == o.args;
  }
};

class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, size_t offset, const std::string& msg)
      : Error(kind, "offset " + std::to_string(offset) + ": " + msg), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// SyntaxError, ArityError (count or kind of arguments), UnknownConstructor.
TypeExpr parse_type_expr(const std::string& src);
std::string pretty(const TypeExpr& e);
TypePtr build_type(const TypeExpr& e);
inline TypePtr build_type(const std::string& src) { return build_type(parse_type_expr(src)); }

}  // namespace vra
