#include "vra/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "vra/analytic.hpp"
#include "vra/cohomology.hpp"
#include "vra/dsl.hpp"
#include "vra/recursion.hpp"
#include "vra/structure.hpp"

namespace vra {

namespace {

using json = nlohmann::json;

json cx(Complex z) { return json::array({z.real(), z.imag()}); }

json cx_list(const std::vector<Complex>& v) {
  json a = json::array();
  for (const Complex& z : v) a.push_back(cx(z));
  return a;
}

json matrix_json(const RatMatrix& m) { return json(m.to_strings()); }

// "x+yi", "x-yi", "yi", "x"
bool parse_complex(std::string s, Complex& out) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) return false;
  auto num = [](const std::string& x, double& v) {
    if (x.empty() || x == "+") return v = 1, true;
    if (x == "-") return v = -1, true;
    try {
      size_t used = 0;
      v = std::stod(x, &used);
      return used == x.size();
    } catch (const std::exception&) {
      return false;
    }
  };
  double re = 0, im = 0;
  if (t.back() != 'i') {
    if (!num(t, re) || t == "+" || t == "-") return false;
    out = Complex(re, 0);
    return true;
  }
  t.pop_back();
  size_t split = std::string::npos;
  for (size_t i = t.size(); i-- > 1;)
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split = i;
      break;
    }
  if (split == std::string::npos) {
    if (!num(t, im)) return false;
  } else {
    if (!num(t.substr(0, split), re) || t.substr(0, split) == "+" || t.substr(0, split) == "-") return false;
    if (!num(t.substr(split), im)) return false;
  }
  out = Complex(re, im);
  return true;
}

// "E4", "Delta", "E4*E6*Delta"
QSeries named_series(const std::string& spec, long n) {
  QSeries acc;
  bool first = true;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, '*')) {
    if (part != "E2" && part != "E4" && part != "E6" && part != "Delta")
      throw Error(ErrorKind::Domain, "unknown form '" + part + "' (E2, E4, E6, Delta and products)");
    QSeries f = classical_qexp(part, n);
    acc = first ? f : qs_mul(acc, f);
    first = false;
  }
  if (first) throw Error(ErrorKind::Domain, "empty form name");
  return acc;
}

json series_json(const QSeries& f) {
  json coeffs = json::array();
  for (long n = f.n0; n <= f.nmax; ++n) {
    json value = json::array();
    for (const Poly& p : f.c[size_t(n - f.n0)]) {
      json cs = json::array();
      for (const Rational& r : p.coeffs()) cs.push_back(to_string(r));
      value.push_back(cs);
    }
    coeffs.push_back(json{{"n", to_string(make_q(n, f.h))}, {"value", value}});
  }
  return json{{"weight", f.weight}, {"h", f.h}, {"n0", f.n0}, {"nmax", f.nmax}, {"coeffs", coeffs}};
}

json vector_json(const RatVector& v) {
  json a = json::array();
  for (const Rational& r : v) a.push_back(to_string(r));
  return a;
}

json mlde_json(const MLDE& m) {
  json g = json::array(), h = json::array();
  for (const auto& p : m.g) g.push_back(p.str());
  for (const auto& p : m.h) h.push_back(p.str());
  return json{{"k", m.k}, {"r", m.r}, {"l", m.l}, {"g", g}, {"h", h}, {"g0_zero", m.g0_zero},
              {"verified_to", m.verified_to}};
}

void pretty_print(const json& j, std::ostream& out, const std::string& prefix) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      pretty_print(it.value(), out, prefix.empty() ? it.key() : prefix + "." + it.key());
  } else if (j.is_array() && !j.empty() && (j[0].is_array() || j[0].is_object())) {
    for (size_t i = 0; i < j.size(); ++i) pretty_print(j[i], out, prefix + "[" + std::to_string(i) + "]");
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

struct Options {
  long prec = 50;
  long bound = 200;
  double tol = 1e-6;
  std::string tau = "0+1i";
  std::uint64_t seed = 1;
  bool pretty = false;
  std::string type, name, forms = "Delta";
  int k = 0, order = 8, psi = 0;
  long samples = 2000;
  std::string m = "0";
  int sym = 0, index = 0;
  long n = 0;
  bool parabolic = false;
};

Complex tau_of(const Options& o) {
  Complex t;
  if (!parse_complex(o.tau, t)) throw Error(ErrorKind::Domain, "cannot parse tau '" + o.tau + "'");
  if (t.imag() <= 0) throw Error(ErrorKind::Domain, "tau must lie in the upper half plane");
  return t;
}

TypePtr type_of(const Options& o) {
  if (o.type.empty()) throw Error(ErrorKind::Domain, "--type is required");
  return build_type(o.type);
}

// --name wins; otherwise element --index of the basis of M_k(--type).
QSeries recursion_input(const Options& o, long n) {
  if (!o.name.empty()) return named_series(o.name, n);
  if (o.k == 0 && o.type.empty()) throw Error(ErrorKind::Domain, "give --name or --type with --k");
  TypePtr t = o.type.empty() ? make_trivial() : type_of(o);
  int d = -1;
  if (t->tree && t->tree->kind == NodeKind::Sym) d = t->tree->d;
  if (t->tree && t->tree->kind == NodeKind::Trivial) d = 0;
  if (d < 0) throw Error(ErrorKind::Unsupported, "recursion input is taken from bases of triv and sym(d)");
  std::vector<QSeries> basis;
  if (d == 0) {
    basis = classical_basis(o.k, n);
  } else {
    for (const KSElement& e : kuga_shimura_basis(o.k, d, n)) basis.push_back(e.F);
  }
  if (o.index < 0 || o.index >= long(basis.size()))
    throw Error(ErrorKind::Domain, "--index out of range (dimension " + std::to_string(basis.size()) + ")");
  return basis[size_t(o.index)];
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Vector-valued modular forms of virtually real-arithmetic type", "vra"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--prec", o.prec, "q-expansion order")->capture_default_str();
  app.add_option("--bound", o.bound, "lattice truncation / sample bound")->capture_default_str();
  app.add_option("--tol", o.tol, "tolerance")->capture_default_str();
  app.add_option("--tau", o.tau, "point in the upper half plane, \"x+yi\"")->capture_default_str();
  app.add_option("--seed", o.seed, "probe randomness")->capture_default_str();
  app.add_flag("--pretty", o.pretty, "key: value lines instead of JSON");

  json result;
  auto sub = [](CLI::App* parent, const std::string& n, const std::string& d) {
    CLI::App* s = parent->add_subcommand(n, d);
    s->fallthrough();
    return s;
  };

  CLI::App* type = sub(&app, "type", "type construction");
  type->require_subcommand(1);
  CLI::App* t_build = sub(type, "build", "build a type and print its matrices");
  CLI::App* t_verify = sub(type, "verify", "check S^4 = 1, (ST)^3 = S^2, S^2 central");
  for (CLI::App* s : {t_build, t_verify}) s->add_option("--type", o.type, "type expression")->required();

  CLI::App* coh = sub(&app, "cohomology", "group cohomology");
  coh->require_subcommand(1);
  CLI::App* h1 = sub(coh, "h1", "dimensions of Z^1, B^1, H^1");
  h1->add_option("--type", o.type)->required();
  h1->add_flag("--parabolic", o.parabolic, "parabolic H^1 only");

  CLI::App* forms = sub(&app, "forms", "modular forms");
  forms->require_subcommand(1);
  CLI::App* f_qexp = sub(forms, "qexp", "q-expansion of E2, E4, E6, Delta or a product");
  f_qexp->add_option("--name", o.name, "E2, E4, E6, Delta or a product such as E4*Delta")->required();
  CLI::App* f_basis = sub(forms, "basis", "Kuga-Shimura basis of M_k(sym^d)");
  f_basis->add_option("--k", o.k, "weight")->required();
  f_basis->add_option("--sym", o.sym, "degree d")->capture_default_str();
  f_basis->add_option("--type", o.type, "triv or sym(d), instead of --sym");
  CLI::App* f_dim = sub(forms, "dim", "dim M_k(rho)");
  f_dim->add_option("--type", o.type)->required();
  f_dim->add_option("--k", o.k, "weight")->required();

  CLI::App* rec = sub(&app, "recursion", "MLDE-driven recursions");
  rec->require_subcommand(1);
  CLI::App* r_fourier = sub(rec, "fourier", "Fourier coefficients from the MLDE");
  CLI::App* r_taylor = sub(rec, "taylor", "Taylor coefficients at tau");
  for (CLI::App* s : {r_fourier, r_taylor}) {
    s->add_option("--name", o.name, "E2, E4, E6, Delta or a product");
    s->add_option("--type", o.type, "triv or sym(d); the form is a basis element of M_k");
    s->add_option("--k", o.k, "weight");
    s->add_option("--index", o.index, "basis element")->capture_default_str();
  }
  r_fourier->add_option("--n", o.n, "last exponent (default --prec)");
  r_taylor->add_option("--order", o.order, "highest derivative")->capture_default_str();

  CLI::App* an = sub(&app, "analytic", "floating-point evaluation");
  an->require_subcommand(1);
  CLI::App* a_eis = sub(an, "eisenstein", "Eisenstein / Poincare series");
  a_eis->add_option("--k", o.k, "weight")->required();
  a_eis->add_option("--type", o.type)->required();
  a_eis->add_option("--m", o.m, "exponent of the seed e(m tau)")->capture_default_str();
  a_eis->add_option("--psi", o.psi, "index of the unit seed vector")->capture_default_str();
  CLI::App* a_mock = sub(an, "mockfit", "periods of the Eichler integral of Delta");
  CLI::App* a_iter = sub(an, "iterint", "iterated integrals of depth <= 2");
  a_iter->add_option("--forms", o.forms, "comma-separated forms")->capture_default_str();
  CLI::App* a_probe = sub(an, "probe", "norm growth probe");
  a_probe->add_option("--type", o.type)->required();
  a_probe->add_option("--samples", o.samples)->capture_default_str();

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(int(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (o.prec < 1 || o.bound < 1 || !(o.tol > 0)) throw Error(ErrorKind::Domain, "--prec, --bound, --tol must be positive");
    if (*t_build) {
      TypePtr t = type_of(o);
      json inv;
      try {
        TypeInvariants v = type_invariants(*t);
        inv = json{{"depth", v.depth}, {"shift", v.shift}, {"pxs", v.pxs}, {"is_vra", v.is_vra}};
      } catch (const Error&) {
        inv = nullptr;
      }
      result = json{{"type", t->tree ? t->tree->pretty() : "raw"}, {"dim", t->dim}, {"S", matrix_json(t->S)},
                    {"T", matrix_json(t->T)}, {"invariants", inv}};
    } else if (*t_verify) {
      TypePtr t = type_of(o);
      std::string bad = verify_relations(t->S, t->T);
      result = bad.empty() ? json{{"relations", "pass"}} : json{{"relations", "fail"}, {"failed", bad}};
    } else if (*h1) {
      CohomologyBasis b = cocycle_space(type_of(o));
      if (o.parabolic)
        result = json{{"dimH1par", b.dim_h1_par()}};
      else
      {
        json reps = json::array();
        for (size_t i = 0; i < b.h1_reps.size(); ++i)
          reps.push_back(json{{"valS", vector_json(b.h1_reps[i].valS)}, {"valT", vector_json(b.h1_reps[i].valT)},
                              {"parabolic", bool(b.parabolic_flags[i])}});
        result = json{{"dimZ1", b.dim_z1()}, {"dimB1", b.dim_b1()}, {"dimH1", b.dim_h1()},
                      {"dimH1par", b.dim_h1_par()}, {"representatives", reps}};
      }
    } else if (*f_qexp) {
      result = series_json(named_series(o.name, o.prec));
      result["name"] = o.name;
    } else if (*f_basis) {
      int d = o.sym;
      if (!o.type.empty()) {
        TypePtr t = type_of(o);
        d = -1;
        if (t->tree && t->tree->kind == NodeKind::Sym) d = t->tree->d;
        if (t->tree && t->tree->kind == NodeKind::Trivial) d = 0;
        if (d < 0) throw Error(ErrorKind::Unsupported, "bases are constructed for triv and sym(d)");
      }
      if (d < 0) throw Error(ErrorKind::Domain, "--sym must be nonnegative");
      result = json::array();
      for (const KSElement& e : kuga_shimura_basis(o.k, d, o.prec)) {
        json j = series_json(e.F);
        j["j"] = e.j;
        j["kappa"] = e.kappa;
        j["n"] = e.n;
        j["index"] = e.index;
        result.push_back(j);
      }
    } else if (*f_dim) {
      DimResult r = dim_modular_forms(*type_of(o), o.k);
      result = json{{"dim", r.dim}, {"valid", r.valid}};
      if (!r.valid) {
        result["lower"] = r.lower;
        result["upper"] = r.upper;
        result["note"] = r.note;
      }
    } else if (*r_fourier) {
      long n_max = o.n > 0 ? o.n : o.prec;
      QSeries f = recursion_input(o, std::max<long>(n_max, 40));
      MLDE m = find_mlde(qs_truncate(f, 40), 4, 40);
      long last = std::max(last_indicial_root(m, f.n0, n_max), f.n0);
      QSeries g = fourier_recursion(m, qs_truncate(f, last), n_max);
      bool agree = true;
      for (long n = f.n0; n <= n_max; ++n) agree = agree && g.at(n) == f.at(n);
      result = series_json(g);
      result["mlde"] = mlde_json(m);
      result["seeds"] = last - f.n0 + 1;
      result["matches_qexp"] = agree;
    } else if (*r_taylor) {
      Complex t0 = tau_of(o);
      QSeries f = recursion_input(o, std::max<long>(o.prec, 40));
      MLDE m = find_mlde(qs_truncate(f, 40), 4, 40);
      NumericValue tail = eval_numeric(f, t0, o.prec);
      auto seeds = taylor_seeds(f, t0, m.r, o.prec);
      TaylorSeries ts = taylor_recursion(m, t0, seeds, o.order);
      json der = json::array(), coef = json::array();
      for (long n = 0; n <= o.order; ++n) {
        der.push_back(cx_list(ts.derivative(n)));
        coef.push_back(cx_list(ts.coefficient(n)));
      }
      result = json{{"tau0", cx(t0)}, {"mlde", mlde_json(m)}, {"derivatives", der}, {"coefficients", coef},
                    {"seed_tail", tail.tail}};
    } else if (*a_eis) {
      TypePtr t = type_of(o);
      if (o.psi < 0 || o.psi >= t->dim) throw Error(ErrorKind::Domain, "--psi out of range");
      std::vector<Poly> psi(size_t(t->dim), Poly(Var::Tau));
      psi[size_t(o.psi)] = Poly::constant(1, Var::Tau);
      NumericField nf;
      nf.tau = tau_of(o);
      nf.bound = o.bound;
      nf.tol = o.tol;
      Rational m;
      try {
        m = rational_from_string(o.m);
      } catch (const std::exception&) {
        throw Error(ErrorKind::Domain, "cannot parse --m '" + o.m + "'");
      }
      PoincareResult r = poincare_series(o.k, *t, psi, m, nf);
      result = json{{"value", cx_list(r.value)}, {"tail", r.tail}, {"terms", r.terms},
                    {"zero_by_convention", r.zero_by_convention}, {"convergence_bound", convergence_bound(*t)}};
    } else if (*a_mock) {
      MockFit m = mock_fit(classical_qexp("Delta", o.prec), o.prec, o.tol);
      result = json{{"a", cx(m.fit.a)}, {"b", cx(m.fit.b)}, {"c", cx(m.fit.c)}, {"ratio", m.ratio},
                    {"residual", m.fit.residual}, {"period_residual", m.period.residual}};
    } else if (*a_iter) {
      std::vector<QSeries> fs;
      std::stringstream ss(o.forms);
      std::string part;
      while (std::getline(ss, part, ',')) fs.push_back(named_series(part, o.prec));
      NumericField nf;
      nf.n_cut = o.prec;
      nf.tol = o.tol;
      IteratedValue v = iterated_integral(fs, tau_of(o), nf);
      json c = json::array();
      for (const auto& row : v.c) c.push_back(cx_list(row));
      result = json{{"depth", v.depth}, {"coefficients", v.depth == 1 ? c[0] : c}, {"error", v.error}};
    } else if (*a_probe) {
      ProbeResult r = norm_growth_probe(*type_of(o), o.bound, o.seed, o.samples);
      result = json{{"slope", r.slope}, {"max_slope", r.max_slope}, {"bound", r.bound}, {"within", r.within},
                    {"samples", r.samples}};
    }
  } catch (const ParseError& e) {
    json j{{"error", e.kind_name()}, {"message", e.what()}, {"offset", e.offset()}};
    out << (o.pretty ? "" : j.dump()) << "\n";
    if (o.pretty) pretty_print(j, out, "");
    return 1;
  } catch (const Error& e) {
    json j{{"error", e.kind_name()}, {"message", e.what()}};
    if (o.pretty)
      pretty_print(j, out, "");
    else
      out << j.dump() << "\n";
    return 1;
  }

  if (o.pretty)
    pretty_print(result, out, "");
  else
    out << result.dump() << "\n";
  return 0;
}

}  // namespace vra
