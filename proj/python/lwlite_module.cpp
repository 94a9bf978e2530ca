#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lwlite/driver.hpp"
#include "lwlite/parser.hpp"

namespace py = pybind11;
using namespace lwlite;

namespace {

CheckedSource check_or_throw(const std::string& source) {
  CheckedSource checked = check_source(source);
  if (!checked.result.ok()) {
    std::string msg;
    for (const Diagnostic& d : checked.result.diagnostics) {
      if (!msg.empty()) msg += "\n";
      msg += render_diagnostic(source, d);
    }
    throw std::runtime_error(msg);
  }
  return checked;
}

std::vector<std::pair<std::string, std::string>> py_check(const std::string& source) {
  CheckedSource checked = check_or_throw(source);
  std::vector<std::pair<std::string, std::string>> out;
  for (const ProgramBinding& b : checked.result.bindings)
    out.emplace_back(display_base(b.display_name), normalize_print(b.scheme));
  return out;
}

std::vector<std::pair<std::string, std::string>> py_run(const std::string& source) {
  CheckedSource checked = check_or_throw(source);
  EvaluatedProgram evaluated = eval_program(checked.result.core);
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < checked.result.core.items.size(); ++i) {
    const ProgramBinding& b = checked.result.bindings[i];
    if (!scheme_is_ground(b.scheme) || !value_printable(evaluated.values[i])) continue;
    out.emplace_back(display_base(b.display_name), print_value(evaluated.values[i]));
  }
  return out;
}

std::string py_core(const std::string& source) {
  CheckedSource checked = check_or_throw(source);
  return print_core_program(checked.result.core);
}

// inferred type of an expression, optionally after a prelude program
std::string py_type_of(const std::string& expr_text, const std::string& prelude) {
  Session session;
  Env env = builtin_env(session);
  if (!prelude.empty()) {
    SurfaceProgram program = parse_program(prelude);
    ProgramResult result = infer_program(env, program, session);
    if (!result.ok()) {
      std::string msg;
      for (const Diagnostic& d : result.diagnostics) msg += d.message + "\n";
      throw std::runtime_error(msg);
    }
    env = result.env;
  }
  SurfaceExpr expr = parse_expr_source(expr_text);
  InferResult r = infer(env, expr, session);
  Env env1 = r.subst(env);
  ResolveResult res = resolve_constraints(env1, r.cs, r.type, r.core, session);
  return normalize_print(res.cs, res.subst(r.type));
}

}  // namespace

PYBIND11_MODULE(_lwlite, m) {
  m.doc() = "lw-lite: extensible records, fine-grained overloading, inject/eject";
  m.def("check", &py_check, py::arg("source"),
        "Type-check a program; returns (name, type) pairs per top-level binding.");
  m.def("run", &py_run, py::arg("source"),
        "Type-check, translate and evaluate; returns (name, value) pairs for ground bindings.");
  m.def("core", &py_core, py::arg("source"),
        "Return the dictionary-passing translation in core syntax.");
  m.def("type_of", &py_type_of, py::arg("expr"), py::arg("prelude") = "",
        "Infer the (possibly constrained) type of an expression.");
}
