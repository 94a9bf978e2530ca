#ifndef LWLITE_INFER_HPP
#define LWLITE_INFER_HPP

#include "lwlite/ast.hpp"
#include "lwlite/constraints.hpp"
#include "lwlite/core.hpp"
#include "lwlite/types.hpp"

namespace lwlite {

struct InferResult {
  ConstraintSet cs;
  Type type;
  CoreExpr core;
  Subst subst;
};

// One record per inject/eject node, for the translation-correctness checks.
struct JectRecord {
  bool is_inject = false;
  Span span;
  Env env;  // environment at the node, after the node's substitution
  ConstraintSet cs;
  Type type;
  CoreExpr core;
};

struct InferTrace {
  std::vector<JectRecord> jects;
};

InferResult infer(const Env& env, const SurfaceExpr& e, Session& session,
                  InferTrace* trace = nullptr);

// compact + solve-to-fixpoint against `env`; wraps solved constraints around
// `core` and folds the unifications the solutions force.
struct ResolveResult {
  ConstraintSet cs;
  CoreExpr core;
  Subst subst;
};
ResolveResult resolve_constraints(const Env& env, const ConstraintSet& cs, const Type& body,
                                  const CoreExpr& core, Session& session);

// Elaborates a type annotation: named variables become fresh variables
// (row kind in tail position, star elsewhere).
Type elaborate_annotation(const SurfaceType& ann, Session& session);

struct ProgramBinding {
  std::string display_name;
  EnvName env_name;
  Scheme scheme;
};

struct ProgramResult {
  std::vector<ProgramBinding> bindings;
  CoreProgram core;
  Diagnostics diagnostics;
  Env env;  // final environment (builtins + program)
  InferTrace trace;
  bool ok() const {
    for (const auto& d : diagnostics)
      if (d.severity == Severity::Error) return false;
    return true;
  }
};

ProgramResult infer_program(const Env& builtins, const SurfaceProgram& program, Session& session);

// Type environment for the builtins (operators, string_of_int, map, foldl, ...).
Env builtin_env(Session& session);

}  // namespace lwlite

#endif
