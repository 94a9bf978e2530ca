#ifndef LWLITE_AST_HPP
#define LWLITE_AST_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lwlite/diag.hpp"

namespace lwlite {

// ---- surface types (annotation syntax for overload declarations) ----

struct SurfaceTypeNode;
using SurfaceType = std::shared_ptr<const SurfaceTypeNode>;

struct STVar {
  std::string name;  // 'a  stored as "a"
};
struct STCon {
  std::string name;  // int, string, bool
};
struct STPostfix {
  SurfaceType arg;
  std::string ctor;  // only "list"
};
struct STArrow {
  SurfaceType dom;
  SurfaceType cod;
};
struct STRecord {
  std::vector<std::pair<std::string, SurfaceType>> fields;
  std::optional<std::string> tail;  // row variable name, if open
};

struct SurfaceTypeNode {
  std::variant<STVar, STCon, STPostfix, STArrow, STRecord> v;
  Span span;
};

SurfaceType st_make(std::variant<STVar, STCon, STPostfix, STArrow, STRecord> v, Span s);

// ---- surface expressions ----

struct SurfaceExprNode;
using SurfaceExpr = std::shared_ptr<const SurfaceExprNode>;

struct EVar {
  std::string name;  // plain or operator base; in mangled mode may contain %, $ or a ? prefix
};
struct EImplicit {
  std::string base;
};
struct EInt {
  long long value;
};
struct EStr {
  std::string value;
};
struct EBool {
  bool value;
};
struct ELam {
  std::string param;
  SurfaceExpr body;
};
struct EApp {
  SurfaceExpr fn;
  SurfaceExpr arg;
};
struct ELet {
  bool recursive;
  std::string name;
  SurfaceExpr bound;
  SurfaceExpr body;
};
struct ELetOver {
  std::string name;
  SurfaceExpr bound;
  SurfaceExpr body;
};
struct EOverload {
  std::string name;
  SurfaceType annotation;
  SurfaceExpr body;
};
struct ERecord {
  std::vector<std::pair<std::string, SurfaceExpr>> fields;  // non-empty, duplicates allowed
};
struct ESel {
  SurfaceExpr subject;
  std::string label;
  int index;  // occurrence index among equal labels; 0 except in re-parsed core
};
struct EList {
  std::vector<SurfaceExpr> elems;
};
struct ECons {
  SurfaceExpr head;
  SurfaceExpr tail;
};
struct EMatch {
  SurfaceExpr subject;
  SurfaceExpr nil_arm;
  std::optional<std::pair<std::string, SurfaceExpr>> singleton_arm;
  std::string cons_head;
  std::string cons_tail;
  SurfaceExpr cons_arm;
};
struct EEject {
  std::vector<std::string> restriction;  // empty = full ejection
  SurfaceExpr subject;
};
struct EInject {
  std::vector<std::string> restriction;  // empty = full injection
  SurfaceExpr subject;
};

using SurfaceExprVariant =
    std::variant<EVar, EImplicit, EInt, EStr, EBool, ELam, EApp, ELet, ELetOver, EOverload,
                 ERecord, ESel, EList, ECons, EMatch, EEject, EInject>;

struct SurfaceExprNode {
  SurfaceExprVariant v;
  Span span;
};

SurfaceExpr mk_expr(SurfaceExprVariant v, Span s);

// ---- top-level items ----

struct TopItem {
  enum class Kind { Let, LetOver, Overload };
  Kind kind = Kind::Let;
  bool recursive = false;
  std::string name;
  SurfaceExpr expr;        // absent for Overload
  SurfaceType annotation;  // present for Overload only
  Span span;
};

struct SurfaceProgram {
  std::vector<TopItem> items;
};

bool expr_equal(const SurfaceExpr& a, const SurfaceExpr& b);  // spans ignored
bool program_equal(const SurfaceProgram& a, const SurfaceProgram& b);

std::string print_expr(const SurfaceExpr& e);
std::string print_program(const SurfaceProgram& p);

}  // namespace lwlite

#endif
