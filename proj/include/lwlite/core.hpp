#ifndef LWLITE_CORE_HPP
#define LWLITE_CORE_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lwlite/diag.hpp"

namespace lwlite {

// Translation target: the constraint-free lambda/let/record fragment.
// Mangled names (o%n, o$k, ?x) are ordinary variables here.

struct CoreNode;
using CoreExpr = std::shared_ptr<const CoreNode>;

struct CVar {
  std::string name;
};
struct CInt {
  long long value;
};
struct CStr {
  std::string value;
};
struct CBool {
  bool value;
};
struct CLam {
  std::string param;
  CoreExpr body;
};
struct CApp {
  CoreExpr fn;
  CoreExpr arg;
};
struct CLet {
  bool recursive;
  std::string name;
  int dict_arity;  // leading constraint-lambda parameters of `bound`
  CoreExpr bound;
  CoreExpr body;
};
struct CSel {
  CoreExpr subject;
  std::string label;
  int index;  // occurrence among equal labels, 0 = first
};
struct CRecord {
  std::vector<std::pair<std::string, CoreExpr>> fields;
};
struct CList {
  std::vector<CoreExpr> elems;
};
struct CCons {
  CoreExpr head;
  CoreExpr tail;
};
struct CMatch {
  CoreExpr subject;
  CoreExpr nil_arm;
  std::optional<std::pair<std::string, CoreExpr>> singleton_arm;
  std::string cons_head;
  std::string cons_tail;
  CoreExpr cons_arm;
};

using CoreVariant =
    std::variant<CVar, CInt, CStr, CBool, CLam, CApp, CLet, CSel, CRecord, CList, CCons, CMatch>;

struct CoreNode {
  CoreVariant v;
};

CoreExpr mk_core(CoreVariant v);
CoreExpr cvar(std::string name);
CoreExpr capp(CoreExpr fn, CoreExpr arg);
CoreExpr clam(std::string param, CoreExpr body);
CoreExpr clet(std::string name, CoreExpr bound, CoreExpr body, bool recursive = false,
              int dict_arity = 0);

struct CoreItem {
  std::string name;          // mangled binding name (twice, add$37, ...)
  std::string display_name;  // user-facing name (twice, add, ...)
  bool recursive = false;
  int dict_arity = 0;
  CoreExpr expr;
};

struct CoreProgram {
  std::vector<CoreItem> items;
};

// Capture-aware replacement of free occurrences of `name`; used to thread
// dictionary arguments through recursive calls.
CoreExpr substitute_var(const CoreExpr& e, const std::string& name, const CoreExpr& replacement);

std::string print_core(const CoreExpr& e);
std::string print_core_program(const CoreProgram& p);

// Checks that every binding with n constraint parameters is a curried
// lambda of n such parameters and that each use site immediately applies
// n dictionary arguments.
Diagnostics check_core_arity(const CoreProgram& p);

}  // namespace lwlite

#endif
