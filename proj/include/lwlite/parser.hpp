#ifndef LWLITE_PARSER_HPP
#define LWLITE_PARSER_HPP

#include <string>

#include "lwlite/ast.hpp"

namespace lwlite {

// mangled: accept %n/$n name suffixes, ?name as plain variables and .l@k
// selections (the syntax emitted by the core printer).
SurfaceProgram parse_program(const std::string& source, bool mangled = false);

SurfaceType parse_type(const std::string& source);

// A single expression, e.g. re-parsed emitted core.
SurfaceExpr parse_expr_source(const std::string& source, bool mangled = false);

// A single REPL input: either a top-level item or a bare expression.
struct ReplInput {
  bool is_item = false;
  TopItem item;
  SurfaceExpr expr;
};
ReplInput parse_repl_input(const std::string& source);

}  // namespace lwlite

#endif
