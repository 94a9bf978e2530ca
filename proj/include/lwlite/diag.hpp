#ifndef LWLITE_DIAG_HPP
#define LWLITE_DIAG_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lwlite {

// Byte-offset range into the original source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  Span span;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

struct lw_error : std::runtime_error {
  Span span;
  lw_error(const std::string& msg, Span s = {}) : std::runtime_error(msg), span(s) {}
};

struct lex_error : lw_error {
  using lw_error::lw_error;
};

struct parse_error : lw_error {
  using lw_error::lw_error;
};

struct type_error : lw_error {
  using lw_error::lw_error;
};

struct eval_error : lw_error {
  using lw_error::lw_error;
};

// Broken invariant inside the implementation itself, not a user error.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

// 1-based line/column for a byte offset.
std::pair<int, int> line_col(const std::string& source, std::size_t offset);

std::string render_diagnostic(const std::string& source, const Diagnostic& d);

}  // namespace lwlite

#endif
