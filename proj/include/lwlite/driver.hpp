#ifndef LWLITE_DRIVER_HPP
#define LWLITE_DRIVER_HPP

#include <optional>
#include <string>

#include "lwlite/eval.hpp"
#include "lwlite/infer.hpp"

namespace lwlite {

struct CheckedSource {
  Session session;
  SurfaceProgram program;
  ProgramResult result;
};

// parse + infer; diagnostics are collected in result.diagnostics
CheckedSource check_source(const std::string& source);

// Evaluates the translated top-level items in order. Names map to values by
// core-item position.
struct EvaluatedProgram {
  std::vector<ValuePtr> values;  // aligned with result.core.items
  ValueEnv env;
};
EvaluatedProgram eval_program(const CoreProgram& core);

// ground = constraint-free and variable-free
bool scheme_is_ground(const Scheme& s);

// ---- expectation comments (`//! type: n : t` / `//! value: n = v`) ----

struct Expectation {
  enum class Kind { Type, Value };
  Kind kind = Kind::Type;
  std::string name;
  std::string text;
  int line = 0;
};
std::vector<Expectation> scan_expectations(const std::string& source);

struct FileReport {
  std::string path;
  int checked = 0;
  std::vector<std::string> failures;
};
FileReport run_expectations(const std::string& path, const std::string& source);

// ---- translation-correctness of inject/eject (the executable lemmas) ----

struct JectCheck {
  int total = 0;
  int passed = 0;
  std::vector<std::string> failures;
};
JectCheck check_ject_translations(const ProgramResult& result, Session& session);

// Re-checks the printed core: every re-checked binding scheme must subsume
// the dictionary-expanded form of its source scheme (the translation is at
// least as general), and emitting core again must reproduce the same text.
struct CoreRoundTrip {
  bool ok = false;
  std::string error;
};
CoreRoundTrip check_core_roundtrip(const CheckedSource& checked);

// general's body, with its quantified variables flexible, matches specific's
// body under a one-way substitution.
bool scheme_subsumes(const Scheme& general, const Scheme& specific, Session& session);

// The dictionary-expanded (arrow-ified) form of a constrained scheme.
Scheme arrowify(const Scheme& s);

// ---- CLI commands; each returns the process exit code ----

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_run(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_core(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_test(const std::string& dir, std::ostream& out, std::ostream& err);
int cmd_repl(std::istream& in, std::ostream& out);

// ---- REPL engine (used by cmd_repl and tests) ----

struct ReplState {
  Session session;
  Env env;
  ValueEnv values;
  bool done = false;
  ReplState();
};
std::string repl_eval_line(ReplState& state, const std::string& line);

}  // namespace lwlite

#endif
