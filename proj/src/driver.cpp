#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lwlite/driver.hpp"
#include "lwlite/equiv.hpp"
#include "lwlite/parser.hpp"

namespace lwlite {

CheckedSource check_source(const std::string& source) {
  CheckedSource out;
  try {
    out.program = parse_program(source);
  } catch (const lw_error& ex) {
    out.result.diagnostics.push_back({Severity::Error, ex.span, ex.what()});
    return out;
  }
  Env builtins = builtin_env(out.session);
  out.result = infer_program(builtins, out.program, out.session);
  return out;
}

EvaluatedProgram eval_program(const CoreProgram& core) {
  EvaluatedProgram out;
  out.env = builtin_values();
  for (const CoreItem& item : core.items) {
    ValuePtr v;
    if (item.recursive) {
      auto slot = std::make_shared<ValuePtr>();
      ValueEnv inner = std::make_shared<ValueEnvNode>(ValueEnvNode{item.name, slot, out.env});
      *slot = eval(inner, item.expr);
      v = *slot;
      out.env = inner;
    } else {
      v = eval(out.env, item.expr);
      out.env = env_bind(out.env, item.name, v);
    }
    out.values.push_back(v);
  }
  return out;
}

bool scheme_is_ground(const Scheme& s) {
  return s.constraints.empty() && s.quantified.empty() && ftv(s.body).empty();
}

// ---- expectations ----

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// A binding name at the start of `rest`: either an identifier or a
// parenthesized operator. Returns name and the remainder.
bool split_name(const std::string& rest, std::string& name, std::string& tail) {
  std::string s = trim(rest);
  if (s.empty()) return false;
  if (s[0] == '(') {
    std::size_t close = s.find(')');
    if (close == std::string::npos) return false;
    name = s.substr(1, close - 1);
    // strip inner spaces: ( * ) names the operator *
    name = trim(name);
    tail = trim(s.substr(close + 1));
    return true;
  }
  std::size_t e = s.find_first_of(" \t:=");
  if (e == std::string::npos) return false;
  name = s.substr(0, e);
  tail = trim(s.substr(e));
  return true;
}

}  // namespace

std::vector<Expectation> scan_expectations(const std::string& source) {
  std::vector<Expectation> out;
  std::istringstream in(source);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.rfind("//!", 0) != 0) continue;
    t = trim(t.substr(3));
    Expectation exp;
    exp.line = lineno;
    if (t.rfind("type:", 0) == 0) {
      exp.kind = Expectation::Kind::Type;
      t = trim(t.substr(5));
    } else if (t.rfind("value:", 0) == 0) {
      exp.kind = Expectation::Kind::Value;
      t = trim(t.substr(6));
    } else {
      continue;
    }
    std::string name, tail;
    if (!split_name(t, name, tail)) continue;
    char sep = exp.kind == Expectation::Kind::Type ? ':' : '=';
    if (tail.empty() || tail[0] != sep) continue;
    exp.name = name;
    exp.text = trim(tail.substr(1));
    out.push_back(std::move(exp));
  }
  return out;
}

FileReport run_expectations(const std::string& path, const std::string& source) {
  FileReport rep;
  rep.path = path;
  CheckedSource checked = check_source(source);
  std::vector<Expectation> exps = scan_expectations(source);
  rep.checked = static_cast<int>(exps.size());
  if (!checked.result.ok()) {
    for (const Diagnostic& d : checked.result.diagnostics)
      rep.failures.push_back(render_diagnostic(source, d));
    return rep;
  }

  bool need_values = false;
  for (const Expectation& e : exps)
    if (e.kind == Expectation::Kind::Value) need_values = true;
  std::optional<EvaluatedProgram> evaluated;
  if (need_values) {
    try {
      evaluated = eval_program(checked.result.core);
    } catch (const lw_error& ex) {
      rep.failures.push_back(std::string("evaluation failed: ") + ex.what());
      return rep;
    }
  }

  auto find_binding = [&](const std::string& name) -> const ProgramBinding* {
    const ProgramBinding* found = nullptr;
    for (const ProgramBinding& b : checked.result.bindings)
      if (b.display_name == name) found = &b;
    return found;
  };

  for (const Expectation& exp : exps) {
    std::string where = path + ":" + std::to_string(exp.line);
    if (exp.kind == Expectation::Kind::Type) {
      const ProgramBinding* b = find_binding(exp.name);
      if (!b) {
        rep.failures.push_back(where + ": no binding named '" + exp.name + "'");
        continue;
      }
      try {
        auto [ecs, ebody] = parse_printed_scheme(exp.text, checked.session);
        if (!constrained_equiv(b->scheme.constraints, b->scheme.body, ecs, ebody))
          rep.failures.push_back(where + ": type of '" + exp.name + "' is " +
                                 normalize_print(b->scheme) + ", expected " + exp.text);
      } catch (const lw_error& ex) {
        rep.failures.push_back(where + ": bad type expectation: " + ex.what());
      }
    } else {
      int index = -1;
      for (std::size_t i = 0; i < checked.result.core.items.size(); ++i)
        if (checked.result.core.items[i].display_name == exp.name) index = static_cast<int>(i);
      if (index < 0) {
        rep.failures.push_back(where + ": no binding named '" + exp.name + "'");
        continue;
      }
      std::string got = print_value(evaluated->values[index]);
      if (got != exp.text)
        rep.failures.push_back(where + ": value of '" + exp.name + "' is " + got +
                               ", expected " + exp.text);
    }
  }
  return rep;
}

// ---- translation correctness ----

Scheme arrowify(const Scheme& s) {
  Type body = s.body;
  const auto& items = s.constraints.items();
  for (auto it = items.rbegin(); it != items.rend(); ++it) body = t_arrow(it->second, body);
  return Scheme{s.quantified, {}, body};
}

JectCheck check_ject_translations(const ProgramResult& result, Session& session) {
  JectCheck out;
  for (const JectRecord& record : result.trace.jects) {
    ++out.total;
    std::string tag = std::string(record.is_inject ? "inject" : "eject") + " node";
    try {
      Env env;
      for (const auto& [name, scheme] : record.env.entries) {
        if (name.form == EnvName::Form::Principal) continue;
        std::string plain = name.form == EnvName::Form::Plain ? name.base : name.text();
        env.bind(EnvName::plain(plain), arrowify(scheme));
      }
      for (const auto& [key, type] : record.cs.items())
        env.bind(EnvName::plain(key.text()), mono_scheme(type));
      std::string text = print_core(record.core);
      SurfaceExpr expr = parse_expr_source(text, true);
      InferResult r = infer(env, expr, session);
      if (!r.cs.empty()) {
        out.failures.push_back(tag + ": residual constraints " +
                               normalize_print(r.cs, r.type));
        continue;
      }
      // inference returns the principal type; the derivation at the node's
      // type exists when the node type is one of its instances
      bool covers = type_equiv(r.type, record.type) ||
                    instance_match(mono_scheme(record.type), r.type, session).has_value();
      if (!covers) {
        out.failures.push_back(tag + ": re-inferred " + normalize_print(r.type) +
                               ", which does not cover " + normalize_print(record.type));
        continue;
      }
      ++out.passed;
    } catch (const lw_error& ex) {
      out.failures.push_back(tag + ": " + ex.what());
    }
  }
  return out;
}

bool scheme_subsumes(const Scheme& general, const Scheme& specific, Session& session) {
  if (!specific.constraints.empty() || !general.constraints.empty())
    throw internal_error("scheme_subsumes expects constraint-free schemes");
  // refresh the specific side so variable ids cannot collide
  Type target = instantiate(Scheme{specific.quantified, {}, specific.body}, session).second;
  return instance_match(mono_scheme(target), general.body, session).has_value();
}

CoreRoundTrip check_core_roundtrip(const CheckedSource& checked) {
  CoreRoundTrip out;
  std::string text = print_core_program(checked.result.core);
  SurfaceProgram program;
  try {
    program = parse_program(text, true);
  } catch (const lw_error& ex) {
    out.error = std::string("emitted core does not re-parse: ") + ex.what();
    return out;
  }
  Session session;
  Env builtins = builtin_env(session);
  ProgramResult rechecked = infer_program(builtins, program, session);
  if (!rechecked.ok()) {
    for (const Diagnostic& d : rechecked.diagnostics)
      out.error += "emitted core does not re-check: " + d.message + "\n";
    return out;
  }
  if (rechecked.bindings.size() != checked.result.bindings.size()) {
    out.error = "re-checked binding count differs";
    return out;
  }
  for (std::size_t i = 0; i < rechecked.bindings.size(); ++i) {
    Scheme expected = arrowify(checked.result.bindings[i].scheme);
    const Scheme& actual = rechecked.bindings[i].scheme;
    if (!scheme_subsumes(actual, expected, session)) {
      out.error = "binding '" + checked.result.bindings[i].display_name +
                  "' re-checks to " + normalize_print(actual) +
                  " which does not cover " + normalize_print(expected);
      return out;
    }
  }
  // emitting core from the re-checked program is a fixpoint
  std::string again = print_core_program(rechecked.core);
  if (again != text) {
    out.error = "core emission is not stable under re-checking";
    return out;
  }
  out.ok = true;
  return out;
}

// ---- CLI commands ----

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int load_checked(const std::string& path, std::ostream& err, CheckedSource& out,
                 std::string& source) {
  std::optional<std::string> text = read_file(path);
  if (!text) {
    err << "cannot read " << path << "\n";
    return 2;
  }
  source = *text;
  out = check_source(source);
  if (!out.result.ok()) {
    for (const Diagnostic& d : out.result.diagnostics)
      err << path << ":" << render_diagnostic(source, d) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err) {
  CheckedSource checked;
  std::string source;
  int rc = load_checked(path, err, checked, source);
  if (rc) return rc;
  for (const ProgramBinding& b : checked.result.bindings)
    out << display_base(b.display_name) << " : " << normalize_print(b.scheme) << "\n";
  return 0;
}

int cmd_run(const std::string& path, std::ostream& out, std::ostream& err) {
  CheckedSource checked;
  std::string source;
  int rc = load_checked(path, err, checked, source);
  if (rc) return rc;
  try {
    EvaluatedProgram evaluated = eval_program(checked.result.core);
    for (std::size_t i = 0; i < checked.result.core.items.size(); ++i) {
      const ProgramBinding& b = checked.result.bindings[i];
      if (!scheme_is_ground(b.scheme)) continue;
      if (!value_printable(evaluated.values[i])) continue;
      out << display_base(b.display_name) << " = " << print_value(evaluated.values[i]) << "\n";
    }
  } catch (const eval_error& ex) {
    err << path << ": evaluation failed: " << ex.what() << "\n";
    return 3;
  }
  return 0;
}

int cmd_core(const std::string& path, std::ostream& out, std::ostream& err) {
  CheckedSource checked;
  std::string source;
  int rc = load_checked(path, err, checked, source);
  if (rc) return rc;
  out << print_core_program(checked.result.core);
  CoreRoundTrip rt = check_core_roundtrip(checked);
  if (!rt.ok) {
    err << path << ": " << rt.error << "\n";
    return 1;
  }
  return 0;
}

int cmd_test(const std::string& dir, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    err << dir << " is not a directory\n";
    return 2;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".lw")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  int failed_files = 0;
  int total_checks = 0;
  for (const fs::path& file : files) {
    std::optional<std::string> text = read_file(file.string());
    if (!text) {
      out << "FAIL  " << file.string() << " (unreadable)\n";
      ++failed_files;
      continue;
    }
    FileReport rep = run_expectations(file.string(), *text);
    total_checks += rep.checked;
    if (rep.failures.empty()) {
      out << "PASS  " << file.filename().string() << "  (" << rep.checked << " checks)\n";
    } else {
      ++failed_files;
      out << "FAIL  " << file.filename().string() << "\n";
      for (const std::string& f : rep.failures) out << "      " << f << "\n";
    }
  }
  out << files.size() << " files, " << total_checks << " checks, " << failed_files
      << " failing\n";
  return failed_files == 0 ? 0 : 1;
}

// ---- REPL ----

ReplState::ReplState() {
  env = builtin_env(session);
  values = builtin_values();
}

namespace {

std::string describe_constrained(const ConstraintSet& cs, const Type& t) {
  return normalize_print(cs, t);
}

std::string handle_item(ReplState& state, const TopItem& item) {
  SurfaceProgram program;
  program.items.push_back(item);
  ProgramResult result = infer_program(state.env, program, state.session);
  if (!result.ok()) {
    std::string out;
    for (const Diagnostic& d : result.diagnostics) out += "error: " + d.message + "\n";
    return out;
  }
  state.env = result.env;
  std::string out;
  for (const CoreItem& core_item : result.core.items) {
    ValuePtr v;
    if (core_item.recursive) {
      auto slot = std::make_shared<ValuePtr>();
      ValueEnv inner =
          std::make_shared<ValueEnvNode>(ValueEnvNode{core_item.name, slot, state.values});
      *slot = eval(inner, core_item.expr);
      state.values = inner;
    } else {
      v = eval(state.values, core_item.expr);
      state.values = env_bind(state.values, core_item.name, v);
    }
  }
  for (const ProgramBinding& b : result.bindings)
    out += display_base(b.display_name) + " : " + normalize_print(b.scheme) + "\n";
  return out;
}

}  // namespace

std::string repl_eval_line(ReplState& state, const std::string& line) {
  std::string input = trim(line);
  if (input.empty()) return "";
  if (input == ":q") {
    state.done = true;
    return "";
  }
  try {
    bool type_only = input.rfind(":t ", 0) == 0;
    bool core_only = input.rfind(":core ", 0) == 0;
    if (type_only || core_only) {
      std::string src = input.substr(type_only ? 3 : 6);
      SurfaceExpr expr = parse_expr_source(src);
      InferResult r = infer(state.env, expr, state.session);
      Env env1 = r.subst(state.env);
      ResolveResult res = resolve_constraints(env1, r.cs, r.type, r.core, state.session);
      if (type_only) return describe_constrained(res.cs, res.subst(r.type)) + "\n";
      return print_core(res.core) + "\n";
    }
    ReplInput parsed = parse_repl_input(input);
    if (parsed.is_item) return handle_item(state, parsed.item);
    InferResult r = infer(state.env, parsed.expr, state.session);
    Env env1 = r.subst(state.env);
    ResolveResult res = resolve_constraints(env1, r.cs, r.type, r.core, state.session);
    Type t = res.subst(r.type);
    if (res.cs.empty()) {
      ValuePtr v = eval(state.values, res.core);
      if (value_printable(v)) return "- : " + normalize_print(t) + " = " + print_value(v) + "\n";
      return "- : " + normalize_print(t) + " = <fun>\n";
    }
    return "- : " + describe_constrained(res.cs, t) + "\n";
  } catch (const lw_error& ex) {
    return std::string("error: ") + ex.what() + "\n";
  }
}

int cmd_repl(std::istream& in, std::ostream& out) {
  ReplState state;
  out << "lw-lite repl, :q to quit\n";
  std::string line;
  while (!state.done) {
    out << "lw> " << std::flush;
    if (!std::getline(in, line)) break;
    out << repl_eval_line(state, line);
  }
  return 0;
}

}  // namespace lwlite
