#include <doctest.h>

#include "lwlite/driver.hpp"
#include "lwlite/equiv.hpp"
#include "lwlite/parser.hpp"
#include "support.hpp"

using namespace lwlite;

namespace {

// infer a bare expression in the builtin environment, with resolution
std::pair<ConstraintSet, Type> type_of(const std::string& src, const std::string& prelude = "") {
  Session session;
  Env env = builtin_env(session);
  if (!prelude.empty()) {
    ProgramResult pr = infer_program(env, parse_program(prelude), session);
    REQUIRE(pr.ok());
    env = pr.env;
  }
  InferResult r = infer(env, parse_expr_source(src), session);
  Env env1 = r.subst(env);
  ResolveResult res = resolve_constraints(env1, r.cs, r.type, r.core, session);
  return {res.cs, res.subst(r.type)};
}

void expect_type(const std::string& src, const std::string& expected,
                 const std::string& prelude = "") {
  auto [cs, t] = type_of(src, prelude);
  CAPTURE(src);
  CHECK(normalize_print(cs, t) == expected);
}

Scheme scheme_of(const std::string& program, const std::string& name) {
  CheckedSource checked = check_source(program);
  REQUIRE(checked.result.ok());
  const Scheme* found = nullptr;
  for (const ProgramBinding& b : checked.result.bindings)
    if (b.display_name == name) found = &b.scheme;
  REQUIRE(found != nullptr);
  return *found;
}

}  // namespace

TEST_CASE("lambda, application, literals") {
  expect_type("fun x -> x", "'a -> 'a");
  expect_type("1", "int");
  expect_type("\"s\"", "string");
  expect_type("true", "bool");
  expect_type("fun f x -> f (f x)", "('a -> 'a) -> 'a -> 'a");
  expect_type("[1; 2]", "int list");
  expect_type("1 :: [2]", "int list");
  expect_type("{ x = 1; y = \"a\" }", "{ x : int; y : string }");
  expect_type("fun r -> r.lbl", "{ lbl : 'a | 'b } -> 'a");
}

TEST_CASE("an overloaded name emits one fresh-suffixed constraint") {
  expect_type("add", "{ add : 'a -> 'a -> 'a } => 'a -> 'a -> 'a",
              "overload add : 'a -> 'a -> 'a");
  expect_type("fun x -> add x x", "{ add : 'a -> 'a -> 'a } => 'a -> 'a",
              "overload add : 'a -> 'a -> 'a");
}

TEST_CASE("implicit uses share one key, overloaded uses do not") {
  expect_type("fun x -> ?add x x", "{ ?add : 'a -> 'a -> 'b } => 'a -> 'b");
  // two uses of ?f are one constraint; its argument types unify
  expect_type("fun x y -> ?f x ^ ?f y", "{ ?f : 'a -> string } => 'a -> 'a -> string");
  // two uses of an overloaded f are two constraints
  expect_type("fun x y -> f x ^ f y",
              "{ f : 'a -> string; f : 'b -> string } => 'a -> 'b -> string",
              "overload f : 'a -> 'b");
}

TEST_CASE("let generalizes and abstracts the remaining constraints") {
  Scheme twice = scheme_of("overload add : 'a -> 'a -> 'a\nlet twice x = add x x", "twice");
  CHECK(normalize_print(twice) == "{ add : 'a -> 'a -> 'a } => 'a -> 'a");
  CHECK(twice.quantified.size() == 1);
  // the monomorphic constraint of twice_one stays in its scheme unquantified
  Scheme t1 = scheme_of(
      "overload add : 'a -> 'a -> 'a\nlet twice x = add x x\nlet twice_one = twice 1",
      "twice_one");
  CHECK(normalize_print(t1) == "{ add : int -> int -> int } => int");
  CHECK(t1.quantified.empty());
}

TEST_CASE("monomorphic recursion threads dictionaries through recursive calls") {
  const char* src =
      "overload zero : 'a\n"
      "overload add : 'a -> 'a -> 'a\n"
      "let rec sum l = match l with | [] -> zero | x :: xs -> add x (sum xs)\n";
  CheckedSource checked = check_source(src);
  REQUIRE(checked.result.ok());
  const CoreItem& sum = checked.result.core.items[0];
  CHECK(sum.dict_arity == 2);
  CHECK(sum.recursive);
  // the recursive call must apply both dictionary parameters
  std::string core = print_core(sum.expr);
  CHECK(core.find("sum add%1 zero%1 xs") != std::string::npos);
  CHECK(check_core_arity(checked.result.core).empty());
}

TEST_CASE("local overloading converts escaping constraints into one implicit") {
  expect_type("fun x -> overload id : 'a -> 'b in id (id x)",
              "{ ?id : 'a -> 'a } => 'a -> 'a");
  // an already-floating implicit with the same base merges with the escapees
  expect_type("fun x -> overload id : 'a -> 'b in ?id (id x)",
              "{ ?id : 'a -> 'a } => 'a -> 'a");
}

TEST_CASE("let over requires a declaration and a matching scheme") {
  CheckedSource no_decl = check_source("let over add = (+)");
  CHECK(!no_decl.result.ok());
  CheckedSource bad = check_source("overload add : 'a -> 'a -> 'a\nlet over add = string_of_int");
  CHECK(!bad.result.ok());
  CheckedSource good = check_source("overload add : 'a -> 'a -> 'a\nlet over add = (+)");
  CHECK(good.result.ok());
  CHECK(good.result.bindings[0].env_name.form == EnvName::Form::Instance);
  CHECK(good.result.bindings[0].env_name.k >= 1);
}

TEST_CASE("inject moves constraints into a fresh open record parameter") {
  const char* prelude = "overload zero : 'a\noverload add : 'a -> 'a -> 'a\n"
                        "let rec sum l = match l with | [] -> zero | x :: xs -> add x (sum xs)\n";
  expect_type("inject sum", "{ add : 'a -> 'a -> 'a; zero : 'a | 'b } -> 'a list -> 'a", prelude);
  expect_type("inject zero in sum", "{ add : 'a -> 'a -> 'a } => { zero : 'a | 'b } -> 'a list -> 'a",
              prelude);
  // errors
  Session s;
  Env env = builtin_env(s);
  CHECK_THROWS_AS(infer(env, parse_expr_source("inject (fun x -> x)"), s), type_error);
  CHECK_THROWS_AS(infer(env, parse_expr_source("inject nope in (fun x -> x)"), s), type_error);
}

TEST_CASE("eject needs a record-domained function with at least one field") {
  Session s;
  Env env = builtin_env(s);
  CHECK_THROWS_AS(infer(env, parse_expr_source("eject 1"), s), type_error);
  CHECK_THROWS_AS(infer(env, parse_expr_source("eject (fun x -> x)"), s), type_error);
  CHECK_THROWS_AS(infer(env, parse_expr_source("eject zz in (fun r -> r.a)"), s), type_error);
}

TEST_CASE("ejected overloaded fields take the principal shape") {
  const char* prelude =
      "let rec sum r l = match l with | [] -> r.zero | x :: xs -> r.add x (sum r xs)\n"
      "overload zero : 'a\noverload add : 'a -> 'a -> 'a\n";
  // without the principal, add's field type would be 'b -> 'a -> 'a
  expect_type("eject sum", "{ add : 'a -> 'a -> 'a; zero : 'a } => 'a list -> 'a", prelude);
}

TEST_CASE("injecting a base with several keys keeps duplicates in order") {
  const char* prelude = "overload pretty : 'a -> string\n";
  auto [cs, t] = type_of("inject pretty in (fun x y -> pretty x ^ pretty y)", prelude);
  CHECK(cs.empty());
  Type dom;
  REQUIRE(is_arrow(t, &dom));
  Type row;
  REQUIRE(is_record(dom, &row));
  RowFields rf = row_fields(row);
  REQUIRE(rf.fields.size() == 2);
  CHECK(rf.fields[0].first == "pretty");
  CHECK(rf.fields[1].first == "pretty");
  CHECK(rf.tail.has_value());
}

TEST_CASE("inject then eject restores the constraint set") {
  const char* prelude = "overload zero : 'a\noverload add : 'a -> 'a -> 'a\n"
                        "let rec sum l = match l with | [] -> zero | x :: xs -> add x (sum xs)\n";
  auto [cs_orig, t_orig] = type_of("sum", prelude);
  auto [cs_back, t_back] = type_of("eject (inject sum)", prelude);
  CHECK(constrained_equiv(cs_orig, t_orig, cs_back, t_back));
}

TEST_CASE("greedy resolution reaches a fixpoint") {
  Session s;
  Env env = builtin_env(s);
  ProgramResult pr = infer_program(
      env,
      parse_program("overload add : 'a -> 'a -> 'a\nlet twice x = add x x\nlet over add = (+)"),
      s);
  REQUIRE(pr.ok());
  InferResult r = infer(pr.env, parse_expr_source("twice 3"), s);
  Env env1 = r.subst(pr.env);
  ResolveResult once = resolve_constraints(env1, r.cs, r.type, r.core, s);
  CHECK(once.cs.empty());
  ResolveResult again =
      resolve_constraints(once.subst(env1), once.cs, once.subst(r.type), once.core, s);
  CHECK(again.cs.empty());
  CHECK(again.subst.empty());
  CHECK(print_core(again.core) == print_core(once.core));
}

TEST_CASE("re-applying an InferResult substitution is a no-op") {
  Session s;
  Env env = builtin_env(s);
  for (const char* src : {"fun x -> x + 1", "fun r -> r.f 1 :: [2]", "{ a = 1; b = \"x\" }"}) {
    InferResult r = infer(env, parse_expr_source(src), s);
    CHECK(type_equal(r.subst(r.type), r.type));
    for (const auto& [k, t] : r.cs.items()) CHECK(type_equal(r.subst(t), t));
  }
}

TEST_CASE("the dictionary arity invariant holds over the whole corpus") {
  for (const auto& [path, source] : lwlite::testing::corpus_files()) {
    CAPTURE(path);
    CheckedSource checked = check_source(source);
    REQUIRE(checked.result.ok());
    Diagnostics findings = check_core_arity(checked.result.core);
    for (const Diagnostic& d : findings) CAPTURE(d.message);
    CHECK(findings.empty());
  }
}

TEST_CASE("every inject/eject translation re-types cleanly over the corpus") {
  for (const auto& [path, source] : lwlite::testing::corpus_files()) {
    CAPTURE(path);
    CheckedSource checked = check_source(source);
    REQUIRE(checked.result.ok());
    JectCheck jc = check_ject_translations(checked.result, checked.session);
    for (const std::string& f : jc.failures) CAPTURE(f);
    CHECK(jc.passed == jc.total);
  }
}

TEST_CASE("annotation elaboration assigns row kinds to tail variables") {
  Session s;
  Type t = elaborate_annotation(parse_type("{ x : 'a | 'r } -> 'a list"), s);
  Type dom, row;
  REQUIRE(is_arrow(t, &dom));
  REQUIRE(is_record(dom, &row));
  RowFields rf = row_fields(row);
  REQUIRE(rf.tail.has_value());
  CHECK((*rf.tail)->kind == Kind::row());
  CHECK_THROWS_AS(elaborate_annotation(parse_type("{ x : 'r | 'r }"), s), type_error);
}
