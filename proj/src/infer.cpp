#include <algorithm>

#include "lwlite/infer.hpp"
#include "lwlite/unify.hpp"

namespace lwlite {

namespace {

template <class... Ts>
struct overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overload(Ts...) -> overload<Ts...>;

[[noreturn]] void err(const std::string& msg, Span span) { throw type_error(msg, span); }

// Union of constraint sets. Two entries under the same implicit key are one
// parameter: their types are unified and a single entry kept.
std::pair<ConstraintSet, Subst> merge_constraints(const ConstraintSet& a, const ConstraintSet& b,
                                                  Session& session) {
  ConstraintSet out = a;
  Subst th_total;
  for (const auto& [key, type] : b.items()) {
    Type t = th_total(type);
    const Type* existing = out.find(key);
    if (!existing) {
      out.add(key, t);
      continue;
    }
    if (key.form == ConstraintKey::Form::Overloaded)
      throw internal_error("overloaded occurrence key collision: " + key.text());
    Subst th = unify(*existing, t, session);
    out = th(out);
    th_total = Subst::compose(th, th_total);
  }
  return {out, th_total};
}

// Dictionary passing: every overloaded key gets a fresh occurrence number;
// implicit keys keep their identity. Returns the refreshed set plus the
// argument names in the canonical order of the original keys.
std::pair<ConstraintSet, std::vector<std::string>> refresh_keys(const ConstraintSet& cs,
                                                                Session& session) {
  ConstraintSet out;
  std::vector<std::string> args;
  for (const auto& [key, type] : cs.items()) {
    if (key.form == ConstraintKey::Form::Overloaded) {
      ConstraintKey fresh =
          ConstraintKey::overloaded(key.base, session.fresh_occurrence(key.base));
      out.add(fresh, type);
      args.push_back(fresh.text());
    } else {
      if (!out.contains(key)) out.add(key, type);
      args.push_back(key.text());
    }
  }
  return {out, args};
}

std::vector<std::string> dict_params(const ConstraintSet& cs) {
  std::vector<std::string> out;
  for (const auto& [key, type] : cs.items()) out.push_back(key.text());
  return out;
}

CoreExpr wrap_dict_lambdas(const std::vector<std::string>& params, CoreExpr core) {
  for (auto it = params.rbegin(); it != params.rend(); ++it) core = clam(*it, std::move(core));
  return core;
}

struct Inferencer {
  Session& session;
  InferTrace* trace;

  // ---- resolution ----

  ResolveResult resolve(Env env, ConstraintSet cs, Type body, CoreExpr core) {
    auto compacted = compact(cs, core);
    cs = std::move(compacted.first);
    core = std::move(compacted.second);
    Subst th_total;
    int steps = 0;
    bool progress = true;
    while (progress) {
      progress = false;
      for (const auto& [key, t] : cs.items()) {
        SolveResult found = solve_one(env, key, t, body, session);
        if (!found.found) continue;
        if (++steps > 10000) err("constraint resolution did not terminate", {});
        auto [inst_cs, inst_body] = instantiate(found.scheme, session);
        auto [fresh_cs, args] = refresh_keys(inst_cs, session);
        Subst th = unify(t, inst_body, session);
        CoreExpr rhs = cvar(found.binding.text());
        for (const std::string& arg : args) rhs = capp(rhs, cvar(arg));
        core = clet(key.text(), rhs, core);
        cs.remove(key);
        cs = th(cs);
        body = th(body);
        env = th(env);
        auto [merged, th_m] = merge_constraints(cs, th(fresh_cs), session);
        cs = std::move(merged);
        body = th_m(body);
        env = th_m(env);
        th_total = Subst::compose(Subst::compose(th_m, th), th_total);
        auto rec = compact(cs, core);
        cs = std::move(rec.first);
        core = std::move(rec.second);
        progress = true;
        break;  // the snapshot is stale now
      }
    }
    return {std::move(cs), std::move(core), std::move(th_total)};
  }

  // ---- bindings (shared by let, let-over and the top-level driver) ----

  struct BindingResult {
    Scheme scheme;
    CoreExpr bound;
    int dict_arity = 0;
    Subst subst;  // everything folded, including resolution
    Env env;      // input env with subst applied
  };

  BindingResult infer_binding(const Env& env, bool recursive, const std::string& name,
                              const SurfaceExpr& bound) {
    InferResult r1;
    if (recursive) {
      Type mono = session.fresh(Kind::star());
      Env env_rec = env;
      env_rec.bind(EnvName::plain(name), mono_scheme(mono));
      r1 = infer(env_rec, bound, session, trace);
      Subst th = unify(r1.type, r1.subst(mono), session);
      r1.cs = th(r1.cs);
      r1.type = th(r1.type);
      r1.subst = Subst::compose(th, r1.subst);
    } else {
      r1 = infer(env, bound, session, trace);
    }
    Env env1 = r1.subst(env);
    ResolveResult res = resolve(env1, r1.cs, r1.type, r1.core);
    env1 = res.subst(env1);
    Type t1 = res.subst(r1.type);
    Scheme scheme = generalize(env1, res.cs, t1);
    std::vector<std::string> params = dict_params(res.cs);
    CoreExpr core_bound = res.core;
    if (recursive && !params.empty()) {
      CoreExpr replacement = cvar(name);
      for (const std::string& p : params) replacement = capp(replacement, cvar(p));
      core_bound = substitute_var(core_bound, name, replacement);
    }
    core_bound = wrap_dict_lambdas(params, core_bound);
    return {std::move(scheme), std::move(core_bound), static_cast<int>(params.size()),
            Subst::compose(res.subst, r1.subst), std::move(env1)};
  }

  // let-over validity: the instance scheme must match the principal type.
  // The check may refine the instance's free monotype variables (e.g. an
  // instance bound to a record field selected from a lambda parameter).
  struct InstanceCheck {
    EnvName name;
    Scheme scheme;
    Subst refinement;
  };
  InstanceCheck check_instance(const Env& env, const std::string& name, const Scheme& scheme,
                               Span span) {
    const Scheme* principal = env.lookup(EnvName::principal(name));
    if (!principal)
      err("'let over " + display_base(name) + "' needs an overload declaration in scope", span);
    std::optional<Subst> refinement = instance_conforms(scheme, principal->body, session);
    if (!refinement)
      err("instance of '" + display_base(name) + "' has type " + normalize_print(scheme) +
              " which does not match its principal type " + normalize_print(*principal),
          span);
    Scheme refined = (*refinement)(scheme);
    return {EnvName::instance(name, hash_scheme(refined)), std::move(refined),
            std::move(*refinement)};
  }

  // ---- inject / eject ----

  // Moves every constraint whose base is in `bases` into a fresh open record
  // prepended as an arrow domain. `bases` must all be present.
  InferResult inject_keys(InferResult r, const std::vector<std::string>& bases, Span span) {
    std::vector<std::pair<std::string, Type>> fields;
    std::vector<std::pair<ConstraintKey, int>> binders;  // key + duplicate index
    for (const std::string& base : bases) {
      int index = 0;
      std::vector<ConstraintKey> matched;
      for (const auto& [key, type] : r.cs.items())
        if (key.base == base) matched.push_back(key);
      if (matched.empty())
        err("cannot inject '" + display_base(base) + "': no such constraint", span);
      for (const ConstraintKey& key : matched) {
        fields.emplace_back(base, *r.cs.find(key));
        binders.emplace_back(key, index++);
        r.cs.remove(key);
      }
    }
    Type tail = session.fresh(Kind::row());
    Type record = t_record(row_build(fields, tail));
    std::string param = "r%" + std::to_string(session.fresh_occurrence("r"));
    CoreExpr body = r.core;
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      body = clet(it->first.text(), mk_core(CSel{cvar(param), it->first.base, it->second}), body);
    r.core = clam(param, body);
    r.type = t_arrow(record, r.type);
    return r;
  }

  InferResult infer_inject(const Env& env, const EInject& node, Span span) {
    InferResult r = infer(env, node.subject, session, trace);
    Env env1 = r.subst(env);
    // greedy resolution before constraints leave the floating set
    ResolveResult res = resolve(env1, r.cs, r.type, r.core);
    env1 = res.subst(env1);
    r.cs = res.cs;
    r.type = res.subst(r.type);
    r.core = res.core;
    r.subst = Subst::compose(res.subst, r.subst);
    std::vector<std::string> bases = node.restriction;
    if (bases.empty()) {
      for (const auto& [key, type] : r.cs.items())
        if (std::find(bases.begin(), bases.end(), key.base) == bases.end())
          bases.push_back(key.base);
      if (bases.empty()) err("nothing to inject: the constraint set is empty", span);
    }
    r = inject_keys(std::move(r), bases, span);
    if (trace) trace->jects.push_back({true, span, env1, r.cs, r.type, r.core});
    return r;
  }

  struct Ejection {
    InferResult r;
    std::vector<std::string> field_labels;  // row order, duplicates kept
    Env env;
  };

  // Full ejection; resolution is left to the caller.
  Ejection eject_all(const Env& env, const SurfaceExpr& subject, Span span) {
    InferResult r = infer(env, subject, session, trace);
    Env env1 = r.subst(env);
    Type alpha = session.fresh(Kind::star());
    Type beta = session.fresh(Kind::row());
    Subst th2;
    try {
      th2 = unify(r.type, t_arrow(t_record(beta), alpha), session);
    } catch (const unify_error&) {
      err("eject needs a function whose argument is a record, not " + normalize_print(r.type),
          span);
    }
    env1 = th2(env1);
    ConstraintSet cs = th2(r.cs);
    Type result = th2(alpha);
    RowFields rf = row_fields(th2(beta));
    if (rf.fields.empty())
      err("records cannot be empty after ejection: no field to convert", span);
    Subst th_total = Subst::compose(th2, r.subst);

    ConstraintSet ejected;
    std::vector<std::pair<std::string, std::string>> literal;  // label -> bound name
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < rf.fields.size(); ++i) {
      std::string label = rf.fields[i].first;
      Type ftype = rf.fields[i].second;
      labels.push_back(label);
      if (env1.has_principal(label)) {
        const Scheme* principal = env1.lookup(EnvName::principal(label));
        auto [none, tau0] = instantiate(*principal, session);
        Subst th = unify(ftype, tau0, session);
        env1 = th(env1);
        cs = th(cs);
        result = th(result);
        ejected = th(ejected);
        for (std::size_t j = i; j < rf.fields.size(); ++j)
          rf.fields[j].second = th(rf.fields[j].second);
        ftype = rf.fields[i].second;
        th_total = Subst::compose(th, th_total);
        ConstraintKey key = ConstraintKey::overloaded(label, session.fresh_occurrence(label));
        ejected.add(key, ftype);
        literal.emplace_back(label, key.text());
      } else {
        ConstraintKey key = ConstraintKey::implicit(label);
        if (const Type* existing = ejected.find(key)) {
          Subst th = unify(*existing, ftype, session);
          env1 = th(env1);
          cs = th(cs);
          result = th(result);
          ejected = th(ejected);
          for (std::size_t j = i; j < rf.fields.size(); ++j)
            rf.fields[j].second = th(rf.fields[j].second);
          th_total = Subst::compose(th, th_total);
        } else {
          ejected.add(key, ftype);
        }
        literal.emplace_back(label, key.text());
      }
    }
    auto [merged, th_m] = merge_constraints(cs, ejected, session);
    env1 = th_m(env1);
    result = th_m(result);
    th_total = Subst::compose(th_m, th_total);

    CRecord record;
    for (const auto& [label, bound] : literal) record.fields.emplace_back(label, cvar(bound));
    CoreExpr core = capp(r.core, mk_core(std::move(record)));
    return {{std::move(merged), std::move(result), std::move(core), std::move(th_total)},
            std::move(labels),
            std::move(env1)};
  }

  InferResult infer_eject(const Env& env, const EEject& node, Span span) {
    Ejection ej = eject_all(env, node.subject, span);
    InferResult r = std::move(ej.r);
    Env env1 = std::move(ej.env);
    if (!node.restriction.empty()) {
      for (const std::string& name : node.restriction)
        if (std::find(ej.field_labels.begin(), ej.field_labels.end(), name) ==
            ej.field_labels.end())
          err("cannot eject '" + display_base(name) + "': the record has no such field", span);
      // eject all, then inject the remaining fields
      std::vector<std::string> complement;
      for (const std::string& label : ej.field_labels) {
        bool restricted = std::find(node.restriction.begin(), node.restriction.end(), label) !=
                          node.restriction.end();
        bool seen = std::find(complement.begin(), complement.end(), label) != complement.end();
        if (!restricted && !seen) complement.push_back(label);
      }
      if (!complement.empty()) r = inject_keys(std::move(r), complement, span);
    }
    ResolveResult res = resolve(env1, r.cs, r.type, r.core);
    env1 = res.subst(env1);
    r.cs = res.cs;
    r.type = res.subst(r.type);
    r.core = res.core;
    r.subst = Subst::compose(res.subst, r.subst);
    if (trace) trace->jects.push_back({false, span, env1, r.cs, r.type, r.core});
    return r;
  }

  // ---- the syntax-directed rules ----

  InferResult infer_expr(const Env& env, const SurfaceExpr& e) {
    Span span = e->span;
    return std::visit(
        overload{
            [&](const EVar& v) -> InferResult {
              const auto* entry = env.lookup_value_name(v.name);
              if (!entry) err("unbound variable '" + display_base(v.name) + "'", span);
              if (entry->first.form == EnvName::Form::Principal) {
                // overloaded name: one fresh-suffixed constraint
                const Scheme& principal = entry->second;
                if (!principal.constraints.empty())
                  throw internal_error("principal type with constraints");
                auto [none, tau0] = instantiate(principal, session);
                ConstraintKey key =
                    ConstraintKey::overloaded(v.name, session.fresh_occurrence(v.name));
                ConstraintSet cs;
                cs.add(key, tau0);
                return {std::move(cs), tau0, cvar(key.text()), Subst{}};
              }
              auto [cs0, tau0] = instantiate(entry->second, session);
              auto [cs, args] = refresh_keys(cs0, session);
              CoreExpr core = cvar(v.name);
              for (const std::string& arg : args) core = capp(core, cvar(arg));
              return {std::move(cs), std::move(tau0), std::move(core), Subst{}};
            },
            [&](const EImplicit& v) -> InferResult {
              Type alpha = session.fresh(Kind::star());
              ConstraintKey key = ConstraintKey::implicit(v.base);
              ConstraintSet cs;
              cs.add(key, alpha);
              return {std::move(cs), alpha, cvar(key.text()), Subst{}};
            },
            [&](const EInt& v) -> InferResult {
              return {{}, t_int(), mk_core(CInt{v.value}), Subst{}};
            },
            [&](const EStr& v) -> InferResult {
              return {{}, t_string(), mk_core(CStr{v.value}), Subst{}};
            },
            [&](const EBool& v) -> InferResult {
              return {{}, t_bool(), mk_core(CBool{v.value}), Subst{}};
            },
            [&](const ELam& lam) -> InferResult {
              Type alpha = session.fresh(Kind::star());
              Env inner = env;
              inner.bind(EnvName::plain(lam.param), mono_scheme(alpha));
              InferResult r = infer(inner, lam.body, session, trace);
              Type dom = r.subst(alpha);
              return {r.cs, t_arrow(dom, r.type), clam(lam.param, r.core), r.subst};
            },
            [&](const EApp& app) -> InferResult {
              InferResult r1 = infer(env, app.fn, session, trace);
              Env env1 = r1.subst(env);
              InferResult r2 = infer(env1, app.arg, session, trace);
              Type t1 = r2.subst(r1.type);
              Type alpha = session.fresh(Kind::star());
              Subst th3 = unify(t1, t_arrow(r2.type, alpha), session);
              Subst th = Subst::compose(th3, Subst::compose(r2.subst, r1.subst));
              auto [cs, th_m] = merge_constraints(th(r1.cs), th(r2.cs), session);
              th = Subst::compose(th_m, th);
              return {std::move(cs), th(alpha), capp(r1.core, r2.core), std::move(th)};
            },
            [&](const ESel& sel) -> InferResult {
              InferResult r = infer(env, sel.subject, session, trace);
              // expose index+1 occurrences of the label, result is the last
              Type beta = session.fresh(Kind::row());
              std::vector<Type> gammas;
              std::vector<std::pair<std::string, Type>> fields;
              for (int i = 0; i <= sel.index; ++i) {
                gammas.push_back(session.fresh(Kind::star()));
                fields.emplace_back(sel.label, gammas.back());
              }
              Type pattern = t_record(row_build(fields, beta));
              Subst th;
              try {
                th = unify(r.type, pattern, session);
              } catch (const unify_error& ex) {
                err(std::string(ex.what()) + " while selecting field '" + sel.label + "'", span);
              }
              Subst total = Subst::compose(th, r.subst);
              return {th(r.cs), th(gammas.back()),
                      mk_core(CSel{r.core, sel.label, sel.index}), std::move(total)};
            },
            [&](const ERecord& rec) -> InferResult {
              Env env_cur = env;
              Subst th_total;
              ConstraintSet cs;
              std::vector<std::pair<std::string, Type>> fields;
              CRecord core;
              for (const auto& [label, fe] : rec.fields) {
                InferResult r = infer(env_cur, fe, session, trace);
                env_cur = r.subst(env_cur);
                for (auto& [l, t] : fields) t = r.subst(t);
                cs = r.subst(cs);
                auto [merged, th_m] = merge_constraints(cs, r.cs, session);
                cs = std::move(merged);
                env_cur = th_m(env_cur);
                for (auto& [l, t] : fields) t = th_m(t);
                fields.emplace_back(label, th_m(r.type));
                core.fields.emplace_back(label, r.core);
                th_total = Subst::compose(Subst::compose(th_m, r.subst), th_total);
              }
              Type type = t_record(row_build(fields, row_empty()));
              return {std::move(cs), std::move(type), mk_core(std::move(core)),
                      std::move(th_total)};
            },
            [&](const EList& list) -> InferResult {
              Type elem = session.fresh(Kind::star());
              Env env_cur = env;
              Subst th_total;
              ConstraintSet cs;
              CList core;
              for (const auto& xe : list.elems) {
                InferResult r = infer(env_cur, xe, session, trace);
                env_cur = r.subst(env_cur);
                elem = r.subst(elem);
                cs = r.subst(cs);
                Subst th = unify(elem, r.type, session);
                env_cur = th(env_cur);
                elem = th(elem);
                cs = th(cs);
                auto [merged, th_m] = merge_constraints(cs, th(r.cs), session);
                cs = std::move(merged);
                env_cur = th_m(env_cur);
                elem = th_m(elem);
                core.elems.push_back(r.core);
                th_total = Subst::compose(
                    Subst::compose(th_m, Subst::compose(th, r.subst)), th_total);
              }
              return {std::move(cs), t_list(elem), mk_core(std::move(core)), std::move(th_total)};
            },
            [&](const ECons& cons) -> InferResult {
              InferResult r1 = infer(env, cons.head, session, trace);
              Env env1 = r1.subst(env);
              InferResult r2 = infer(env1, cons.tail, session, trace);
              Type head_t = r2.subst(r1.type);
              Subst th = unify(t_list(head_t), r2.type, session);
              Subst total = Subst::compose(th, Subst::compose(r2.subst, r1.subst));
              auto [cs, th_m] = merge_constraints(total(r1.cs), total(r2.cs), session);
              total = Subst::compose(th_m, total);
              return {std::move(cs), total(r2.type), mk_core(CCons{r1.core, r2.core}),
                      std::move(total)};
            },
            [&](const EMatch& m) -> InferResult {
              InferResult rs = infer(env, m.subject, session, trace);
              Type elem = session.fresh(Kind::star());
              Subst th0 = unify(rs.type, t_list(elem), session);
              Subst total = Subst::compose(th0, rs.subst);
              Env env_cur = total(env);
              ConstraintSet cs = th0(rs.cs);
              elem = th0(elem);
              Type result = session.fresh(Kind::star());

              auto run_arm = [&](const SurfaceExpr& arm, const std::vector<std::pair<std::string, Type>>& binds) {
                Env arm_env = env_cur;
                for (const auto& [n, t] : binds) arm_env.bind(EnvName::plain(n), mono_scheme(t));
                InferResult r = infer(arm_env, arm, session, trace);
                env_cur = r.subst(env_cur);
                cs = r.subst(cs);
                elem = r.subst(elem);
                result = r.subst(result);
                Subst th = unify(result, r.type, session);
                env_cur = th(env_cur);
                cs = th(cs);
                elem = th(elem);
                result = th(result);
                auto [merged, th_m] = merge_constraints(cs, th(r.cs), session);
                cs = std::move(merged);
                env_cur = th_m(env_cur);
                elem = th_m(elem);
                result = th_m(result);
                total = Subst::compose(th_m, Subst::compose(th, Subst::compose(r.subst, total)));
                return r.core;
              };

              CoreExpr nil_core = run_arm(m.nil_arm, {});
              std::optional<std::pair<std::string, CoreExpr>> singleton;
              if (m.singleton_arm) {
                CoreExpr c = run_arm(m.singleton_arm->second, {{m.singleton_arm->first, elem}});
                singleton = {m.singleton_arm->first, c};
              }
              CoreExpr cons_core =
                  run_arm(m.cons_arm, {{m.cons_head, elem}, {m.cons_tail, t_list(elem)}});
              CMatch core{rs.core, nil_core, std::move(singleton), m.cons_head, m.cons_tail,
                          cons_core};
              return {std::move(cs), result, mk_core(std::move(core)), std::move(total)};
            },
            [&](const ELet& let) -> InferResult {
              BindingResult b = infer_binding(env, let.recursive, let.name, let.bound);
              Env env2 = b.env;
              env2.bind(EnvName::plain(let.name), b.scheme);
              InferResult r2 = infer(env2, let.body, session, trace);
              Env env2s = r2.subst(env2);
              ResolveResult res = resolve(env2s, r2.cs, r2.type, r2.core);
              Subst total =
                  Subst::compose(res.subst, Subst::compose(r2.subst, b.subst));
              CoreExpr core =
                  clet(let.name, b.bound, res.core, let.recursive, b.dict_arity);
              return {res.cs, res.subst(r2.type), std::move(core), std::move(total)};
            },
            [&](const ELetOver& let) -> InferResult {
              BindingResult b = infer_binding(env, false, let.name, let.bound);
              InstanceCheck inst = check_instance(b.env, let.name, b.scheme, span);
              b.env = inst.refinement(b.env);
              b.subst = Subst::compose(inst.refinement, b.subst);
              Env env2 = b.env;
              env2.bind(inst.name, inst.scheme);
              InferResult r2 = infer(env2, let.body, session, trace);
              Env env2s = r2.subst(env2);
              ResolveResult res = resolve(env2s, r2.cs, r2.type, r2.core);
              Subst total =
                  Subst::compose(res.subst, Subst::compose(r2.subst, b.subst));
              CoreExpr core = clet(inst.name.text(), b.bound, res.core, false, b.dict_arity);
              return {res.cs, res.subst(r2.type), std::move(core), std::move(total)};
            },
            [&](const EOverload& over) -> InferResult {
              Type tau0 = elaborate_annotation(over.annotation, session);
              Scheme principal = generalize(Env{}, ConstraintSet{}, tau0);
              Env inner = env;
              inner.bind(EnvName::principal(over.name), principal);
              InferResult r = infer(inner, over.body, session, trace);
              return escape_overloadable(over.name, std::move(r));
            },
            [&](const EEject& ej) -> InferResult { return infer_eject(env, ej, span); },
            [&](const EInject& in) -> InferResult { return infer_inject(env, in, span); },
        },
        e->v);
  }

  // Overload-Esc: surviving o%i constraints become the single implicit ?o.
  InferResult escape_overloadable(const std::string& name, InferResult r) {
    std::vector<ConstraintKey> escaped;
    for (const auto& [key, type] : r.cs.items())
      if (key.form == ConstraintKey::Form::Overloaded && key.base == name)
        escaped.push_back(key);
    if (escaped.empty()) return r;
    ConstraintKey ikey = ConstraintKey::implicit(name);
    Subst th_total;
    std::optional<Type> unified;
    if (const Type* existing = r.cs.find(ikey)) unified = *existing;
    for (const ConstraintKey& key : escaped) {
      Type t = th_total(*r.cs.find(key));
      if (unified) {
        Subst th = unify(*unified, t, session);
        unified = th(*unified);
        th_total = Subst::compose(th, th_total);
      } else {
        unified = t;
      }
      r.core = clet(key.text(), cvar(ikey.text()), r.core);
    }
    for (const ConstraintKey& key : escaped) r.cs.remove(key);
    r.cs = th_total(r.cs);
    if (r.cs.contains(ikey)) r.cs.set_type(ikey, *unified);
    else r.cs.add(ikey, *unified);
    r.type = th_total(r.type);
    r.subst = Subst::compose(th_total, r.subst);
    return r;
  }
};

}  // namespace

InferResult infer(const Env& env, const SurfaceExpr& e, Session& session, InferTrace* trace) {
  Inferencer inf{session, trace};
  return inf.infer_expr(env, e);
}

ResolveResult resolve_constraints(const Env& env, const ConstraintSet& cs, const Type& body,
                                  const CoreExpr& core, Session& session) {
  Inferencer inf{session, nullptr};
  return inf.resolve(env, cs, body, core);
}

Type elaborate_annotation(const SurfaceType& ann, Session& session) {
  // row-position variables get kind row, everything else kind star
  std::map<std::string, Type> vars;
  struct Build {
    Session& session;
    std::map<std::string, Type>& vars;
    Type var(const std::string& name, Kind k, Span span) {
      auto it = vars.find(name);
      if (it != vars.end()) {
        if (!(it->second->kind == k))
          throw type_error("type variable '" + name + " is used both as a row and as a type",
                           span);
        return it->second;
      }
      Type t = session.fresh(k);
      vars.emplace(name, t);
      return t;
    }
    Type go(const SurfaceType& t) {
      return std::visit(
          overload{
              [&](const STVar& v) { return var(v.name, Kind::star(), t->span); },
              [&](const STCon& c) {
                if (c.name == "int") return t_int();
                if (c.name == "string") return t_string();
                return t_bool();
              },
              [&](const STPostfix& p) { return t_list(go(p.arg)); },
              [&](const STArrow& a) { return t_arrow(go(a.dom), go(a.cod)); },
              [&](const STRecord& r) {
                Type tail = r.tail ? var(*r.tail, Kind::row(), t->span) : row_empty();
                std::vector<std::pair<std::string, Type>> fields;
                for (const auto& [label, ft] : r.fields) fields.emplace_back(label, go(ft));
                return t_record(row_build(fields, tail));
              },
          },
          t->v);
    }
  } build{session, vars};
  return build.go(ann);
}

ProgramResult infer_program(const Env& builtins, const SurfaceProgram& program,
                            Session& session) {
  ProgramResult out;
  out.env = builtins;
  Inferencer inf{session, &out.trace};
  for (const TopItem& item : program.items) {
    try {
      if (item.kind == TopItem::Kind::Overload) {
        Type tau0 = elaborate_annotation(item.annotation, session);
        Scheme principal = generalize(Env{}, ConstraintSet{}, tau0);
        out.env.bind(EnvName::principal(item.name), principal);
        continue;
      }
      Inferencer::BindingResult b =
          inf.infer_binding(out.env, item.recursive, item.name, item.expr);
      EnvName name = EnvName::plain(item.name);
      if (item.kind == TopItem::Kind::LetOver) {
        Inferencer::InstanceCheck inst =
            inf.check_instance(b.env, item.name, b.scheme, item.span);
        name = inst.name;
        b.env = inst.refinement(b.env);
        b.scheme = inst.scheme;
        b.subst = Subst::compose(inst.refinement, b.subst);
      }
      for (ProgramBinding& prior : out.bindings) prior.scheme = b.subst(prior.scheme);
      out.env = b.env;
      out.env.bind(name, b.scheme);
      out.bindings.push_back({item.name, name, b.scheme});
      out.core.items.push_back(
          {name.form == EnvName::Form::Plain ? item.name : name.text(), item.name,
           item.recursive, b.dict_arity, b.bound});
    } catch (const lw_error& ex) {
      Span span = ex.span.end > ex.span.begin ? ex.span : item.span;
      out.diagnostics.push_back({Severity::Error, span, ex.what()});
    }
  }
  return out;
}

Env builtin_env(Session& session) {
  Env env;
  auto plain = [&](const std::string& name, Type t) {
    env.bind(EnvName::plain(name), mono_scheme(std::move(t)));
  };
  Type i = t_int(), s = t_string(), b = t_bool();
  plain("+", t_arrow(i, t_arrow(i, i)));
  plain("-", t_arrow(i, t_arrow(i, i)));
  plain("*", t_arrow(i, t_arrow(i, i)));
  plain("^", t_arrow(s, t_arrow(s, s)));
  plain("||", t_arrow(b, t_arrow(b, b)));
  plain("&&", t_arrow(b, t_arrow(b, b)));
  plain("=", t_arrow(i, t_arrow(i, b)));
  plain("<", t_arrow(i, t_arrow(i, b)));
  plain("string_of_int", t_arrow(i, s));
  plain("int_of_string", t_arrow(s, i));
  {
    Type a = session.fresh(Kind::star());
    Type c = session.fresh(Kind::star());
    Scheme map_scheme{{{as_var(a)->id, Kind::star()}, {as_var(c)->id, Kind::star()}},
                      {},
                      t_arrow(t_arrow(a, c), t_arrow(t_list(a), t_list(c)))};
    env.bind(EnvName::plain("map"), map_scheme);
  }
  {
    Type a = session.fresh(Kind::star());
    Type c = session.fresh(Kind::star());
    Scheme foldl_scheme{
        {{as_var(a)->id, Kind::star()}, {as_var(c)->id, Kind::star()}},
        {},
        t_arrow(t_arrow(a, t_arrow(c, c)), t_arrow(c, t_arrow(t_list(a), c)))};
    env.bind(EnvName::plain("foldl"), foldl_scheme);
  }
  return env;
}

}  // namespace lwlite
