#include <algorithm>
#include <set>

#include "lwlite/constraints.hpp"
#include "lwlite/unify.hpp"

namespace lwlite {

namespace {
template <class... Ts>
struct overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overload(Ts...) -> overload<Ts...>;
}  // namespace

long rank(const Type& t) {
  return std::visit(overload{
                        [](const TCon&) -> long { return 1; },
                        [](const TVar&) -> long { return 0; },
                        [](const TApp& a) -> long { return rank(a.fn) + rank(a.arg); },
                    },
                    t->v);
}

namespace {

// th(pattern) = subject, extending th with mappings for pattern variables
// only; subject variables are rigid.
bool one_way_match(const Type& pattern, const Type& subject, Subst& th) {
  if (const TVar* v = as_var(pattern)) {
    if (!(pattern->kind == subject->kind)) return false;
    if (const Type* bound = th.lookup(v->id)) return type_equal(*bound, subject);
    th.insert(v->id, subject);
    return true;
  }
  if (const TCon* c = as_con(pattern)) {
    const TCon* d = as_con(subject);
    return d && c->name == d->name;
  }
  const TApp* pa = as_app(pattern);
  const TApp* sa = as_app(subject);
  if (!pa || !sa) return false;
  return one_way_match(pa->fn, sa->fn, th) && one_way_match(pa->arg, sa->arg, th);
}

Type refresh_free_vars(const Type& t, Session& session) {
  Subst renaming;
  struct Walk {
    Session& session;
    Subst& renaming;
    void go(const Type& t) {
      if (const TVar* v = as_var(t)) {
        if (!renaming.lookup(v->id)) renaming.insert(v->id, session.fresh(t->kind));
        return;
      }
      if (const TApp* a = as_app(t)) {
        go(a->fn);
        go(a->arg);
      }
    }
  } walk{session, renaming};
  walk.go(t);
  return renaming(t);
}

}  // namespace

std::optional<Subst> instance_match(const Scheme& s1, const Type& t0, Session& session) {
  Type refreshed = refresh_free_vars(t0, session);
  Subst th;
  if (!one_way_match(refreshed, s1.body, th)) return std::nullopt;
  return th;
}

std::optional<Subst> instance_conforms(const Scheme& s1, const Type& principal_body,
                                       Session& session) {
  // skolemize the quantified variables, then unify with a fresh copy of the
  // principal type; the substitution may specialize the instance's free vars
  Subst skolemize;
  std::set<int> throwaway;
  for (const auto& [id, kind] : s1.quantified)
    skolemize.insert(id, t_con("$sk" + std::to_string(id), kind));
  Type body = skolemize(s1.body);
  Type pattern = refresh_free_vars(principal_body, session);
  for (int id : ftv(pattern)) throwaway.insert(id);
  Subst th;
  try {
    th = unify(pattern, body, session);
  } catch (const unify_error&) {
    return std::nullopt;
  }
  Subst refinement;
  for (const auto& [v, t] : th.mappings()) {
    if (throwaway.count(v)) continue;
    // a skolem escaping into a real variable means the quantified structure
    // does not fit the principal shape
    bool has_skolem = false;
    struct Scan {
      bool& flag;
      void go(const Type& t) {
        if (const TCon* c = as_con(t)) {
          if (c->name.rfind("$sk", 0) == 0) flag = true;
          return;
        }
        if (const TApp* a = as_app(t)) {
          go(a->fn);
          go(a->arg);
        }
      }
    } scan{has_skolem};
    scan.go(t);
    if (has_skolem) return std::nullopt;
    refinement.insert(v, t);
  }
  return refinement;
}

std::optional<long> distance(const Scheme& s1, const Type& t0, Session& session) {
  std::optional<Subst> th = instance_match(s1, t0, session);
  if (!th) return std::nullopt;
  long d = 0;
  for (const auto& [v, t] : th->mappings()) d += rank(t);
  return d;
}

std::uint32_t hash_scheme(const Scheme& s) {
  std::string canon = normalize_print(s);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return static_cast<std::uint32_t>(h % 4294967295ull) + 1;
}

bool is_unsolvable(const Type& body, const Type& constraint_type) {
  std::set<int> b = ftv(body);
  std::set<int> c = ftv(constraint_type);
  if (b.size() >= c.size()) return false;
  return std::includes(c.begin(), c.end(), b.begin(), b.end());
}

std::pair<ConstraintSet, CoreExpr> compact(const ConstraintSet& cs, const CoreExpr& e) {
  ConstraintSet out = cs;
  CoreExpr core = e;
  bool changed = true;
  while (changed) {
    changed = false;
    const auto& items = out.items();
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& [ki, ti] = items[i];
      if (ki.form != ConstraintKey::Form::Overloaded) continue;
      for (std::size_t j = i + 1; j < items.size(); ++j) {
        const auto& [kj, tj] = items[j];
        if (kj.form != ConstraintKey::Form::Overloaded || kj.base != ki.base) continue;
        if (!type_equal(ti, tj)) continue;
        core = clet(ki.text(), cvar(kj.text()), core);
        out.remove(ki);
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
  return {out, core};
}

namespace {

// Innermost-wins candidate enumeration: an instance hidden by a later
// binding with the identical env name is not a candidate.
SolveResult best_fitting_instance(const Env& env, const std::string& base, const Type& t,
                                  Session& session) {
  std::set<std::uint32_t> seen;
  std::vector<std::pair<EnvName, const Scheme*>> candidates;
  for (auto it = env.entries.rbegin(); it != env.entries.rend(); ++it) {
    const EnvName& n = it->first;
    if (n.form != EnvName::Form::Instance || n.base != base) continue;
    if (!seen.insert(n.k).second) continue;  // shadowed by an inner identical name
    candidates.emplace_back(n, &it->second);
  }
  std::optional<long> best;
  std::vector<std::pair<EnvName, const Scheme*>> winners;
  for (const auto& [name, scheme] : candidates) {
    std::optional<long> d = distance(*scheme, t, session);
    if (!d) continue;
    if (!best || *d < *best) {
      best = d;
      winners = {{name, scheme}};
    } else if (*d == *best) {
      winners.emplace_back(name, scheme);
    }
  }
  if (winners.size() != 1) return {};  // none, or an ambiguous tie
  return {true, winners[0].first, *winners[0].second};
}

// A plain binding fits an implicit "for any type distance": its instantiated
// body only needs to unify with the constraint type. One-way matching alone
// would reject bindings whose type is still an unrefined variable (a record
// field selected from a lambda parameter, say); the solve step's unification
// performs that refinement.
bool binding_fits(const Scheme& s, const Type& t, Session& session) {
  Type body = instantiate(s, session).second;
  try {
    unify(t, body, session);
    return true;
  } catch (const unify_error&) {
    return false;
  }
}

SolveResult innermost_fitting_binding(const Env& env, const std::string& base, const Type& t,
                                      Session& session) {
  for (auto it = env.entries.rbegin(); it != env.entries.rend(); ++it) {
    const EnvName& n = it->first;
    if (n.form != EnvName::Form::Plain || n.base != base) continue;
    if (binding_fits(it->second, t, session)) return {true, n, it->second};
  }
  return {};
}

}  // namespace

SolveResult solve_one(const Env& env, const ConstraintKey& key, const Type& t, const Type& body,
                      Session& session) {
  if (is_unsolvable(body, t)) return {};
  if (key.form == ConstraintKey::Form::Overloaded)
    return best_fitting_instance(env, key.base, t, session);
  if (env.has_principal(key.base)) return best_fitting_instance(env, key.base, t, session);
  return innermost_fitting_binding(env, key.base, t, session);
}

}  // namespace lwlite
