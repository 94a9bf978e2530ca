#ifndef LWLITE_CONSTRAINTS_HPP
#define LWLITE_CONSTRAINTS_HPP

#include <cstdint>
#include <optional>

#include "lwlite/core.hpp"
#include "lwlite/types.hpp"

namespace lwlite {

// R(var) = 0, R(con) = 1, R(app f a) = R(f) + R(a); kinds ignored.
long rank(const Type& t);

// One-way matching: a substitution th over (a refreshed copy of) t0 with
// th(t0') = body(s1). The instance's own constraint set is ignored and its
// quantified variables are treated as rigid.
std::optional<Subst> instance_match(const Scheme& s1, const Type& t0, Session& session);

// Sum of R over the matched substitution's range; nullopt when s1 is not an
// instance of t0.
std::optional<long> distance(const Scheme& s1, const Type& t0, Session& session);

// let-over validity: like instance_match, but the instance's *free* (not yet
// generalized) variables may be refined by the principal shape. Quantified
// variables stay rigid. Returns the refinement to fold into the context.
std::optional<Subst> instance_conforms(const Scheme& s1, const Type& principal_body,
                                       Session& session);

// Deterministic, alpha-invariant, always >= 1.
std::uint32_t hash_scheme(const Scheme& s);

// True iff ftv(body) is a strict subset of ftv(constraint_type).
bool is_unsolvable(const Type& body, const Type& constraint_type);

// Removes overloaded keys duplicated by an identical-typed key of the same
// base, aliasing them in the translation: let o%i = o%j in e.
std::pair<ConstraintSet, CoreExpr> compact(const ConstraintSet& cs, const CoreExpr& e);

struct SolveResult {
  bool found = false;
  EnvName binding;
  Scheme scheme;
};

// Finds the best-fitting instance (overloaded keys, or implicits whose base
// is overloaded at resolution time) or the innermost fitting plain binding
// (other implicits). Unsolvable constraints and distance ties yield not-found.
SolveResult solve_one(const Env& env, const ConstraintKey& key, const Type& t, const Type& body,
                      Session& session);

}  // namespace lwlite

#endif
