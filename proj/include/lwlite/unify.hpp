#ifndef LWLITE_UNIFY_HPP
#define LWLITE_UNIFY_HPP

#include "lwlite/types.hpp"

namespace lwlite {

struct unify_error : type_error {
  using type_error::type_error;
};

// Most general kind-preserving unifier: result th satisfies th(t1) = th(t2)
// up to distinct-label row reordering. Throws unify_error on constructor
// clash, occurs-check failure, kind mismatch, missing row label or a
// recursive row tail.
Subst unify(const Type& t1, const Type& t2, Session& session);

// Rewrites a row so that `label` is at the head: s(r) ~ (| label : field | rest |).
// A variable tail is instantiated with fresh gamma/beta (Row-Var).
struct RowRewrite {
  Type field;
  Type rest;
  Subst subst;
};
RowRewrite rewrite_row(const Type& row, const std::string& label, Session& session);

// Structural equality modulo reordering of distinct labels inside rows
// (duplicate labels keep their relative order).
bool row_normal_equal(const Type& a, const Type& b);

}  // namespace lwlite

#endif
