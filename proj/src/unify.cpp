#include <algorithm>

#include "lwlite/unify.hpp"

namespace lwlite {

namespace {

[[noreturn]] void clash(const Type& a, const Type& b, const std::string& why) {
  VarNamer namer;
  throw unify_error("cannot unify " + print_type(a, namer) + " with " + print_type(b, namer) +
                    (why.empty() ? "" : " (" + why + ")"));
}

// the row tail after stripping every leading extension: a row variable,
// or nothing when the row ends in the empty row
const TVar* row_tail_var(const Type& row) {
  Type cur = row;
  Type tail;
  while (is_row_ext(cur, nullptr, nullptr, &tail)) cur = tail;
  return as_var(cur);
}

}  // namespace

RowRewrite rewrite_row(const Type& row, const std::string& label, Session& session) {
  std::string l;
  Type field, tail;
  if (is_row_ext(row, &l, &field, &tail)) {
    if (l == label) return {field, tail, Subst{}};  // Row-Head
    // Row-Swap: look for the label further down, keep this field on top
    RowRewrite inner = rewrite_row(tail, label, session);
    Type rest = row_ext(l, inner.subst(field), inner.rest);
    return {inner.field, rest, inner.subst};
  }
  if (const TVar* v = as_var(row)) {
    // Row-Var: instantiate the open tail with the wanted label
    Type gamma = session.fresh(Kind::star());
    Type beta = session.fresh(Kind::row());
    Subst s = Subst::single(v->id, row_ext(label, gamma, beta));
    return {gamma, beta, s};
  }
  VarNamer namer;
  throw unify_error("row " + print_type(row, namer) + " has no field '" + label + "'");
}

Subst unify(const Type& t1, const Type& t2, Session& session) {
  if (!(t1->kind == t2->kind)) clash(t1, t2, "kind mismatch: " + t1->kind.str() + " vs " + t2->kind.str());

  const TVar* v1 = as_var(t1);
  const TVar* v2 = as_var(t2);
  if (v1 && v2 && v1->id == v2->id) return Subst{};  // U-Var
  if (v1) {                                          // U-Var-L
    if (ftv(t2).count(v1->id)) clash(t1, t2, "occurs check");
    return Subst::single(v1->id, t2);
  }
  if (v2) {  // U-Var-R
    if (ftv(t1).count(v2->id)) clash(t1, t2, "occurs check");
    return Subst::single(v2->id, t1);
  }

  const TCon* c1 = as_con(t1);
  const TCon* c2 = as_con(t2);
  if (c1 && c2) {
    if (c1->name == c2->name) return Subst{};  // U-Const
    clash(t1, t2, "");
  }

  // U-Row: the left operand is literally a row extension
  std::string label;
  Type field1, rest1;
  if (is_row_ext(t1, &label, &field1, &rest1)) {
    RowRewrite rw = rewrite_row(t2, label, session);  // may fail: missing label
    const Subst& th1 = rw.subst;
    if (const TVar* tv = row_tail_var(rest1))
      if (th1.lookup(tv->id))
        clash(t1, t2, "recursive row: tail of the left row was rewritten");
    Subst th2 = unify(th1(field1), th1(rw.field), session);
    Subst th21 = Subst::compose(th2, th1);
    Subst th3 = unify(th21(rest1), th21(rw.rest), session);
    return Subst::compose(th3, th21);
  }

  const TApp* a1 = as_app(t1);
  const TApp* a2 = as_app(t2);
  if (a1 && a2) {  // U-App
    Subst th1 = unify(a1->fn, a2->fn, session);
    Subst th2 = unify(th1(a1->arg), th1(a2->arg), session);
    return Subst::compose(th2, th1);
  }

  clash(t1, t2, "");
}

bool row_normal_equal(const Type& a, const Type& b) {
  if (a->kind.tag() == Kind::Tag::Row && b->kind.tag() == Kind::Tag::Row &&
      (is_row_ext(a) || is_row_empty(a)) && (is_row_ext(b) || is_row_empty(b))) {
    RowFields ra = row_fields(a);
    RowFields rb = row_fields(b);
    if (ra.fields.size() != rb.fields.size()) return false;
    if (ra.tail.has_value() != rb.tail.has_value()) return false;
    if (ra.tail && !row_normal_equal(*ra.tail, *rb.tail)) return false;
    // match per-label sequences: duplicate labels stay ordered, distinct
    // labels may permute
    std::map<std::string, std::vector<Type>> ma, mb;
    std::vector<std::string> order_a;
    for (auto& [l, t] : ra.fields) {
      if (!ma.count(l)) order_a.push_back(l);
      ma[l].push_back(t);
    }
    for (auto& [l, t] : rb.fields) mb[l].push_back(t);
    if (ma.size() != mb.size()) return false;
    for (const auto& l : order_a) {
      auto it = mb.find(l);
      if (it == mb.end() || it->second.size() != ma[l].size()) return false;
      for (std::size_t i = 0; i < ma[l].size(); ++i)
        if (!row_normal_equal(ma[l][i], it->second[i])) return false;
    }
    return true;
  }
  if (a->v.index() != b->v.index()) return false;
  if (!(a->kind == b->kind)) return false;
  if (const TCon* c = as_con(a)) return c->name == as_con(b)->name;
  if (const TVar* v = as_var(a)) return v->id == as_var(b)->id;
  const TApp* x = as_app(a);
  const TApp* y = as_app(b);
  return row_normal_equal(x->fn, y->fn) && row_normal_equal(x->arg, y->arg);
}

}  // namespace lwlite
