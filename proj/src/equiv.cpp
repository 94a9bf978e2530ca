#include <algorithm>
#include <map>

#include "lwlite/equiv.hpp"
#include "lwlite/parser.hpp"
#include "lwlite/token.hpp"

namespace lwlite {

namespace {

struct Bijection {
  std::map<int, int> fwd, bwd;

  bool relate(int a, int b) {
    auto f = fwd.find(a);
    auto g = bwd.find(b);
    if (f == fwd.end() && g == bwd.end()) {
      fwd[a] = b;
      bwd[b] = a;
      return true;
    }
    return f != fwd.end() && g != bwd.end() && f->second == b && g->second == a;
  }
};

bool equiv_rec(const Type& a, const Type& b, Bijection& bij);

bool row_equiv(const Type& a, const Type& b, Bijection& bij) {
  RowFields ra = row_fields(a);
  RowFields rb = row_fields(b);
  if (ra.fields.size() != rb.fields.size()) return false;
  if (ra.tail.has_value() != rb.tail.has_value()) return false;
  std::map<std::string, std::vector<Type>> ma, mb;
  std::vector<std::string> labels;
  for (auto& [l, t] : ra.fields) {
    if (!ma.count(l)) labels.push_back(l);
    ma[l].push_back(t);
  }
  for (auto& [l, t] : rb.fields) mb[l].push_back(t);
  if (ma.size() != mb.size()) return false;
  for (const std::string& l : labels) {
    auto it = mb.find(l);
    if (it == mb.end() || it->second.size() != ma[l].size()) return false;
    for (std::size_t i = 0; i < ma[l].size(); ++i)
      if (!equiv_rec(ma[l][i], it->second[i], bij)) return false;
  }
  if (ra.tail && !equiv_rec(*ra.tail, *rb.tail, bij)) return false;
  return true;
}

bool equiv_rec(const Type& a, const Type& b, Bijection& bij) {
  if (!(a->kind == b->kind)) return false;
  bool a_row = a->kind.tag() == Kind::Tag::Row && (is_row_ext(a) || is_row_empty(a));
  bool b_row = b->kind.tag() == Kind::Tag::Row && (is_row_ext(b) || is_row_empty(b));
  if (a_row && b_row) return row_equiv(a, b, bij);
  if (a->v.index() != b->v.index()) return false;
  if (const TCon* c = as_con(a)) return c->name == as_con(b)->name;
  if (const TVar* v = as_var(a)) return bij.relate(v->id, as_var(b)->id);
  const TApp* x = as_app(a);
  const TApp* y = as_app(b);
  return equiv_rec(x->fn, y->fn, bij) && equiv_rec(x->arg, y->arg, bij);
}

// Multiset matching of constraint entries under one shared bijection,
// with backtracking inside groups that share (base, form).
bool match_constraints(const std::vector<std::pair<ConstraintKey, Type>>& as,
                       const std::vector<std::pair<ConstraintKey, Type>>& bs,
                       std::vector<bool>& used, std::size_t i, Bijection& bij,
                       const Type& ta, const Type& tb) {
  if (i == as.size()) {
    Bijection copy = bij;
    return equiv_rec(ta, tb, copy);
  }
  const auto& [ka, tya] = as[i];
  for (std::size_t j = 0; j < bs.size(); ++j) {
    if (used[j]) continue;
    const auto& [kb, tyb] = bs[j];
    if (ka.form != kb.form || ka.base != kb.base) continue;
    Bijection saved = bij;
    if (equiv_rec(tya, tyb, bij)) {
      used[j] = true;
      if (match_constraints(as, bs, used, i + 1, bij, ta, tb)) return true;
      used[j] = false;
    }
    bij = saved;
  }
  return false;
}

}  // namespace

bool type_equiv(const Type& a, const Type& b) {
  Bijection bij;
  return equiv_rec(a, b, bij);
}

bool constrained_equiv(const ConstraintSet& ca, const Type& ta, const ConstraintSet& cb,
                       const Type& tb) {
  if (ca.size() != cb.size()) return false;
  Bijection bij;
  std::vector<bool> used(cb.items().size(), false);
  return match_constraints(ca.items(), cb.items(), used, 0, bij, ta, tb);
}

bool scheme_equiv(const Scheme& a, const Scheme& b) {
  return constrained_equiv(a.constraints, a.body, b.constraints, b.body);
}

// ---- printed-scheme parsing ----

namespace {

struct SchemeParser {
  std::vector<Token> toks;
  Session& session;
  std::size_t pos = 0;
  std::map<std::string, Type> vars;

  const Token& peek(std::size_t ahead = 0) const {
    return toks[std::min(pos + ahead, toks.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks[std::min(pos, toks.size() - 1)];
    if (pos < toks.size() - 1) ++pos;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool eat(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, peek().span); }

  Type tyvar(const std::string& name, Kind k) {
    auto it = vars.find(name);
    if (it != vars.end()) {
      if (!(it->second->kind == k)) fail("variable '" + name + " used at two kinds");
      return it->second;
    }
    Type t = session.fresh(k);
    vars.emplace(name, t);
    return t;
  }

  std::string name_token() {
    if (at(Tok::Ident)) return next().text;
    if (at(Tok::LParen) && peek(1).kind == Tok::Op && peek(2).kind == Tok::RParen) {
      next();
      std::string op = next().text;
      next();
      return op;
    }
    fail("expected a name");
  }

  Type atom() {
    if (at(Tok::TyVar)) return tyvar(next().text, Kind::star());
    if (at(Tok::Ident)) {
      std::string n = next().text;
      if (n == "int") return t_int();
      if (n == "string") return t_string();
      if (n == "bool") return t_bool();
      fail("unknown type constructor '" + n + "'");
    }
    if (eat(Tok::LParen)) {
      Type t = type_expr();
      if (!eat(Tok::RParen)) fail("expected ')'");
      return t;
    }
    if (at(Tok::LBrace)) return record_type();
    fail("expected a type");
  }

  Type record_type() {
    next();  // {
    std::vector<std::pair<std::string, Type>> fields;
    Type tail = row_empty();
    while (true) {
      std::string label = name_token();
      if (!eat(Tok::Colon)) fail("expected ':'");
      fields.emplace_back(label, type_expr());
      if (eat(Tok::Semi)) {
        if (at(Tok::RBrace)) break;
        continue;
      }
      break;
    }
    if (eat(Tok::Pipe)) {
      if (!at(Tok::TyVar)) fail("expected row variable");
      tail = tyvar(next().text, Kind::row());
    }
    if (!eat(Tok::RBrace)) fail("expected '}'");
    return t_record(row_build(fields, tail));
  }

  Type postfix() {
    Type t = atom();
    while (at(Tok::Ident) && peek().text == "list") {
      next();
      t = t_list(t);
    }
    return t;
  }

  Type type_expr() {
    Type t = postfix();
    if (eat(Tok::Arrow)) return t_arrow(t, type_expr());
    return t;
  }

  std::pair<ConstraintSet, Type> scheme() {
    ConstraintSet cs;
    // `{ ... } =>` prefix? scan for the brace's match followed by =>
    if (at(Tok::LBrace)) {
      int depth = 0;
      std::size_t i = pos;
      for (; i < toks.size(); ++i) {
        if (toks[i].kind == Tok::LBrace) ++depth;
        if (toks[i].kind == Tok::RBrace && --depth == 0) break;
      }
      bool is_constraints = i + 1 < toks.size() && toks[i + 1].kind == Tok::FatArrow;
      if (is_constraints) {
        next();  // {
        std::map<std::string, int> occ;
        while (true) {
          bool implicit = false;
          std::string base;
          if (at(Tok::Implicit)) {
            implicit = true;
            base = next().text;
          } else {
            base = name_token();
          }
          if (!eat(Tok::Colon)) fail("expected ':'");
          Type t = type_expr();
          if (implicit) cs.add(ConstraintKey::implicit(base), t);
          else cs.add(ConstraintKey::overloaded(base, ++occ[base]), t);
          if (eat(Tok::Semi)) {
            if (at(Tok::RBrace)) break;
            continue;
          }
          break;
        }
        if (!eat(Tok::RBrace)) fail("expected '}'");
        if (!eat(Tok::FatArrow)) fail("expected '=>'");
      }
    }
    Type body = type_expr();
    if (!at(Tok::Eof)) fail("trailing tokens after type");
    return {std::move(cs), std::move(body)};
  }
};

}  // namespace

std::pair<ConstraintSet, Type> parse_printed_scheme(const std::string& text, Session& session) {
  SchemeParser p{lex(text, false), session, 0, {}};
  return p.scheme();
}

}  // namespace lwlite
