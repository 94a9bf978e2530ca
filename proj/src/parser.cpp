#include <algorithm>
#include <set>

#include "lwlite/parser.hpp"
#include "lwlite/token.hpp"

namespace lwlite {

SurfaceType st_make(std::variant<STVar, STCon, STPostfix, STArrow, STRecord> v, Span s) {
  return std::make_shared<SurfaceTypeNode>(SurfaceTypeNode{std::move(v), s});
}

SurfaceExpr mk_expr(SurfaceExprVariant v, Span s) {
  return std::make_shared<SurfaceExprNode>(SurfaceExprNode{std::move(v), s});
}

namespace {

struct Parser {
  std::vector<Token> toks;
  bool mangled;
  std::size_t pos = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos + ahead, toks.size() - 1);
    return toks[i];
  }
  const Token& next() {
    const Token& t = toks[std::min(pos, toks.size() - 1)];
    if (pos < toks.size() - 1) ++pos;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool eat(Tok k) {
    if (at(k)) {
      next();
      return true;
    }
    return false;
  }
  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) fail("expected " + what);
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, peek().span); }

  Span span_from(std::size_t begin) const {
    std::size_t end = pos > 0 ? toks[pos - 1].span.end : begin;
    return {begin, std::max(begin, end)};
  }

  // ---- names ----

  // IDENT or a parenthesized operator like (+), ( * ), (<=).
  bool at_name() const {
    if (at(Tok::Ident)) return true;
    return at(Tok::LParen) && peek(1).kind == Tok::Op && peek(2).kind == Tok::RParen;
  }

  std::string parse_name() {
    if (at(Tok::Ident)) return next().text;
    if (at(Tok::LParen) && peek(1).kind == Tok::Op && peek(2).kind == Tok::RParen) {
      next();
      std::string op = next().text;
      next();
      return op;
    }
    fail("expected identifier");
  }

  // In mangled mode a name may carry a %n or $n suffix glued to it, and
  // solved implicits appear as ?name binders.
  std::string parse_mangled_name() {
    if (mangled && at(Tok::Implicit)) return "?" + next().text;
    std::string base = parse_name();
    if (mangled && (at(Tok::PercentSuffix) || at(Tok::DollarSuffix))) {
      const Token& suf = next();
      base += (suf.kind == Tok::PercentSuffix ? "%" : "$") + suf.text;
    }
    return base;
  }

  // ---- types ----

  SurfaceType parse_type_atom() {
    std::size_t b = peek().span.begin;
    if (at(Tok::TyVar)) {
      std::string n = next().text;
      return st_make(STVar{n}, span_from(b));
    }
    if (at(Tok::Ident)) {
      std::string n = next().text;
      if (n != "int" && n != "string" && n != "bool")
        throw parse_error("unknown type constructor '" + n + "'", span_from(b));
      return st_make(STCon{n}, span_from(b));
    }
    if (eat(Tok::LParen)) {
      SurfaceType t = parse_type_expr();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (at(Tok::LBrace)) return parse_record_type();
    fail("expected a type");
  }

  SurfaceType parse_record_type() {
    std::size_t b = peek().span.begin;
    expect(Tok::LBrace, "'{'");
    std::vector<std::pair<std::string, SurfaceType>> fields;
    std::optional<std::string> tail;
    while (true) {
      std::string label = parse_name();
      expect(Tok::Colon, "':'");
      fields.emplace_back(label, parse_type_expr());
      if (eat(Tok::Semi)) {
        if (at(Tok::RBrace)) break;  // trailing semicolon
        continue;
      }
      break;
    }
    if (eat(Tok::Pipe)) tail = expect(Tok::TyVar, "row variable").text;
    expect(Tok::RBrace, "'}'");
    return st_make(STRecord{std::move(fields), std::move(tail)}, span_from(b));
  }

  SurfaceType parse_type_postfix() {
    std::size_t b = peek().span.begin;
    SurfaceType t = parse_type_atom();
    while (at(Tok::Ident) && peek().text == "list") {
      next();
      t = st_make(STPostfix{t, "list"}, span_from(b));
    }
    return t;
  }

  SurfaceType parse_type_expr() {
    std::size_t b = peek().span.begin;
    SurfaceType t = parse_type_postfix();
    if (eat(Tok::Arrow)) {
      SurfaceType cod = parse_type_expr();
      return st_make(STArrow{t, cod}, span_from(b));
    }
    return t;
  }

  // ---- expressions ----

  bool at_atom_start() const {
    switch (peek().kind) {
      case Tok::Int:
      case Tok::String:
      case Tok::KwTrue:
      case Tok::KwFalse:
      case Tok::Ident:
      case Tok::Implicit:
      case Tok::LParen:
      case Tok::LBrace:
      case Tok::LBracket:
        return true;
      default:
        return false;
    }
  }

  SurfaceExpr parse_atom() {
    std::size_t b = peek().span.begin;
    switch (peek().kind) {
      case Tok::Int: {
        long long v = next().int_value;
        return mk_expr(EInt{v}, span_from(b));
      }
      case Tok::String: {
        std::string s = next().text;
        return mk_expr(EStr{s}, span_from(b));
      }
      case Tok::KwTrue:
        next();
        return mk_expr(EBool{true}, span_from(b));
      case Tok::KwFalse:
        next();
        return mk_expr(EBool{false}, span_from(b));
      case Tok::Implicit: {
        std::string base = next().text;
        if (mangled) return mk_expr(EVar{"?" + base}, span_from(b));
        return mk_expr(EImplicit{base}, span_from(b));
      }
      case Tok::Ident: {
        std::string n = parse_mangled_name();
        return mk_expr(EVar{n}, span_from(b));
      }
      case Tok::LParen: {
        if (peek(1).kind == Tok::Op && peek(2).kind == Tok::RParen) {
          std::string n = parse_mangled_name();
          return mk_expr(EVar{n}, span_from(b));
        }
        next();
        SurfaceExpr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::LBrace:
        return parse_record_literal();
      case Tok::LBracket:
        return parse_list_literal();
      default:
        fail("expected an expression");
    }
  }

  SurfaceExpr parse_record_literal() {
    std::size_t b = peek().span.begin;
    expect(Tok::LBrace, "'{'");
    if (at(Tok::RBrace)) fail("record literals need at least one field");
    std::vector<std::pair<std::string, SurfaceExpr>> fields;
    while (true) {
      std::string label = parse_name();
      if (!at_op("=")) fail("expected '=' in record field");
      next();
      fields.emplace_back(label, parse_expr());
      if (eat(Tok::Semi)) {
        if (at(Tok::RBrace)) break;
        continue;
      }
      break;
    }
    expect(Tok::RBrace, "'}'");
    return mk_expr(ERecord{std::move(fields)}, span_from(b));
  }

  SurfaceExpr parse_list_literal() {
    std::size_t b = peek().span.begin;
    expect(Tok::LBracket, "'['");
    std::vector<SurfaceExpr> elems;
    if (!at(Tok::RBracket)) {
      elems.push_back(parse_expr());
      while (eat(Tok::Semi)) elems.push_back(parse_expr());
    }
    expect(Tok::RBracket, "']'");
    return mk_expr(EList{std::move(elems)}, span_from(b));
  }

  SurfaceExpr parse_postfix() {
    std::size_t b = peek().span.begin;
    SurfaceExpr e = parse_atom();
    while (at(Tok::Dot)) {
      next();
      std::string label = parse_name();
      int index = 0;
      if (mangled && at(Tok::AtSuffix)) index = static_cast<int>(std::stol(next().text));
      e = mk_expr(ESel{e, label, index}, span_from(b));
    }
    return e;
  }

  SurfaceExpr parse_app() {
    std::size_t b = peek().span.begin;
    SurfaceExpr e = parse_postfix();
    while (at_atom_start()) {
      SurfaceExpr arg = parse_postfix();
      e = mk_expr(EApp{e, arg}, span_from(b));
    }
    return e;
  }

  bool at_op(const char* sym) const { return at(Tok::Op) && peek().text == sym; }

  SurfaceExpr binop(const std::string& op, SurfaceExpr a, SurfaceExpr c, std::size_t b) {
    Span s = span_from(b);
    SurfaceExpr v = mk_expr(EVar{op}, s);
    return mk_expr(EApp{mk_expr(EApp{v, a}, s), c}, s);
  }

  SurfaceExpr parse_mul() {
    std::size_t b = peek().span.begin;
    SurfaceExpr e = parse_app();
    while (at_op("*")) {
      next();
      e = binop("*", e, parse_app(), b);
    }
    return e;
  }

  SurfaceExpr parse_add() {
    std::size_t b = peek().span.begin;
    SurfaceExpr e = parse_mul();
    while (at_op("+") || at_op("-")) {
      std::string op = next().text;
      e = binop(op, e, parse_mul(), b);
    }
    return e;
  }

  SurfaceExpr parse_cons() {
    std::size_t b = peek().span.begin;
    SurfaceExpr e = parse_add();
    if (at_op("::")) {
      next();
      SurfaceExpr tail = parse_cons();
      return mk_expr(ECons{e, tail}, span_from(b));
    }
    return e;
  }

  SurfaceExpr parse_concat() {
    std::size_t b = peek().span.begin;
    SurfaceExpr e = parse_cons();
    if (at_op("^")) {
      next();
      return binop("^", e, parse_concat(), b);  // right-associative
    }
    return e;
  }

  SurfaceExpr parse_cmp() {
    std::size_t b = peek().span.begin;
    SurfaceExpr e = parse_concat();
    while (at_op("=") || at_op("<") || at_op("<=")) {
      std::string op = next().text;
      e = binop(op, e, parse_concat(), b);
    }
    return e;
  }

  SurfaceExpr parse_and() {
    std::size_t b = peek().span.begin;
    SurfaceExpr e = parse_cmp();
    while (at_op("&&")) {
      next();
      e = binop("&&", e, parse_cmp(), b);
    }
    return e;
  }

  SurfaceExpr parse_or() {
    std::size_t b = peek().span.begin;
    SurfaceExpr e = parse_and();
    while (at_op("||")) {
      next();
      e = binop("||", e, parse_and(), b);
    }
    return e;
  }

  // inject / eject, with optional restriction list: `inject x y in e`
  SurfaceExpr parse_ject(bool is_inject) {
    std::size_t b = peek().span.begin;
    next();  // inject / eject keyword
    std::vector<std::string> restriction;
    // lookahead: a run of names followed by `in` is a restriction list
    std::size_t save = pos;
    std::vector<std::string> names;
    while (at_name()) names.push_back(parse_name());
    if (!names.empty() && at(Tok::KwIn)) {
      next();
      restriction = std::move(names);
      std::set<std::string> seen;
      for (const auto& n : restriction)
        if (!seen.insert(n).second)
          throw parse_error("duplicate name '" + n + "' in restriction list", span_from(b));
    } else {
      pos = save;
    }
    SurfaceExpr subject = parse_expr();
    if (is_inject) return mk_expr(EInject{std::move(restriction), subject}, span_from(b));
    return mk_expr(EEject{std::move(restriction), subject}, span_from(b));
  }

  // `name params* = expr`, desugaring params to nested lambdas
  std::pair<std::string, SurfaceExpr> parse_binding() {
    std::string name = parse_mangled_name();
    std::vector<std::pair<std::string, Span>> params;
    while (at_name() || (mangled && at(Tok::Implicit))) {
      std::size_t b = peek().span.begin;
      std::string p;
      if (mangled && at(Tok::Implicit)) p = "?" + next().text;
      else p = parse_mangled_name();
      params.emplace_back(p, span_from(b));
    }
    if (!at_op("=")) fail("expected '='");
    next();
    SurfaceExpr body = parse_expr();
    for (auto it = params.rbegin(); it != params.rend(); ++it)
      body = mk_expr(ELam{it->first, body}, it->second);
    return {name, body};
  }

  SurfaceExpr parse_match() {
    std::size_t b = peek().span.begin;
    expect(Tok::KwMatch, "'match'");
    SurfaceExpr subject = parse_expr();
    expect(Tok::KwWith, "'with'");
    std::optional<SurfaceExpr> nil_arm;
    std::optional<std::pair<std::string, SurfaceExpr>> singleton;
    std::optional<std::tuple<std::string, std::string, SurfaceExpr>> cons;
    eat(Tok::Pipe);
    while (true) {
      if (at(Tok::LBracket) && peek(1).kind == Tok::RBracket) {
        next();
        next();
        expect(Tok::Arrow, "'->'");
        if (nil_arm) fail("duplicate [] arm");
        nil_arm = parse_expr();
      } else if (at(Tok::LBracket)) {
        next();
        std::string x = parse_name();
        expect(Tok::RBracket, "']'");
        expect(Tok::Arrow, "'->'");
        if (singleton) fail("duplicate singleton arm");
        singleton = {x, parse_expr()};
      } else {
        std::string h = parse_name();
        if (!at_op("::")) fail("expected '::' in cons pattern");
        next();
        std::string t = parse_name();
        expect(Tok::Arrow, "'->'");
        if (cons) fail("duplicate cons arm");
        cons = {h, t, parse_expr()};
      }
      if (!eat(Tok::Pipe)) break;
    }
    if (!nil_arm) fail("match needs a [] arm");
    if (!cons) fail("match needs a cons arm");
    auto [h, t, body] = *cons;
    return mk_expr(EMatch{subject, *nil_arm, std::move(singleton), h, t, body}, span_from(b));
  }

  SurfaceExpr parse_expr() {
    std::size_t b = peek().span.begin;
    switch (peek().kind) {
      case Tok::KwFun: {
        next();
        std::vector<std::pair<std::string, Span>> params;
        while (at_name() || (mangled && at(Tok::Implicit))) {
          std::size_t pb = peek().span.begin;
          std::string p;
          if (mangled && at(Tok::Implicit)) p = "?" + next().text;
          else p = parse_mangled_name();
          params.emplace_back(p, span_from(pb));
        }
        if (params.empty()) fail("fun needs at least one parameter");
        expect(Tok::Arrow, "'->'");
        SurfaceExpr body = parse_expr();
        for (auto it = params.rbegin(); it != params.rend(); ++it)
          body = mk_expr(ELam{it->first, body}, it->second);
        return body;
      }
      case Tok::KwLet: {
        next();
        bool rec = eat(Tok::KwRec);
        bool over = !rec && eat(Tok::KwOver);
        auto [name, bound] = parse_binding();
        expect(Tok::KwIn, "'in'");
        SurfaceExpr body = parse_expr();
        if (over) return mk_expr(ELetOver{name, bound, body}, span_from(b));
        return mk_expr(ELet{rec, name, bound, body}, span_from(b));
      }
      case Tok::KwOverload: {
        next();
        std::string name = parse_name();
        expect(Tok::Colon, "':'");
        SurfaceType ann = parse_type_expr();
        expect(Tok::KwIn, "'in'");
        SurfaceExpr body = parse_expr();
        return mk_expr(EOverload{name, ann, body}, span_from(b));
      }
      case Tok::KwMatch:
        return parse_match();
      case Tok::KwInject:
        return parse_ject(true);
      case Tok::KwEject:
        return parse_ject(false);
      default:
        return parse_or();
    }
  }

  // ---- top-level ----

  TopItem parse_item() {
    std::size_t b = peek().span.begin;
    TopItem item;
    if (at(Tok::KwOverload)) {
      next();
      item.kind = TopItem::Kind::Overload;
      item.name = parse_name();
      expect(Tok::Colon, "':'");
      item.annotation = parse_type_expr();
      item.span = span_from(b);
      return item;
    }
    expect(Tok::KwLet, "'let' or 'overload'");
    item.recursive = eat(Tok::KwRec);
    bool over = !item.recursive && eat(Tok::KwOver);
    item.kind = over ? TopItem::Kind::LetOver : TopItem::Kind::Let;
    auto [name, bound] = parse_binding();
    item.name = name;
    item.expr = bound;
    item.span = span_from(b);
    if (at(Tok::KwIn)) fail("'in' is not allowed after a top-level binding");
    return item;
  }

  SurfaceProgram parse_program() {
    SurfaceProgram p;
    while (!at(Tok::Eof)) p.items.push_back(parse_item());
    return p;
  }
};

}  // namespace

SurfaceProgram parse_program(const std::string& source, bool mangled) {
  Parser p{lex(source, mangled), mangled};
  return p.parse_program();
}

SurfaceType parse_type(const std::string& source) {
  Parser p{lex(source, false), false};
  SurfaceType t = p.parse_type_expr();
  p.expect(Tok::Eof, "end of input");
  return t;
}

SurfaceExpr parse_expr_source(const std::string& source, bool mangled) {
  Parser p{lex(source, mangled), mangled};
  SurfaceExpr e = p.parse_expr();
  p.expect(Tok::Eof, "end of input");
  return e;
}

ReplInput parse_repl_input(const std::string& source) {
  Parser p{lex(source, false), false};
  ReplInput r;
  // A leading let/overload is an item unless it turns out to be a
  // let..in / overload..in expression; try the item reading first.
  std::size_t save = p.pos;
  if (p.at(Tok::KwLet) || p.at(Tok::KwOverload)) {
    try {
      r.item = p.parse_item();
      p.expect(Tok::Eof, "end of input");
      r.is_item = true;
      return r;
    } catch (const parse_error&) {
      p.pos = save;
    }
  }
  r.expr = p.parse_expr();
  p.expect(Tok::Eof, "end of input");
  return r;
}

}  // namespace lwlite
