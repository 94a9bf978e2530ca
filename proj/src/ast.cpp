#include <sstream>

#include "lwlite/ast.hpp"

namespace lwlite {

namespace {

template <class... Ts>
struct overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overload(Ts...) -> overload<Ts...>;

bool is_op_char(char c) { return std::string("+-*^=<>|&:").find(c) != std::string::npos; }

// "add%3" -> {"add", "%3"}; "+$17" -> {"+", "$17"}; "?x" -> {"?x", ""}
std::pair<std::string, std::string> split_mangled(const std::string& name) {
  auto cut = name.find_first_of("%$");
  if (cut == std::string::npos) return {name, ""};
  return {name.substr(0, cut), name.substr(cut)};
}

std::string print_name(const std::string& name) {
  std::string base = name, prefix;
  if (!base.empty() && base[0] == '?') {
    prefix = "?";
    base = base.substr(1);
  }
  auto [stem, suffix] = split_mangled(base);
  if (!stem.empty() && is_op_char(stem[0])) return prefix + "(" + stem + ")" + suffix;
  return prefix + base;
}

// printing precedence levels, mirroring the parser
constexpr int LVL_OPEN = 0;  // fun / let / match / inject / eject
constexpr int LVL_OR = 1, LVL_AND = 2, LVL_CMP = 3, LVL_CAT = 4, LVL_CONS = 5;
constexpr int LVL_ADD = 6, LVL_MUL = 7, LVL_APP = 8, LVL_POST = 9, LVL_ATOM = 10;

int op_level(const std::string& op) {
  if (op == "||") return LVL_OR;
  if (op == "&&") return LVL_AND;
  if (op == "=" || op == "<" || op == "<=") return LVL_CMP;
  if (op == "^") return LVL_CAT;
  if (op == "+" || op == "-") return LVL_ADD;
  if (op == "*") return LVL_MUL;
  return -1;
}

bool right_assoc(const std::string& op) { return op == "^"; }

struct Printer {
  std::ostringstream out;

  void type(const SurfaceType& t) {
    std::visit(overload{
                   [&](const STVar& v) { out << "'" << v.name; },
                   [&](const STCon& c) { out << c.name; },
                   [&](const STPostfix& p) {
                     bool parens = std::holds_alternative<STArrow>(p.arg->v);
                     if (parens) out << "(";
                     type(p.arg);
                     if (parens) out << ")";
                     out << " " << p.ctor;
                   },
                   [&](const STArrow& a) {
                     bool parens = std::holds_alternative<STArrow>(a.dom->v);
                     if (parens) out << "(";
                     type(a.dom);
                     if (parens) out << ")";
                     out << " -> ";
                     type(a.cod);
                   },
                   [&](const STRecord& r) {
                     out << "{ ";
                     for (std::size_t i = 0; i < r.fields.size(); ++i) {
                       if (i) out << "; ";
                       out << print_name(r.fields[i].first) << " : ";
                       type(r.fields[i].second);
                     }
                     if (r.tail) out << " | '" << *r.tail;
                     out << " }";
                   },
               },
               t->v);
  }

  // Detects `(op a) b` application spines so they can print infix.
  static const std::string* infix_op(const SurfaceExpr& e, SurfaceExpr& lhs, SurfaceExpr& rhs) {
    auto* app = std::get_if<EApp>(&e->v);
    if (!app) return nullptr;
    auto* inner = std::get_if<EApp>(&app->fn->v);
    if (!inner) return nullptr;
    auto* var = std::get_if<EVar>(&inner->fn->v);
    if (!var || op_level(var->name) < 0) return nullptr;
    lhs = inner->arg;
    rhs = app->arg;
    return &var->name;
  }

  void expr(const SurfaceExpr& e, int min_level) {
    int lvl = level(e);
    bool parens = lvl < min_level;
    if (parens) out << "(";
    print_raw(e);
    if (parens) out << ")";
  }

  static int level(const SurfaceExpr& e) {
    SurfaceExpr lhs, rhs;
    if (const std::string* op = infix_op(e, lhs, rhs)) return op_level(*op);
    return std::visit(
        overload{
            [](const EVar&) { return LVL_ATOM; },
            [](const EImplicit&) { return LVL_ATOM; },
            [](const EInt&) { return LVL_ATOM; },
            [](const EStr&) { return LVL_ATOM; },
            [](const EBool&) { return LVL_ATOM; },
            [](const ERecord&) { return LVL_ATOM; },
            [](const EList&) { return LVL_ATOM; },
            [](const ESel&) { return LVL_POST; },
            [](const EApp&) { return LVL_APP; },
            [](const ECons&) { return LVL_CONS; },
            [](const ELam&) { return LVL_OPEN; },
            [](const ELet&) { return LVL_OPEN; },
            [](const ELetOver&) { return LVL_OPEN; },
            [](const EOverload&) { return LVL_OPEN; },
            [](const EMatch&) { return LVL_OPEN; },
            [](const EEject&) { return LVL_OPEN; },
            [](const EInject&) { return LVL_OPEN; },
        },
        e->v);
  }

  void print_raw(const SurfaceExpr& e) {
    SurfaceExpr lhs, rhs;
    if (const std::string* op = infix_op(e, lhs, rhs)) {
      int lvl = op_level(*op);
      if (right_assoc(*op)) {
        expr(lhs, lvl + 1);
        out << " " << *op << " ";
        expr(rhs, lvl);
      } else {
        expr(lhs, lvl);
        out << " " << *op << " ";
        expr(rhs, lvl + 1);
      }
      return;
    }
    std::visit(
        overload{
            [&](const EVar& v) { out << print_name(v.name); },
            [&](const EImplicit& v) { out << print_name("?" + v.base); },
            [&](const EInt& v) { out << v.value; },
            [&](const EStr& v) {
              out << '"';
              for (char c : v.value) {
                if (c == '"' || c == '\\') out << '\\';
                out << c;
              }
              out << '"';
            },
            [&](const EBool& v) { out << (v.value ? "true" : "false"); },
            [&](const ELam& v) {
              out << "fun " << print_name(v.param);
              const SurfaceExpr* body = &v.body;
              while (auto* lam = std::get_if<ELam>(&(*body)->v)) {
                out << " " << print_name(lam->param);
                body = &lam->body;
              }
              out << " -> ";
              expr(*body, LVL_OPEN);
            },
            [&](const EApp& v) {
              expr(v.fn, LVL_APP);
              out << " ";
              expr(v.arg, LVL_POST);
            },
            [&](const ELet& v) {
              out << (v.recursive ? "let rec " : "let ") << print_name(v.name) << " = ";
              expr(v.bound, LVL_OPEN);
              out << " in ";
              expr(v.body, LVL_OPEN);
            },
            [&](const ELetOver& v) {
              out << "let over " << print_name(v.name) << " = ";
              expr(v.bound, LVL_OPEN);
              out << " in ";
              expr(v.body, LVL_OPEN);
            },
            [&](const EOverload& v) {
              out << "overload " << print_name(v.name) << " : ";
              type(v.annotation);
              out << " in ";
              expr(v.body, LVL_OPEN);
            },
            [&](const ERecord& v) {
              out << "{ ";
              for (std::size_t i = 0; i < v.fields.size(); ++i) {
                if (i) out << "; ";
                out << print_name(v.fields[i].first) << " = ";
                expr(v.fields[i].second, LVL_OPEN);
              }
              out << " }";
            },
            [&](const ESel& v) {
              expr(v.subject, LVL_POST);
              out << "." << print_name(v.label);
              if (v.index > 0) out << "@" << v.index;
            },
            [&](const EList& v) {
              out << "[";
              for (std::size_t i = 0; i < v.elems.size(); ++i) {
                if (i) out << "; ";
                expr(v.elems[i], LVL_OPEN);
              }
              out << "]";
            },
            [&](const ECons& v) {
              expr(v.head, LVL_CONS + 1);
              out << " :: ";
              expr(v.tail, LVL_CONS);
            },
            [&](const EMatch& v) {
              out << "match ";
              expr(v.subject, LVL_OR);
              out << " with | [] -> ";
              expr(v.nil_arm, LVL_OR);
              if (v.singleton_arm) {
                out << " | [" << print_name(v.singleton_arm->first) << "] -> ";
                expr(v.singleton_arm->second, LVL_OR);
              }
              out << " | " << print_name(v.cons_head) << " :: " << print_name(v.cons_tail)
                  << " -> ";
              expr(v.cons_arm, LVL_OPEN);
            },
            [&](const EEject& v) {
              out << "eject ";
              for (const auto& n : v.restriction) out << print_name(n) << " ";
              if (!v.restriction.empty()) out << "in ";
              expr(v.subject, LVL_OPEN);
            },
            [&](const EInject& v) {
              out << "inject ";
              for (const auto& n : v.restriction) out << print_name(n) << " ";
              if (!v.restriction.empty()) out << "in ";
              expr(v.subject, LVL_OPEN);
            },
        },
        e->v);
  }
};

bool type_equal(const SurfaceType& a, const SurfaceType& b) {
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overload{
          [&](const STVar& x) { return x.name == std::get<STVar>(b->v).name; },
          [&](const STCon& x) { return x.name == std::get<STCon>(b->v).name; },
          [&](const STPostfix& x) {
            const auto& y = std::get<STPostfix>(b->v);
            return x.ctor == y.ctor && type_equal(x.arg, y.arg);
          },
          [&](const STArrow& x) {
            const auto& y = std::get<STArrow>(b->v);
            return type_equal(x.dom, y.dom) && type_equal(x.cod, y.cod);
          },
          [&](const STRecord& x) {
            const auto& y = std::get<STRecord>(b->v);
            if (x.tail != y.tail || x.fields.size() != y.fields.size()) return false;
            for (std::size_t i = 0; i < x.fields.size(); ++i)
              if (x.fields[i].first != y.fields[i].first ||
                  !type_equal(x.fields[i].second, y.fields[i].second))
                return false;
            return true;
          },
      },
      a->v);
}

}  // namespace

bool expr_equal(const SurfaceExpr& a, const SurfaceExpr& b) {
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overload{
          [&](const EVar& x) { return x.name == std::get<EVar>(b->v).name; },
          [&](const EImplicit& x) { return x.base == std::get<EImplicit>(b->v).base; },
          [&](const EInt& x) { return x.value == std::get<EInt>(b->v).value; },
          [&](const EStr& x) { return x.value == std::get<EStr>(b->v).value; },
          [&](const EBool& x) { return x.value == std::get<EBool>(b->v).value; },
          [&](const ELam& x) {
            const auto& y = std::get<ELam>(b->v);
            return x.param == y.param && expr_equal(x.body, y.body);
          },
          [&](const EApp& x) {
            const auto& y = std::get<EApp>(b->v);
            return expr_equal(x.fn, y.fn) && expr_equal(x.arg, y.arg);
          },
          [&](const ELet& x) {
            const auto& y = std::get<ELet>(b->v);
            return x.recursive == y.recursive && x.name == y.name &&
                   expr_equal(x.bound, y.bound) && expr_equal(x.body, y.body);
          },
          [&](const ELetOver& x) {
            const auto& y = std::get<ELetOver>(b->v);
            return x.name == y.name && expr_equal(x.bound, y.bound) &&
                   expr_equal(x.body, y.body);
          },
          [&](const EOverload& x) {
            const auto& y = std::get<EOverload>(b->v);
            return x.name == y.name && type_equal(x.annotation, y.annotation) &&
                   expr_equal(x.body, y.body);
          },
          [&](const ERecord& x) {
            const auto& y = std::get<ERecord>(b->v);
            if (x.fields.size() != y.fields.size()) return false;
            for (std::size_t i = 0; i < x.fields.size(); ++i)
              if (x.fields[i].first != y.fields[i].first ||
                  !expr_equal(x.fields[i].second, y.fields[i].second))
                return false;
            return true;
          },
          [&](const ESel& x) {
            const auto& y = std::get<ESel>(b->v);
            return x.label == y.label && x.index == y.index && expr_equal(x.subject, y.subject);
          },
          [&](const EList& x) {
            const auto& y = std::get<EList>(b->v);
            if (x.elems.size() != y.elems.size()) return false;
            for (std::size_t i = 0; i < x.elems.size(); ++i)
              if (!expr_equal(x.elems[i], y.elems[i])) return false;
            return true;
          },
          [&](const ECons& x) {
            const auto& y = std::get<ECons>(b->v);
            return expr_equal(x.head, y.head) && expr_equal(x.tail, y.tail);
          },
          [&](const EMatch& x) {
            const auto& y = std::get<EMatch>(b->v);
            if (x.singleton_arm.has_value() != y.singleton_arm.has_value()) return false;
            if (x.singleton_arm &&
                (x.singleton_arm->first != y.singleton_arm->first ||
                 !expr_equal(x.singleton_arm->second, y.singleton_arm->second)))
              return false;
            return expr_equal(x.subject, y.subject) && expr_equal(x.nil_arm, y.nil_arm) &&
                   x.cons_head == y.cons_head && x.cons_tail == y.cons_tail &&
                   expr_equal(x.cons_arm, y.cons_arm);
          },
          [&](const EEject& x) {
            const auto& y = std::get<EEject>(b->v);
            return x.restriction == y.restriction && expr_equal(x.subject, y.subject);
          },
          [&](const EInject& x) {
            const auto& y = std::get<EInject>(b->v);
            return x.restriction == y.restriction && expr_equal(x.subject, y.subject);
          },
      },
      a->v);
}

bool program_equal(const SurfaceProgram& a, const SurfaceProgram& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    const TopItem& x = a.items[i];
    const TopItem& y = b.items[i];
    if (x.kind != y.kind || x.recursive != y.recursive || x.name != y.name) return false;
    if ((x.expr == nullptr) != (y.expr == nullptr)) return false;
    if (x.expr && !expr_equal(x.expr, y.expr)) return false;
    if ((x.annotation == nullptr) != (y.annotation == nullptr)) return false;
    if (x.annotation) {
      Printer pa, pb;
      pa.type(x.annotation);
      pb.type(y.annotation);
      if (pa.out.str() != pb.out.str()) return false;
    }
  }
  return true;
}

std::string print_expr(const SurfaceExpr& e) {
  Printer p;
  p.expr(e, 0);
  return p.out.str();
}

std::string print_program(const SurfaceProgram& p) {
  std::ostringstream out;
  for (const TopItem& item : p.items) {
    switch (item.kind) {
      case TopItem::Kind::Overload: {
        Printer tp;
        tp.type(item.annotation);
        out << "overload " << (item.name.empty() ? "" : print_expr(mk_expr(EVar{item.name}, {})))
            << " : " << tp.out.str() << "\n";
        break;
      }
      case TopItem::Kind::Let:
        out << (item.recursive ? "let rec " : "let ")
            << print_expr(mk_expr(EVar{item.name}, {})) << " = " << print_expr(item.expr)
            << "\n";
        break;
      case TopItem::Kind::LetOver:
        out << "let over " << print_expr(mk_expr(EVar{item.name}, {})) << " = "
            << print_expr(item.expr) << "\n";
        break;
    }
  }
  return out.str();
}

}  // namespace lwlite
