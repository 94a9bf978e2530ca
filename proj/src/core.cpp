#include <algorithm>
#include <map>
#include <sstream>

#include "lwlite/ast.hpp"
#include "lwlite/core.hpp"

namespace lwlite {

namespace {
template <class... Ts>
struct overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overload(Ts...) -> overload<Ts...>;

bool is_key_name(const std::string& s) {
  return !s.empty() && (s[0] == '?' || s.find('%') != std::string::npos);
}
}  // namespace

CoreExpr mk_core(CoreVariant v) { return std::make_shared<CoreNode>(CoreNode{std::move(v)}); }
CoreExpr cvar(std::string name) { return mk_core(CVar{std::move(name)}); }
CoreExpr capp(CoreExpr fn, CoreExpr arg) { return mk_core(CApp{std::move(fn), std::move(arg)}); }
CoreExpr clam(std::string param, CoreExpr body) {
  return mk_core(CLam{std::move(param), std::move(body)});
}
CoreExpr clet(std::string name, CoreExpr bound, CoreExpr body, bool recursive, int dict_arity) {
  return mk_core(CLet{recursive, std::move(name), dict_arity, std::move(bound), std::move(body)});
}

CoreExpr substitute_var(const CoreExpr& e, const std::string& name, const CoreExpr& replacement) {
  return std::visit(
      overload{
          [&](const CVar& v) { return v.name == name ? replacement : e; },
          [&](const CInt&) { return e; },
          [&](const CStr&) { return e; },
          [&](const CBool&) { return e; },
          [&](const CLam& l) {
            if (l.param == name) return e;
            return mk_core(CLam{l.param, substitute_var(l.body, name, replacement)});
          },
          [&](const CApp& a) {
            return capp(substitute_var(a.fn, name, replacement),
                        substitute_var(a.arg, name, replacement));
          },
          [&](const CLet& l) {
            bool shadows = l.name == name;
            CoreExpr bound = (l.recursive && shadows)
                                 ? l.bound
                                 : substitute_var(l.bound, name, replacement);
            CoreExpr body = shadows ? l.body : substitute_var(l.body, name, replacement);
            return mk_core(CLet{l.recursive, l.name, l.dict_arity, bound, body});
          },
          [&](const CSel& s) {
            return mk_core(CSel{substitute_var(s.subject, name, replacement), s.label, s.index});
          },
          [&](const CRecord& r) {
            CRecord out;
            for (const auto& [l, f] : r.fields)
              out.fields.emplace_back(l, substitute_var(f, name, replacement));
            return mk_core(std::move(out));
          },
          [&](const CList& l) {
            CList out;
            for (const auto& x : l.elems) out.elems.push_back(substitute_var(x, name, replacement));
            return mk_core(std::move(out));
          },
          [&](const CCons& c) {
            return mk_core(CCons{substitute_var(c.head, name, replacement),
                                 substitute_var(c.tail, name, replacement)});
          },
          [&](const CMatch& m) {
            CMatch out = m;
            out.subject = substitute_var(m.subject, name, replacement);
            out.nil_arm = substitute_var(m.nil_arm, name, replacement);
            if (m.singleton_arm && m.singleton_arm->first != name)
              out.singleton_arm = {m.singleton_arm->first,
                                   substitute_var(m.singleton_arm->second, name, replacement)};
            if (m.cons_head != name && m.cons_tail != name)
              out.cons_arm = substitute_var(m.cons_arm, name, replacement);
            return mk_core(std::move(out));
          },
      },
      e->v);
}

namespace {

SurfaceExpr to_surface(const CoreExpr& e) {
  return std::visit(
      overload{
          [&](const CVar& v) { return mk_expr(EVar{v.name}, {}); },
          [&](const CInt& v) { return mk_expr(EInt{v.value}, {}); },
          [&](const CStr& v) { return mk_expr(EStr{v.value}, {}); },
          [&](const CBool& v) { return mk_expr(EBool{v.value}, {}); },
          [&](const CLam& l) { return mk_expr(ELam{l.param, to_surface(l.body)}, {}); },
          [&](const CApp& a) { return mk_expr(EApp{to_surface(a.fn), to_surface(a.arg)}, {}); },
          [&](const CLet& l) {
            return mk_expr(ELet{l.recursive, l.name, to_surface(l.bound), to_surface(l.body)},
                           {});
          },
          [&](const CSel& s) { return mk_expr(ESel{to_surface(s.subject), s.label, s.index}, {}); },
          [&](const CRecord& r) {
            ERecord out;
            for (const auto& [l, f] : r.fields) out.fields.emplace_back(l, to_surface(f));
            return mk_expr(std::move(out), Span{});
          },
          [&](const CList& l) {
            EList out;
            for (const auto& x : l.elems) out.elems.push_back(to_surface(x));
            return mk_expr(std::move(out), Span{});
          },
          [&](const CCons& c) {
            return mk_expr(ECons{to_surface(c.head), to_surface(c.tail)}, {});
          },
          [&](const CMatch& m) {
            EMatch out{to_surface(m.subject),
                       to_surface(m.nil_arm),
                       std::nullopt,
                       m.cons_head,
                       m.cons_tail,
                       to_surface(m.cons_arm)};
            if (m.singleton_arm)
              out.singleton_arm = {m.singleton_arm->first, to_surface(m.singleton_arm->second)};
            return mk_expr(std::move(out), Span{});
          },
      },
      e->v);
}

}  // namespace

std::string print_core(const CoreExpr& e) { return print_expr(to_surface(e)); }

std::string print_core_program(const CoreProgram& p) {
  std::ostringstream out;
  for (const CoreItem& item : p.items) {
    out << (item.recursive ? "let rec " : "let ");
    SurfaceExpr name = mk_expr(EVar{item.name}, {});
    out << print_expr(name) << " = " << print_core(item.expr) << "\n";
  }
  return out.str();
}

namespace {

struct ArityScanner {
  Diagnostics diags;
  std::map<std::string, int> arities;

  void report(const std::string& msg) { diags.push_back({Severity::Error, {}, msg}); }

  void check_binding_shape(const std::string& name, int arity, const CoreExpr& bound) {
    const CoreExpr* cur = &bound;
    for (int i = 0; i < arity; ++i) {
      const CLam* lam = std::get_if<CLam>(&(*cur)->v);
      if (!lam || !is_key_name(lam->param)) {
        report("binding '" + name + "' declares " + std::to_string(arity) +
               " constraint parameters but its translation does not abstract them");
        return;
      }
      cur = &lam->body;
    }
  }

  void scan_spine(const CoreExpr& e) {
    std::vector<const CoreExpr*> args;
    const CoreExpr* head = &e;
    while (const CApp* app = std::get_if<CApp>(&(*head)->v)) {
      args.push_back(&app->arg);
      head = &app->fn;
    }
    std::reverse(args.begin(), args.end());
    const CVar* var = std::get_if<CVar>(&(*head)->v);
    int needed = 0;
    if (var) {
      auto it = arities.find(var->name);
      if (it != arities.end()) needed = it->second;
    }
    if (needed > 0) {
      if (static_cast<int>(args.size()) < needed) {
        report("'" + var->name + "' needs " + std::to_string(needed) +
               " dictionary arguments but is applied to " + std::to_string(args.size()));
      } else {
        for (int i = 0; i < needed; ++i) {
          const CVar* arg = std::get_if<CVar>(&(*args[i])->v);
          if (!arg || !is_key_name(arg->name)) {
            report("argument " + std::to_string(i + 1) + " of '" + var->name +
                   "' is not a dictionary argument");
            break;
          }
        }
      }
    } else if (!var) {
      scan(*head);
    }
    for (const CoreExpr* a : args) scan(*a);
  }

  void with_shadowed(const std::string& name, const CoreExpr& e) {
    auto it = arities.find(name);
    if (it == arities.end()) {
      scan(e);
      return;
    }
    int saved = it->second;
    arities.erase(it);
    scan(e);
    arities[name] = saved;
  }

  void scan(const CoreExpr& e) {
    std::visit(overload{
                   [&](const CVar& v) {
                     auto it = arities.find(v.name);
                     if (it != arities.end() && it->second > 0)
                       report("'" + v.name + "' needs " + std::to_string(it->second) +
                              " dictionary arguments but is applied to 0");
                   },
                   [&](const CInt&) {},
                   [&](const CStr&) {},
                   [&](const CBool&) {},
                   [&](const CLam& l) { with_shadowed(l.param, l.body); },
                   [&](const CApp&) { scan_spine(e); },
                   [&](const CLet& l) {
                     if (l.dict_arity > 0) check_binding_shape(l.name, l.dict_arity, l.bound);
                     if (l.recursive) {
                       int saved = arities.count(l.name) ? arities[l.name] : -1;
                       arities[l.name] = l.dict_arity;
                       scan(l.bound);
                       if (saved >= 0) arities[l.name] = saved;
                       else arities.erase(l.name);
                     } else {
                       scan(l.bound);
                     }
                     int saved = arities.count(l.name) ? arities[l.name] : -1;
                     arities[l.name] = l.dict_arity;
                     scan(l.body);
                     if (saved >= 0) arities[l.name] = saved;
                     else arities.erase(l.name);
                   },
                   [&](const CSel& s) { scan(s.subject); },
                   [&](const CRecord& r) {
                     for (const auto& [lbl, f] : r.fields) scan(f);
                   },
                   [&](const CList& l) {
                     for (const auto& x : l.elems) scan(x);
                   },
                   [&](const CCons& c) {
                     scan(c.head);
                     scan(c.tail);
                   },
                   [&](const CMatch& m) {
                     scan(m.subject);
                     scan(m.nil_arm);
                     if (m.singleton_arm) with_shadowed(m.singleton_arm->first, m.singleton_arm->second);
                     // cons binders shadow
                     auto h = arities.extract(m.cons_head);
                     auto t = arities.extract(m.cons_tail);
                     scan(m.cons_arm);
                     if (h) arities.insert(std::move(h));
                     if (t) arities.insert(std::move(t));
                   },
               },
               e->v);
  }
};

}  // namespace

Diagnostics check_core_arity(const CoreProgram& p) {
  ArityScanner scanner;
  for (const CoreItem& item : p.items) {
    if (item.dict_arity > 0) scanner.check_binding_shape(item.name, item.dict_arity, item.expr);
    if (item.recursive) {
      scanner.arities[item.name] = item.dict_arity;
      scanner.scan(item.expr);
    } else {
      scanner.scan(item.expr);
      scanner.arities[item.name] = item.dict_arity;
    }
  }
  return scanner.diags;
}

}  // namespace lwlite
