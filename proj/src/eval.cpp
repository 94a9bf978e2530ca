#include <sstream>

#include "lwlite/eval.hpp"
#include "lwlite/types.hpp"

namespace lwlite {

namespace {
template <class... Ts>
struct overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overload(Ts...) -> overload<Ts...>;

ValuePtr mk(Value v) { return std::make_shared<Value>(std::move(v)); }

[[noreturn]] void confusion(const std::string& what) {
  throw eval_error("runtime type confusion: expected " + what);
}

long long as_int(const ValuePtr& v) {
  const VInt* i = std::get_if<VInt>(&v->v);
  if (!i) confusion("int");
  return i->value;
}
const std::string& as_str(const ValuePtr& v) {
  const VStr* s = std::get_if<VStr>(&v->v);
  if (!s) confusion("string");
  return s->value;
}
bool as_bool(const ValuePtr& v) {
  const VBool* b = std::get_if<VBool>(&v->v);
  if (!b) confusion("bool");
  return b->value;
}
const std::vector<ValuePtr>& as_list(const ValuePtr& v) {
  const VList* l = std::get_if<VList>(&v->v);
  if (!l) confusion("list");
  return l->elems;
}

ValuePtr run_builtin(const std::string& name, const std::vector<ValuePtr>& a) {
  if (name == "+") return mk({VInt{as_int(a[0]) + as_int(a[1])}});
  if (name == "-") return mk({VInt{as_int(a[0]) - as_int(a[1])}});
  if (name == "*") return mk({VInt{as_int(a[0]) * as_int(a[1])}});
  if (name == "^") return mk({VStr{as_str(a[0]) + as_str(a[1])}});
  if (name == "||") return mk({VBool{as_bool(a[0]) || as_bool(a[1])}});
  if (name == "&&") return mk({VBool{as_bool(a[0]) && as_bool(a[1])}});
  if (name == "=") return mk({VBool{as_int(a[0]) == as_int(a[1])}});
  if (name == "<") return mk({VBool{as_int(a[0]) < as_int(a[1])}});
  if (name == "string_of_int") return mk({VStr{std::to_string(as_int(a[0]))}});
  if (name == "int_of_string") {
    const std::string& s = as_str(a[0]);
    try {
      std::size_t used = 0;
      long long v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return mk({VInt{v}});
    } catch (const std::exception&) {
      throw eval_error("int_of_string: cannot parse \"" + s + "\"");
    }
  }
  if (name == "map") {
    std::vector<ValuePtr> out;
    for (const ValuePtr& x : as_list(a[1])) out.push_back(apply_value(a[0], x));
    return mk({VList{std::move(out)}});
  }
  if (name == "foldl") {
    // element-first: acc := f x acc, left to right
    ValuePtr acc = a[1];
    for (const ValuePtr& x : as_list(a[2])) acc = apply_value(apply_value(a[0], x), acc);
    return acc;
  }
  throw internal_error("unknown builtin " + name);
}

}  // namespace

ValueEnv env_bind(ValueEnv parent, std::string name, ValuePtr value) {
  auto slot = std::make_shared<ValuePtr>(std::move(value));
  return std::make_shared<ValueEnvNode>(ValueEnvNode{std::move(name), slot, std::move(parent)});
}

const ValuePtr* env_lookup(const ValueEnv& env, const std::string& name) {
  for (const ValueEnvNode* n = env.get(); n; n = n->parent.get())
    if (n->name == name) return n->slot.get();
  return nullptr;
}

ValuePtr apply_value(const ValuePtr& fn, const ValuePtr& arg) {
  if (const VClosure* c = std::get_if<VClosure>(&fn->v))
    return eval(env_bind(c->env, c->param, arg), c->body);
  if (const VBuiltin* b = std::get_if<VBuiltin>(&fn->v)) {
    std::vector<ValuePtr> args = b->partial;
    args.push_back(arg);
    if (static_cast<int>(args.size()) == b->arity) return run_builtin(b->name, args);
    return mk({VBuiltin{b->name, b->arity, std::move(args)}});
  }
  confusion("function");
}

ValuePtr eval(const ValueEnv& env, const CoreExpr& e) {
  return std::visit(
      overload{
          [&](const CVar& v) -> ValuePtr {
            const ValuePtr* found = env_lookup(env, v.name);
            if (!found || !*found)
              throw eval_error("unbound variable '" + v.name + "' (translation bug)");
            return *found;
          },
          [&](const CInt& v) -> ValuePtr { return mk({VInt{v.value}}); },
          [&](const CStr& v) -> ValuePtr { return mk({VStr{v.value}}); },
          [&](const CBool& v) -> ValuePtr { return mk({VBool{v.value}}); },
          [&](const CLam& l) -> ValuePtr { return mk({VClosure{l.param, l.body, env}}); },
          [&](const CApp& a) -> ValuePtr {
            ValuePtr fn = eval(env, a.fn);
            ValuePtr arg = eval(env, a.arg);
            return apply_value(fn, arg);
          },
          [&](const CLet& l) -> ValuePtr {
            if (!l.recursive) return eval(env_bind(env, l.name, eval(env, l.bound)), l.body);
            auto slot = std::make_shared<ValuePtr>();
            ValueEnv inner = std::make_shared<ValueEnvNode>(ValueEnvNode{l.name, slot, env});
            *slot = eval(inner, l.bound);
            return eval(inner, l.body);
          },
          [&](const CSel& s) -> ValuePtr {
            ValuePtr subject = eval(env, s.subject);
            const VRecord* r = std::get_if<VRecord>(&subject->v);
            if (!r) confusion("record");
            int skip = s.index;
            for (const auto& [label, value] : r->fields) {
              if (label != s.label) continue;
              if (skip-- == 0) return value;
            }
            throw eval_error("record has no field '" + s.label + "' (translation bug)");
          },
          [&](const CRecord& r) -> ValuePtr {
            VRecord out;
            for (const auto& [label, f] : r.fields) out.fields.emplace_back(label, eval(env, f));
            return mk({std::move(out)});
          },
          [&](const CList& l) -> ValuePtr {
            VList out;
            for (const auto& x : l.elems) out.elems.push_back(eval(env, x));
            return mk({std::move(out)});
          },
          [&](const CCons& c) -> ValuePtr {
            ValuePtr head = eval(env, c.head);
            ValuePtr tail = eval(env, c.tail);
            VList out;
            out.elems.push_back(head);
            const auto& rest = as_list(tail);
            out.elems.insert(out.elems.end(), rest.begin(), rest.end());
            return mk({std::move(out)});
          },
          [&](const CMatch& m) -> ValuePtr {
            ValuePtr subject = eval(env, m.subject);
            const auto& elems = as_list(subject);
            if (elems.empty()) return eval(env, m.nil_arm);
            if (elems.size() == 1 && m.singleton_arm)
              return eval(env_bind(env, m.singleton_arm->first, elems[0]),
                          m.singleton_arm->second);
            ValuePtr head = elems[0];
            VList tail{std::vector<ValuePtr>(elems.begin() + 1, elems.end())};
            ValueEnv inner = env_bind(env, m.cons_head, head);
            inner = env_bind(inner, m.cons_tail, mk({std::move(tail)}));
            return eval(inner, m.cons_arm);
          },
      },
      e->v);
}

ValueEnv builtin_values() {
  ValueEnv env;
  auto add = [&](const std::string& name, int arity) {
    env = env_bind(env, name, mk({VBuiltin{name, arity, {}}}));
  };
  add("+", 2);
  add("-", 2);
  add("*", 2);
  add("^", 2);
  add("||", 2);
  add("&&", 2);
  add("=", 2);
  add("<", 2);
  add("string_of_int", 1);
  add("int_of_string", 1);
  add("map", 2);
  add("foldl", 3);
  return env;
}

bool value_printable(const ValuePtr& v) {
  return std::visit(overload{
                        [](const VInt&) { return true; },
                        [](const VStr&) { return true; },
                        [](const VBool&) { return true; },
                        [](const VList& l) {
                          for (const auto& x : l.elems)
                            if (!value_printable(x)) return false;
                          return true;
                        },
                        [](const VRecord& r) {
                          for (const auto& [l, x] : r.fields)
                            if (!value_printable(x)) return false;
                          return true;
                        },
                        [](const VClosure&) { return false; },
                        [](const VBuiltin&) { return false; },
                    },
                    v->v);
}

std::string print_value(const ValuePtr& v) {
  std::ostringstream out;
  std::visit(overload{
                 [&](const VInt& x) { out << x.value; },
                 [&](const VStr& x) {
                   out << '"';
                   for (char c : x.value) {
                     if (c == '"' || c == '\\') out << '\\';
                     out << c;
                   }
                   out << '"';
                 },
                 [&](const VBool& x) { out << (x.value ? "true" : "false"); },
                 [&](const VList& x) {
                   out << "[";
                   for (std::size_t i = 0; i < x.elems.size(); ++i) {
                     if (i) out << "; ";
                     out << print_value(x.elems[i]);
                   }
                   out << "]";
                 },
                 [&](const VRecord& x) {
                   out << "{ ";
                   for (std::size_t i = 0; i < x.fields.size(); ++i) {
                     if (i) out << "; ";
                     out << display_base(x.fields[i].first) << " = "
                         << print_value(x.fields[i].second);
                   }
                   out << " }";
                 },
                 [&](const VClosure&) { out << "<fun>"; },
                 [&](const VBuiltin&) { out << "<fun>"; },
             },
             v->v);
  return out.str();
}

}  // namespace lwlite
