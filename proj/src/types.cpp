#include <algorithm>
#include <sstream>

#include "lwlite/types.hpp"

namespace lwlite {

namespace {
template <class... Ts>
struct overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overload(Ts...) -> overload<Ts...>;
}  // namespace

// ---- Kind ----

class KindHelper {
 public:
  static Kind make(Kind::Tag tag, std::shared_ptr<const Kind::Node> a = nullptr,
                   std::shared_ptr<const Kind::Node> b = nullptr) {
    return Kind(std::make_shared<Kind::Node>(Kind::Node{tag, std::move(a), std::move(b)}));
  }
  static std::shared_ptr<const Kind::Node> node(const Kind& k) { return k.node_; }
};

Kind Kind::star() {
  static Kind k = KindHelper::make(Tag::Star);
  return k;
}
Kind Kind::row() {
  static Kind k = KindHelper::make(Tag::Row);
  return k;
}
Kind Kind::arrow(Kind a, Kind b) {
  return KindHelper::make(Tag::Arrow, KindHelper::node(a), KindHelper::node(b));
}

Kind Kind::domain() const {
  if (tag() != Tag::Arrow) throw internal_error("kind has no domain");
  return Kind(node_->a);
}
Kind Kind::codomain() const {
  if (tag() != Tag::Arrow) throw internal_error("kind has no codomain");
  return Kind(node_->b);
}

bool Kind::node_equal(const Node& x, const Node& y) {
  if (x.tag != y.tag) return false;
  if (x.tag != Tag::Arrow) return true;
  return node_equal(*x.a, *y.a) && node_equal(*x.b, *y.b);
}

bool Kind::operator==(const Kind& other) const {
  return node_equal(*node_, *other.node_);
}

std::string Kind::str() const {
  switch (tag()) {
    case Tag::Star: return "*";
    case Tag::Row: return "row";
    case Tag::Arrow: {
      Kind d(node_->a), c(node_->b);
      std::string ds = d.str();
      if (d.tag() == Tag::Arrow) ds = "(" + ds + ")";
      return ds + " -> " + c.str();
    }
  }
  return "?";
}

// ---- Type constructors ----

Type t_con(const std::string& name, Kind k) {
  return std::make_shared<TypeNode>(TypeNode{TCon{name}, k});
}
Type t_var(int id, Kind k) {
  return std::make_shared<TypeNode>(TypeNode{TVar{id}, k});
}
Type t_app(Type fn, Type arg) {
  if (fn->kind.tag() != Kind::Tag::Arrow)
    throw internal_error("type application of a non-arrow kind");
  if (!(fn->kind.domain() == arg->kind))
    throw internal_error("kind mismatch in type application");
  Kind result = fn->kind.codomain();
  return std::make_shared<TypeNode>(TypeNode{TApp{std::move(fn), std::move(arg)}, result});
}

const TCon* as_con(const Type& t) { return std::get_if<TCon>(&t->v); }
const TVar* as_var(const Type& t) { return std::get_if<TVar>(&t->v); }
const TApp* as_app(const Type& t) { return std::get_if<TApp>(&t->v); }

Type t_int() {
  static Type t = t_con("int", Kind::star());
  return t;
}
Type t_string() {
  static Type t = t_con("string", Kind::star());
  return t;
}
Type t_bool() {
  static Type t = t_con("bool", Kind::star());
  return t;
}
Type t_list_con() {
  static Type t = t_con("list", Kind::arrow(Kind::star(), Kind::star()));
  return t;
}
Type t_arrow_con() {
  static Type t = t_con("->", Kind::arrow(Kind::star(), Kind::arrow(Kind::star(), Kind::star())));
  return t;
}
Type t_record_con() {
  static Type t = t_con("record", Kind::arrow(Kind::row(), Kind::star()));
  return t;
}
Type row_empty() {
  static Type t = t_con("<>", Kind::row());
  return t;
}
Type ext_con(const std::string& label) {
  return t_con("ext_" + label, Kind::arrow(Kind::star(), Kind::arrow(Kind::row(), Kind::row())));
}

Type t_list(Type elem) { return t_app(t_list_con(), std::move(elem)); }
Type t_arrow(Type dom, Type cod) {
  return t_app(t_app(t_arrow_con(), std::move(dom)), std::move(cod));
}
Type t_record(Type row) { return t_app(t_record_con(), std::move(row)); }
Type row_ext(const std::string& label, Type field, Type tail) {
  return t_app(t_app(ext_con(label), std::move(field)), std::move(tail));
}

bool is_arrow(const Type& t, Type* dom, Type* cod) {
  const TApp* outer = as_app(t);
  if (!outer) return false;
  const TApp* inner = as_app(outer->fn);
  if (!inner) return false;
  const TCon* c = as_con(inner->fn);
  if (!c || c->name != "->") return false;
  if (dom) *dom = inner->arg;
  if (cod) *cod = outer->arg;
  return true;
}

bool is_record(const Type& t, Type* row) {
  const TApp* app = as_app(t);
  if (!app) return false;
  const TCon* c = as_con(app->fn);
  if (!c || c->name != "record") return false;
  if (row) *row = app->arg;
  return true;
}

bool is_row_ext(const Type& t, std::string* label, Type* field, Type* tail) {
  const TApp* outer = as_app(t);
  if (!outer) return false;
  const TApp* inner = as_app(outer->fn);
  if (!inner) return false;
  const TCon* c = as_con(inner->fn);
  if (!c || c->name.rfind("ext_", 0) != 0) return false;
  if (label) *label = c->name.substr(4);
  if (field) *field = inner->arg;
  if (tail) *tail = outer->arg;
  return true;
}

bool is_row_empty(const Type& t) {
  const TCon* c = as_con(t);
  return c && c->name == "<>";
}

bool is_list(const Type& t, Type* elem) {
  const TApp* app = as_app(t);
  if (!app) return false;
  const TCon* c = as_con(app->fn);
  if (!c || c->name != "list") return false;
  if (elem) *elem = app->arg;
  return true;
}

bool type_equal(const Type& a, const Type& b) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  if (!(a->kind == b->kind)) return false;
  return std::visit(overload{
                        [&](const TCon& x) { return x.name == std::get<TCon>(b->v).name; },
                        [&](const TVar& x) { return x.id == std::get<TVar>(b->v).id; },
                        [&](const TApp& x) {
                          const TApp& y = std::get<TApp>(b->v);
                          return type_equal(x.fn, y.fn) && type_equal(x.arg, y.arg);
                        },
                    },
                    a->v);
}

RowFields row_fields(const Type& row) {
  RowFields out;
  Type cur = row;
  std::string label;
  Type field, tail;
  while (is_row_ext(cur, &label, &field, &tail)) {
    out.fields.emplace_back(label, field);
    cur = tail;
  }
  if (!is_row_empty(cur)) out.tail = cur;
  return out;
}

Type row_build(const std::vector<std::pair<std::string, Type>>& fields, Type tail) {
  Type r = std::move(tail);
  for (auto it = fields.rbegin(); it != fields.rend(); ++it)
    r = row_ext(it->first, it->second, r);
  return r;
}

// ---- ConstraintKey / ConstraintSet ----

ConstraintKey ConstraintKey::overloaded(std::string base, int occurrence) {
  return {Form::Overloaded, std::move(base), occurrence};
}
ConstraintKey ConstraintKey::implicit(std::string base) {
  return {Form::Implicit, std::move(base), 0};
}

std::string ConstraintKey::text() const {
  if (form == Form::Implicit) return "?" + base;
  return base + "%" + std::to_string(occurrence);
}

std::string display_base(const std::string& base) {
  if (!base.empty() && std::string("+-*^=<>|&:").find(base[0]) != std::string::npos)
    return "(" + base + ")";
  return base;
}

std::string ConstraintKey::display() const {
  if (form == Form::Implicit) return "?" + display_base(base);
  return display_base(base);
}

bool ConstraintKey::operator<(const ConstraintKey& o) const {
  if (base != o.base) return base < o.base;
  if (form != o.form) return form == Form::Overloaded;
  return occurrence < o.occurrence;
}

void ConstraintSet::add(ConstraintKey key, Type type) {
  if (contains(key)) throw internal_error("duplicate constraint key " + key.text());
  auto it = std::lower_bound(items_.begin(), items_.end(), key,
                             [](const auto& entry, const ConstraintKey& k) { return entry.first < k; });
  items_.insert(it, {std::move(key), std::move(type)});
}

bool ConstraintSet::contains(const ConstraintKey& key) const { return find(key) != nullptr; }

const Type* ConstraintSet::find(const ConstraintKey& key) const {
  for (const auto& [k, t] : items_)
    if (k == key) return &t;
  return nullptr;
}

void ConstraintSet::set_type(const ConstraintKey& key, Type type) {
  for (auto& [k, t] : items_)
    if (k == key) {
      t = std::move(type);
      return;
    }
  throw internal_error("set_type: missing constraint key " + key.text());
}

void ConstraintSet::remove(const ConstraintKey& key) {
  auto it = std::find_if(items_.begin(), items_.end(),
                         [&](const auto& e) { return e.first == key; });
  if (it == items_.end()) throw internal_error("remove: missing constraint key " + key.text());
  items_.erase(it);
}

// ---- Scheme ----

Scheme mono_scheme(Type t) { return Scheme{{}, {}, std::move(t)}; }

// ---- EnvName / Env ----

EnvName EnvName::plain(std::string base) { return {Form::Plain, std::move(base), 0}; }
EnvName EnvName::principal(std::string base) { return {Form::Principal, std::move(base), 0}; }
EnvName EnvName::instance(std::string base, std::uint32_t k) {
  return {Form::Instance, std::move(base), k};
}

std::string EnvName::text() const {
  switch (form) {
    case Form::Plain: return base;
    case Form::Principal: return base + "$0";
    case Form::Instance: return base + "$" + std::to_string(k);
  }
  return base;
}

void Env::bind(EnvName name, Scheme scheme) {
  entries.emplace_back(std::move(name), std::move(scheme));
}

const Scheme* Env::lookup(const EnvName& name) const {
  for (auto it = entries.rbegin(); it != entries.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

bool Env::has_principal(const std::string& base) const {
  return lookup(EnvName::principal(base)) != nullptr;
}

const std::pair<EnvName, Scheme>* Env::lookup_value_name(const std::string& base) const {
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    if (it->first.base != base) continue;
    if (it->first.form == EnvName::Form::Plain || it->first.form == EnvName::Form::Principal)
      return &*it;
  }
  return nullptr;
}

// ---- Subst ----

Subst Subst::single(int var, Type t) {
  Subst s;
  s.map_[var] = std::move(t);
  return s;
}

const Type* Subst::lookup(int var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

void Subst::insert(int var, Type t) { map_[var] = std::move(t); }

Type Subst::operator()(const Type& t) const {
  if (map_.empty()) return t;
  return std::visit(overload{
                        [&](const TCon&) { return t; },
                        [&](const TVar& v) {
                          const Type* m = lookup(v.id);
                          if (!m) return t;
                          if (!((*m)->kind == t->kind))
                            throw internal_error("kind-changing substitution");
                          return *m;
                        },
                        [&](const TApp& a) {
                          Type fn = (*this)(a.fn);
                          Type arg = (*this)(a.arg);
                          if (fn.get() == a.fn.get() && arg.get() == a.arg.get()) return t;
                          return t_app(std::move(fn), std::move(arg));
                        },
                    },
                    t->v);
}

ConstraintSet Subst::operator()(const ConstraintSet& cs) const {
  ConstraintSet out;
  for (const auto& [k, t] : cs.items()) out.add(k, (*this)(t));
  return out;
}

Scheme Subst::operator()(const Scheme& s) const {
  // quantified variables are never mapped; they are fresh by construction
  Subst filtered;
  for (const auto& [v, t] : map_) {
    bool quantified = std::any_of(s.quantified.begin(), s.quantified.end(),
                                  [&](const auto& q) { return q.first == v; });
    if (!quantified) filtered.map_[v] = t;
  }
  return Scheme{s.quantified, filtered(s.constraints), filtered(s.body)};
}

Env Subst::operator()(const Env& e) const {
  if (map_.empty()) return e;
  Env out;
  out.entries.reserve(e.entries.size());
  for (const auto& [n, s] : e.entries) out.entries.emplace_back(n, (*this)(s));
  return out;
}

Subst Subst::compose(const Subst& s2, const Subst& s1) {
  Subst out;
  for (const auto& [v, t] : s1.map_) out.map_[v] = s2(t);
  for (const auto& [v, t] : s2.map_)
    if (!out.map_.count(v)) out.map_[v] = t;
  return out;
}

// ---- ftv ----

void ftv_into(const Type& t, std::set<int>& out) {
  std::visit(overload{
                 [&](const TCon&) {},
                 [&](const TVar& v) { out.insert(v.id); },
                 [&](const TApp& a) {
                   ftv_into(a.fn, out);
                   ftv_into(a.arg, out);
                 },
             },
             t->v);
}

std::set<int> ftv(const Type& t) {
  std::set<int> out;
  ftv_into(t, out);
  return out;
}

std::set<int> ftv(const ConstraintSet& cs) {
  std::set<int> out;
  for (const auto& [k, t] : cs.items()) ftv_into(t, out);
  return out;
}

std::set<int> ftv(const ConstraintSet& cs, const Type& body) {
  std::set<int> out = ftv(cs);
  ftv_into(body, out);
  return out;
}

std::set<int> ftv(const Scheme& s) {
  std::set<int> out = ftv(s.constraints, s.body);
  for (const auto& [id, k] : s.quantified) out.erase(id);
  return out;
}

std::set<int> ftv(const Env& env) {
  std::set<int> out;
  for (const auto& [n, s] : env.entries) {
    std::set<int> f = ftv(s);
    out.insert(f.begin(), f.end());
  }
  return out;
}

// ---- Session ----

Type Session::fresh(Kind k) { return t_var(fresh_id(k), k); }

int Session::fresh_id(Kind k) {
  int id = next_var++;
  var_kinds.emplace(id, k);
  return id;
}

int Session::fresh_occurrence(const std::string& base) {
  int& n = next_occ.try_emplace(base, 0).first->second;
  return ++n;
}

// ---- instantiate / generalize ----

std::pair<ConstraintSet, Type> instantiate(const Scheme& s, Session& session) {
  Subst refresh;
  for (const auto& [id, kind] : s.quantified) refresh.insert(id, session.fresh(kind));
  return {refresh(s.constraints), refresh(s.body)};
}

namespace {
void vars_with_kinds(const Type& t, std::vector<std::pair<int, Kind>>& order,
                     std::set<int>& seen) {
  std::visit(overload{
                 [&](const TCon&) {},
                 [&](const TVar& v) {
                   if (seen.insert(v.id).second) order.emplace_back(v.id, t->kind);
                 },
                 [&](const TApp& a) {
                   vars_with_kinds(a.fn, order, seen);
                   vars_with_kinds(a.arg, order, seen);
                 },
             },
             t->v);
}
}  // namespace

Scheme generalize(const Env& env, const ConstraintSet& cs, const Type& t) {
  std::set<int> env_vars = ftv(env);
  std::vector<std::pair<int, Kind>> order;
  std::set<int> seen;
  for (const auto& [k, ct] : cs.items()) vars_with_kinds(ct, order, seen);
  vars_with_kinds(t, order, seen);
  std::vector<std::pair<int, Kind>> quantified;
  for (const auto& [id, kind] : order)
    if (!env_vars.count(id)) quantified.emplace_back(id, kind);
  return Scheme{std::move(quantified), cs, t};
}

// ---- printing ----

std::string VarNamer::name_of(int id) {
  auto it = names_.find(id);
  if (it != names_.end()) return it->second;
  std::size_t i = names_.size();
  std::string name(1, static_cast<char>('a' + i % 26));
  if (i >= 26) name += std::to_string(i / 26);
  names_[id] = name;
  return name;
}

namespace {

// printing precedence: arrow < postfix < atom
constexpr int TP_ARROW = 0, TP_POST = 1, TP_ATOM = 2;

void print_type_rec(std::ostringstream& out, const Type& t, VarNamer& namer, int min_level);

void print_row_body(std::ostringstream& out, const Type& row, VarNamer& namer) {
  RowFields rf = row_fields(row);
  for (std::size_t i = 0; i < rf.fields.size(); ++i) {
    if (i) out << "; ";
    out << display_base(rf.fields[i].first) << " : ";
    print_type_rec(out, rf.fields[i].second, namer, TP_ARROW);
  }
  if (rf.tail) {
    out << " | ";
    print_type_rec(out, *rf.tail, namer, TP_ATOM);
  }
}

void print_type_rec(std::ostringstream& out, const Type& t, VarNamer& namer, int min_level) {
  Type dom, cod, row, elem;
  if (is_arrow(t, &dom, &cod)) {
    bool parens = TP_ARROW < min_level;
    if (parens) out << "(";
    print_type_rec(out, dom, namer, TP_POST);
    out << " -> ";
    print_type_rec(out, cod, namer, TP_ARROW);
    if (parens) out << ")";
    return;
  }
  if (is_list(t, &elem)) {
    bool parens = TP_POST < min_level;
    if (parens) out << "(";
    print_type_rec(out, elem, namer, TP_POST);
    out << " list";
    if (parens) out << ")";
    return;
  }
  if (is_record(t, &row)) {
    out << "{ ";
    print_row_body(out, row, namer);
    out << " }";
    return;
  }
  if (t->kind.tag() == Kind::Tag::Row && (is_row_ext(t) || is_row_empty(t))) {
    // bare rows only show up in diagnostics
    out << "(|";
    if (!is_row_empty(t)) {
      out << " ";
      print_row_body(out, t, namer);
      out << " ";
    }
    out << "|)";
    return;
  }
  std::visit(overload{
                 [&](const TCon& c) { out << c.name; },
                 [&](const TVar& v) { out << "'" << namer.name_of(v.id); },
                 [&](const TApp& a) {
                   out << "(";
                   print_type_rec(out, a.fn, namer, TP_ATOM);
                   out << " ";
                   print_type_rec(out, a.arg, namer, TP_ATOM);
                   out << ")";
                 },
             },
             t->v);
}

}  // namespace

std::string print_type(const Type& t, VarNamer& namer) {
  std::ostringstream out;
  print_type_rec(out, t, namer, TP_ARROW);
  return out.str();
}

std::string normalize_print(const Type& t) {
  VarNamer namer;
  return print_type(t, namer);
}

std::string normalize_print(const ConstraintSet& cs, const Type& body) {
  VarNamer namer;
  std::ostringstream out;
  if (!cs.empty()) {
    out << "{ ";
    bool first = true;
    for (const auto& [k, t] : cs.items()) {
      if (!first) out << "; ";
      first = false;
      out << k.display() << " : ";
      print_type_rec(out, t, namer, TP_ARROW);
    }
    out << " } => ";
  }
  print_type_rec(out, body, namer, TP_ARROW);
  return out.str();
}

std::string normalize_print(const Scheme& s) { return normalize_print(s.constraints, s.body); }

}  // namespace lwlite
