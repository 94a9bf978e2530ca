#ifndef LWLITE_TYPES_HPP
#define LWLITE_TYPES_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "lwlite/diag.hpp"

namespace lwlite {

// ---- kinds ----

class Kind {
 public:
  enum class Tag { Star, Row, Arrow };

  static Kind star();
  static Kind row();
  static Kind arrow(Kind domain, Kind codomain);

  Tag tag() const { return node_->tag; }
  Kind domain() const;
  Kind codomain() const;

  bool operator==(const Kind& other) const;
  bool operator!=(const Kind& other) const { return !(*this == other); }

  std::string str() const;

 private:
  struct Node {
    Tag tag;
    std::shared_ptr<const Node> a, b;
  };
  explicit Kind(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  static bool node_equal(const Node& x, const Node& y);
  friend class KindHelper;
};

// ---- types ----

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TCon {
  std::string name;
};
struct TVar {
  int id;
};
struct TApp {
  Type fn;
  Type arg;
};

struct TypeNode {
  std::variant<TCon, TVar, TApp> v;
  Kind kind;
};

Type t_con(const std::string& name, Kind k);
Type t_var(int id, Kind k);
// Checks kind(fn) = k1 -> k2 and kind(arg) = k1; throws internal_error otherwise.
Type t_app(Type fn, Type arg);

const TCon* as_con(const Type& t);
const TVar* as_var(const Type& t);
const TApp* as_app(const Type& t);

// builtin constructors
Type t_int();
Type t_string();
Type t_bool();
Type t_list_con();        // list :: * -> *
Type t_arrow_con();       // (->) :: * -> * -> *
Type t_record_con();      // record :: row -> *
Type row_empty();         // empty row
Type ext_con(const std::string& label);  // ext_l :: * -> row -> row

Type t_list(Type elem);
Type t_arrow(Type dom, Type cod);
Type t_record(Type row);
Type row_ext(const std::string& label, Type field, Type tail);

bool is_arrow(const Type& t, Type* dom = nullptr, Type* cod = nullptr);
bool is_record(const Type& t, Type* row = nullptr);
bool is_row_ext(const Type& t, std::string* label = nullptr, Type* field = nullptr,
                Type* tail = nullptr);
bool is_row_empty(const Type& t);
bool is_list(const Type& t, Type* elem = nullptr);

bool type_equal(const Type& a, const Type& b);

// Walks a row: concrete (label, type) fields in order plus the tail
// (a row variable) if the row is open.
struct RowFields {
  std::vector<std::pair<std::string, Type>> fields;
  std::optional<Type> tail;  // row variable when open
};
RowFields row_fields(const Type& row);
Type row_build(const std::vector<std::pair<std::string, Type>>& fields, Type tail);

// ---- constraint keys and sets ----

struct ConstraintKey {
  enum class Form { Overloaded, Implicit };
  Form form = Form::Overloaded;
  std::string base;
  int occurrence = 0;  // >= 1 for Overloaded, unused for Implicit

  static ConstraintKey overloaded(std::string base, int occurrence);
  static ConstraintKey implicit(std::string base);

  std::string text() const;     // add%3 / ?add — the core variable name
  std::string display() const;  // add / ?add, operators parenthesized

  bool operator==(const ConstraintKey& o) const {
    return form == o.form && base == o.base && (form == Form::Implicit || occurrence == o.occurrence);
  }
  // canonical order: base, then overloaded-before-implicit, then occurrence
  bool operator<(const ConstraintKey& o) const;
};

class ConstraintSet {
 public:
  ConstraintSet() = default;

  // Inserts a fresh entry; the key must not already be present.
  void add(ConstraintKey key, Type type);
  bool contains(const ConstraintKey& key) const;
  const Type* find(const ConstraintKey& key) const;
  void set_type(const ConstraintKey& key, Type type);
  void remove(const ConstraintKey& key);
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }

  // canonically sorted
  const std::vector<std::pair<ConstraintKey, Type>>& items() const { return items_; }

 private:
  std::vector<std::pair<ConstraintKey, Type>> items_;
};

// ---- schemes ----

struct Scheme {
  std::vector<std::pair<int, Kind>> quantified;
  ConstraintSet constraints;
  Type body;
};

Scheme mono_scheme(Type t);  // forall (). {} => t

// ---- environment names ----

struct EnvName {
  enum class Form { Plain, Principal, Instance };
  Form form = Form::Plain;
  std::string base;
  std::uint32_t k = 0;  // instance suffix, >= 1

  static EnvName plain(std::string base);
  static EnvName principal(std::string base);
  static EnvName instance(std::string base, std::uint32_t k);

  std::string text() const;  // add / add$0 / add$37
  bool operator==(const EnvName& o) const {
    return form == o.form && base == o.base && (form != Form::Instance || k == o.k);
  }
};

struct Env {
  // outermost first; lookup scans from the back
  std::vector<std::pair<EnvName, Scheme>> entries;

  void bind(EnvName name, Scheme scheme);
  const Scheme* lookup(const EnvName& name) const;
  bool has_principal(const std::string& base) const;

  // Innermost entry that is either Plain(base) or Principal(base); used to
  // decide between the plain-variable and overloaded-variable rules.
  const std::pair<EnvName, Scheme>* lookup_value_name(const std::string& base) const;
};

// ---- substitutions ----

class Subst {
 public:
  Subst() = default;
  static Subst single(int var, Type t);

  bool empty() const { return map_.empty(); }
  const Type* lookup(int var) const;
  const std::map<int, Type>& mappings() const { return map_; }
  void insert(int var, Type t);

  Type operator()(const Type& t) const;
  ConstraintSet operator()(const ConstraintSet& cs) const;
  Scheme operator()(const Scheme& s) const;
  Env operator()(const Env& e) const;

  // compose(s2, s1) applies s1 first: result(t) = s2(s1(t))
  static Subst compose(const Subst& s2, const Subst& s1);

 private:
  std::map<int, Type> map_;
};

// ---- free type variables ----

void ftv_into(const Type& t, std::set<int>& out);
std::set<int> ftv(const Type& t);
std::set<int> ftv(const ConstraintSet& cs);
std::set<int> ftv(const Scheme& s);
std::set<int> ftv(const Env& env);
std::set<int> ftv(const ConstraintSet& cs, const Type& body);  // constrained type

// ---- fresh-variable session ----

struct Session {
  int next_var = 0;
  std::map<std::string, int> next_occ;
  std::map<int, Kind> var_kinds;

  Type fresh(Kind k);
  int fresh_id(Kind k);
  int fresh_occurrence(const std::string& base);
};

// ---- instantiate / generalize ----

// Quantified variables replaced by fresh ones (same kind) in both the
// constraint set and the body; keys are left untouched.
std::pair<ConstraintSet, Type> instantiate(const Scheme& s, Session& session);

Scheme generalize(const Env& env, const ConstraintSet& cs, const Type& t);

// ---- canonical printing ----

std::string normalize_print(const Type& t);
std::string normalize_print(const ConstraintSet& cs, const Type& body);
std::string normalize_print(const Scheme& s);

// Prints a single type reusing/extending an existing first-occurrence
// renaming; used so related diagnostics share variable names.
class VarNamer {
 public:
  std::string name_of(int id);

 private:
  std::map<int, std::string> names_;
};
std::string print_type(const Type& t, VarNamer& namer);

std::string display_base(const std::string& base);  // operators parenthesized

}  // namespace lwlite

#endif
