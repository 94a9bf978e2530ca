#ifndef LWLITE_EVAL_HPP
#define LWLITE_EVAL_HPP

#include <functional>
#include <memory>

#include "lwlite/core.hpp"

namespace lwlite {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct ValueEnvNode;
using ValueEnv = std::shared_ptr<const ValueEnvNode>;

struct VInt {
  long long value;
};
struct VStr {
  std::string value;
};
struct VBool {
  bool value;
};
struct VList {
  std::vector<ValuePtr> elems;
};
struct VRecord {
  std::vector<std::pair<std::string, ValuePtr>> fields;  // duplicates kept in order
};
struct VClosure {
  std::string param;
  CoreExpr body;
  ValueEnv env;
};
struct VBuiltin {
  std::string name;
  int arity;
  std::vector<ValuePtr> partial;
};

struct Value {
  std::variant<VInt, VStr, VBool, VList, VRecord, VClosure, VBuiltin> v;
};

struct ValueEnvNode {
  std::string name;
  // indirection cell so letrec can close over itself
  std::shared_ptr<ValuePtr> slot;
  ValueEnv parent;
};

ValueEnv env_bind(ValueEnv parent, std::string name, ValuePtr value);
const ValuePtr* env_lookup(const ValueEnv& env, const std::string& name);

ValuePtr eval(const ValueEnv& env, const CoreExpr& e);
ValuePtr apply_value(const ValuePtr& fn, const ValuePtr& arg);

// Value environment with every evaluator builtin; shared by the drivers.
ValueEnv builtin_values();

// Printed-value grammar; closures and builtins are not printable.
bool value_printable(const ValuePtr& v);
std::string print_value(const ValuePtr& v);

}  // namespace lwlite

#endif
