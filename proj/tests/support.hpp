#ifndef LWLITE_TESTS_SUPPORT_HPP
#define LWLITE_TESTS_SUPPORT_HPP

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "lwlite/types.hpp"

namespace lwlite::testing {

inline std::vector<std::pair<std::string, std::string>> corpus_files() {
  std::vector<std::pair<std::string, std::string>> out;
  namespace fs = std::filesystem;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(LWLITE_CORPUS_DIR))
    if (entry.path().extension() == ".lw") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const fs::path& p : paths) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    out.emplace_back(p.string(), buf.str());
  }
  return out;
}

// Random types for the property tests. Star-kinded by default; records give
// the row machinery coverage.
struct TypeGen {
  std::mt19937 rng;
  Session& session;

  explicit TypeGen(Session& s, unsigned seed = 20240917) : rng(seed), session(s) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Type base() {
    switch (pick(3)) {
      case 0: return t_int();
      case 1: return t_string();
      default: return t_bool();
    }
  }

  Type star(int depth) {
    if (depth <= 0) return pick(3) == 0 ? session.fresh(Kind::star()) : base();
    switch (pick(6)) {
      case 0: return base();
      case 1: return session.fresh(Kind::star());
      case 2: return t_arrow(star(depth - 1), star(depth - 1));
      case 3: return t_list(star(depth - 1));
      case 4: return t_record(row(depth - 1));
      default: return t_arrow(star(depth - 1), star(depth - 1));
    }
  }

  Type row(int depth) {
    static const char* labels[] = {"a", "b", "c", "d", "e"};
    int n = pick(4);
    std::vector<std::pair<std::string, Type>> fields;
    // a random subset of distinct labels
    std::vector<int> idx = {0, 1, 2, 3, 4};
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int i = 0; i < n; ++i)
      fields.emplace_back(labels[idx[i]], star(depth > 0 ? depth - 1 : 0));
    Type tail = pick(3) == 0 ? session.fresh(Kind::row()) : row_empty();
    return row_build(fields, tail);
  }

  // Replaces random subtrees by fresh variables; the map records the known
  // unifier (each introduced variable maps back to the subtree it replaced).
  Type abstract(const Type& t, std::map<int, Type>& known, int rate_percent) {
    if (t->kind.tag() == Kind::Tag::Star && !as_var(t) && pick(100) < rate_percent) {
      Type v = session.fresh(Kind::star());
      known[as_var(v)->id] = t;
      return v;
    }
    if (const TApp* app = as_app(t)) {
      Type fn = abstract(app->fn, known, rate_percent);
      Type arg = abstract(app->arg, known, rate_percent);
      return t_app(fn, arg);
    }
    return t;
  }
};

}  // namespace lwlite::testing

#endif
