#include "chrl/rule.hpp"

#include <algorithm>
#include <functional>

namespace chrl {

VarSet Rule::head_vars() const {
  VarSet out = vars_of(kept);
  for (const std::string& v : vars_of(removed)) out.insert(v);
  return out;
}

VarSet Rule::local_vars() const {
  VarSet heads = head_vars();
  VarSet out;
  for (const std::string& v : vars_of(guard))
    if (!heads.count(v)) out.insert(v);
  for (const std::string& v : vars_of(body))
    if (!heads.count(v)) out.insert(v);
  return out;
}

VarSet Rule::all_vars() const {
  VarSet out = head_vars();
  for (const std::string& v : vars_of(guard)) out.insert(v);
  for (const std::string& v : vars_of(body)) out.insert(v);
  return out;
}

Rule apply_subst(const Substitution& s, const Rule& r) {
  return Rule{r.id, apply_subst(s, r.kept), apply_subst(s, r.removed),
              apply_subst(s, r.guard), apply_subst(s, r.body)};
}

const Rule* Program::find_rule(const std::string& id) const {
  for (const Rule& r : rules)
    if (r.id == id) return &r;
  return nullptr;
}

std::vector<std::pair<std::string, int>> Program::user_signature() const {
  std::vector<std::pair<std::string, int>> out;
  auto add = [&](const Atom& a) {
    std::pair<std::string, int> key{a.symbol, static_cast<int>(a.args.size())};
    if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
  };
  std::function<void(const Goal&)> walk_goal = [&](const Goal& g) {
    switch (g.kind()) {
      case Goal::Kind::Atom:
        if (!g.is_builtin()) add(g.atom());
        return;
      case Goal::Kind::And:
      case Goal::Kind::Or:
        walk_goal(g.lhs());
        walk_goal(g.rhs());
        return;
      default:
        return;
    }
  };
  for (const Rule& r : rules) {
    for (const Atom& a : r.kept) add(a);
    for (const Atom& a : r.removed) add(a);
    walk_goal(r.body);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const State* ProgramFile::find_query(const std::string& name) const {
  for (const auto& [n, s] : queries)
    if (n == name) return &s;
  return nullptr;
}

}  // namespace chrl
