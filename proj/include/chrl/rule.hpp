#pragma once

#include <map>
#include <string>
#include <vector>

#include "chrl/state.hpp"

namespace chrl {

// A simpagation-form rule  id @ kept \ removed <=> guard | body.
// Simplification and propagation rules have an empty kept or removed head.
struct Rule {
  std::string id;
  Store kept;
  Store removed;
  Store guard;
  Goal body = Goal::top();

  VarSet head_vars() const;
  // vars(body, guard) \ vars(heads)
  VarSet local_vars() const;
  VarSet all_vars() const;
};

Rule apply_subst(const Substitution& s, const Rule& r);

enum class Mode { Pure, Vee };

struct Program {
  std::vector<Rule> rules;
  Mode mode = Mode::Pure;
  bool confluent = false;

  const Rule* find_rule(const std::string& id) const;
  // All user constraint symbols with arities occurring in heads and bodies.
  std::vector<std::pair<std::string, int>> user_signature() const;
};

// A parsed .chr file: program, theory, and named query states.
struct ProgramFile {
  Program program;
  CTheory ct;
  std::vector<std::pair<std::string, State>> queries;

  const State* find_query(const std::string& name) const;
};

}  // namespace chrl
