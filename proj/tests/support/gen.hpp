#pragma once

#include <string>
#include <vector>

#include "chrl/rule.hpp"
#include "chrl/state.hpp"
#include "support/rng.hpp"

namespace testsupport {

using namespace chrl;

inline Term random_term(Rng& rng, int depth = 1) {
  static const std::vector<std::string> vars = {"X", "Y", "Z"};
  static const std::vector<std::string> consts = {"a", "b"};
  switch (rng.below(depth > 0 ? 4 : 3)) {
    case 0:
    case 1:
      return Term::var(vars[rng.below(vars.size())]);
    case 2:
      return Term::constant(consts[rng.below(consts.size())]);
    default:
      return Term::compound("f", {random_term(rng, depth - 1)});
  }
}

inline Atom random_user_atom(Rng& rng) {
  if (rng.chance(0.5)) return Atom{"c", {random_term(rng)}};
  return Atom{"d", {random_term(rng), random_term(rng)}};
}

// A small flat state with at most `max_atoms` atoms.
inline NormalState random_state(Rng& rng, size_t max_atoms = 3) {
  NormalState s;
  size_t n = 1 + rng.below(max_atoms);
  for (size_t i = 0; i < n; ++i) {
    if (rng.chance(0.6))
      s.user.push_back(random_user_atom(rng));
    else
      s.builtin.push_back(make_eq(random_term(rng), random_term(rng)));
  }
  for (const std::string& v : s.vars())
    if (rng.chance(0.5)) s.globals.insert(v);
  return s;
}

// Applies one equivalence-preserving move; returns false when no move fit.
inline bool perturb_once(Rng& rng, NormalState& s) {
  switch (rng.below(5)) {
    case 0: {  // substitute a variable equation into the user store
      for (const Atom& e : s.builtin) {
        if (e.symbol != kEqSymbol) continue;
        const Term* var = nullptr;
        const Term* val = nullptr;
        if (e.args[0].is_var()) {
          var = &e.args[0];
          val = &e.args[1];
        } else if (e.args[1].is_var()) {
          var = &e.args[1];
          val = &e.args[0];
        }
        if (!var || vars_of(*val).count(var->name())) continue;
        Substitution sub;
        sub.insert_raw(var->name(), *val);
        s.user = apply_subst(sub, s.user);
        return true;
      }
      return false;
    }
    case 1: {  // add an entailed fresh-variable equation
      VarSet used = s.vars();
      std::string fresh;
      for (char c = 'P'; c <= 'W'; ++c)
        if (!used.count(std::string(1, c))) {
          fresh = std::string(1, c);
          break;
        }
      if (fresh.empty() || s.user.empty()) return false;
      const Atom& a = s.user[rng.below(s.user.size())];
      if (a.args.empty()) return false;
      s.builtin.push_back(make_eq(Term::var(fresh), a.args[0]));
      return true;
    }
    case 2: {  // toggle a redundant global
      VarSet used = s.vars();
      for (const std::string& g : s.globals)
        if (!used.count(g)) {
          s.globals.erase(g);
          return true;
        }
      for (char c = 'P'; c <= 'W'; ++c) {
        std::string v(1, c);
        if (!used.count(v) && !s.globals.count(v)) {
          s.globals.insert(v);
          return true;
        }
      }
      return false;
    }
    case 3: {  // rotate atom order
      if (s.user.size() > 1)
        std::rotate(s.user.begin(), s.user.begin() + 1, s.user.end());
      else if (s.builtin.size() > 1)
        std::rotate(s.builtin.begin(), s.builtin.begin() + 1, s.builtin.end());
      return true;
    }
    default: {  // rename one local variable
      VarSet loc = s.locals();
      if (loc.empty()) return false;
      std::string pick;
      size_t k = rng.below(loc.size());
      for (const std::string& v : loc)
        if (k-- == 0) {
          pick = v;
          break;
        }
      VarSet used = s.vars();
      for (const std::string& g : s.globals) used.insert(g);
      for (char c = 'P'; c <= 'W'; ++c) {
        std::string v(1, c);
        if (!used.count(v)) {
          Substitution sub;
          sub.insert_raw(pick, Term::var(v));
          s.user = apply_subst(sub, s.user);
          s.builtin = apply_subst(sub, s.builtin);
          return true;
        }
      }
      return false;
    }
  }
}

}  // namespace testsupport
