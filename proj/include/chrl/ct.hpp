#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chrl/term.hpp"

namespace chrl {

// An atomic constraint: a predicate symbol applied to terms. Whether an atom
// is built-in or user-defined is decided by the theory's symbol registry.
struct Atom {
  std::string symbol;
  std::vector<Term> args;

  bool operator==(const Atom& other) const {
    return symbol == other.symbol && args == other.args;
  }
  bool operator!=(const Atom& other) const { return !(*this == other); }
  bool operator<(const Atom& other) const;
  size_t arity() const { return args.size(); }
};

// Conjunction of atoms; the empty store is the empty constraint.
using Store = std::vector<Atom>;

Atom apply_subst(const Substitution& s, const Atom& a);
Store apply_subst(const Substitution& s, const Store& b);
VarSet vars_of(const Atom& a);
VarSet vars_of(const Store& b);

inline const char* kEqSymbol = "=";
inline const char* kFalseSymbol = "false";

Atom make_eq(Term lhs, Term rhs);
Atom make_false();

// A CT-axiom: forall(exists xs. lhs -> exists xs'. rhs).
struct CTAxiom {
  VarSet exvars_lhs;
  Store lhs;
  VarSet exvars_rhs;
  Store rhs;
};

// The decidable built-in theory: Herbrand equality with falsity, ground
// integer arithmetic, and bounded forward chaining of user axioms.
struct CTheory {
  std::vector<CTAxiom> axioms;
  bool arithmetic_enabled = true;
  int saturation_depth = 8;
  // Extra built-in predicate symbols declared by the program, as (name, arity).
  std::vector<std::pair<std::string, int>> declared_builtins;

  bool is_builtin(const std::string& symbol, size_t arity) const;
};

bool is_arith_comparison(const std::string& symbol);

struct SolvedForm {
  Substitution bindings;
  Store residue;  // no equality atoms; bindings applied; duplicates removed
  bool inconsistent = false;
};

class BudgetError : public std::runtime_error {
public:
  enum class Kind { Saturation, Match, Dnf, Nodes };
  BudgetError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

// Folds ground integer arithmetic (+, -, mod) inside a term to constants.
Term fold_arith(const Term& t, const CTheory& ct);
Atom fold_arith(const Atom& a, const CTheory& ct);

SolvedForm solve(const Store& b, const CTheory& ct);
bool satisfiable(const Store& b, const CTheory& ct);

// CT |= forall(b -> exists exvars. b2); exvars must not occur in b. Returns
// the witness instantiation of exvars when the judgement holds.
std::optional<Substitution> entails_witness(const Store& b, const VarSet& exvars,
                                            const Store& b2, const CTheory& ct);
bool entails(const Store& b, const VarSet& exvars, const Store& b2,
             const CTheory& ct);

// Replaces exvars left unconstrained by a witness with fresh rigid constants,
// and resolves chains so that no exvar remains in any range term.
Substitution finalize_witness(const Substitution& theta, const VarSet& exvars);

std::string fresh_skolem_name();

}  // namespace chrl
