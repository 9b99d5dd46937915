#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "chrl/ll.hpp"
#include "chrl/rule.hpp"
#include "chrl/state.hpp"

namespace chrl {

class ModeError : public std::runtime_error {
public:
  explicit ModeError(const std::string& what) : std::runtime_error(what) {}
};

// Formulas of intuitionistic first-order logic over constraint atoms; the
// domain of the Negri embedding and the classical reading.
class IFormula {
public:
  enum class Kind { Atom, Top, Bot, And, Or, Imp, Iff, Forall, Exists };

  static IFormula atom(Atom a);
  static IFormula top();
  static IFormula bot();
  static IFormula conj(IFormula lhs, IFormula rhs);
  static IFormula disj(IFormula lhs, IFormula rhs);
  static IFormula imp(IFormula lhs, IFormula rhs);
  static IFormula iff(IFormula lhs, IFormula rhs);
  static IFormula forall(std::string var, IFormula body);
  static IFormula exists(std::string var, IFormula body);

  Kind kind() const { return kind_; }
  const Atom& atom_value() const { return atom_; }
  const std::string& var() const { return var_; }
  const IFormula& lhs() const { return *children_[0]; }
  const IFormula& rhs() const { return *children_[1]; }
  const IFormula& body() const { return *children_[0]; }

private:
  explicit IFormula(Kind k) : kind_(k) {}
  Kind kind_;
  Atom atom_{};
  std::string var_;
  std::vector<std::shared_ptr<const IFormula>> children_;
};

std::string print_iformula(const IFormula& f);

// First-occurrence variable orders, used for quantifier prefixes.
std::vector<std::string> ordered_vars(const Store& b);
std::vector<std::string> ordered_vars(const Goal& g);

LLFormula exists_close(const std::vector<std::string>& vars, LLFormula body);

// Tensor of parts with unit parts dropped; 1 when nothing remains.
LLFormula smart_tensor(const std::vector<LLFormula>& parts);

LLFormula translate_atom(const Atom& a, bool builtin);
LLFormula translate_goal(const Goal& g);
LLFormula translate_user_store(const Store& u);
LLFormula translate_builtin_store(const Store& b);

LLFormula translate_state(const State& s);
LLFormula translate_state(const NormalState& n);
LLFormula translate_config(const Configuration& c);
LLFormula translate_config(const NormalConfig& c);

// The Negri embedding of intuitionistic logic into ILL.
LLFormula negri_star(const IFormula& f);

// forall(exists xs. lhs -> exists xs'. rhs) as a formula.
IFormula ct_axiom_formula(const CTAxiom& ax);

IFormula classical_reading(const State& s);
IFormula classical_reading(const NormalState& n);
IFormula classical_reading(const Rule& r);
IFormula classical_reading(const Program& p);

// Encoding semantics: CT^L (Negri reading of the axioms plus the equality
// rewrite formulas over the user signature) and R^L / P^L.
std::vector<LLFormula> encode_ct(const CTheory& ct,
                                 const std::vector<std::pair<std::string, int>>& signature);
LLFormula encode_rule(const Rule& r);
std::vector<LLFormula> encode_program(const Program& p);

// The proper-axiom schema instance for a rule variant:
// H1^L * H2^L * G^L |- H1^L * exists y_r. (B^L * G^L).
Sequent sigma_p_schema(const Rule& variant);

// Inverse view of a built-in reading: optional exists-prefix over a tensor of
// banged atoms / 0 / 1. Returns prefix variables and the store.
struct BuiltinReading {
  std::vector<std::string> exvars;
  Store store;
};
std::optional<BuiltinReading> builtin_reading(const LLFormula& f);

}  // namespace chrl
