#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chrl/ct.hpp"
#include "chrl/term.hpp"

namespace chrl {

// Formulas of first-order intuitionistic linear logic.
class LLFormula {
public:
  enum class Kind {
    Atom,
    One,     // 1
    Zero,    // 0
    Top,     // additive top
    Tensor,  // *
    Lolli,   // -o
    With,    // &
    Plus,    // +
    Bang,    // !
    Forall,
    Exists,
  };

  static LLFormula atom(std::string symbol, std::vector<Term> args);
  static LLFormula one();
  static LLFormula zero();
  static LLFormula top();
  static LLFormula tensor(LLFormula lhs, LLFormula rhs);
  static LLFormula lolli(LLFormula lhs, LLFormula rhs);
  static LLFormula with(LLFormula lhs, LLFormula rhs);
  static LLFormula plus(LLFormula lhs, LLFormula rhs);
  static LLFormula bang(LLFormula body);
  static LLFormula forall(std::string var, LLFormula body);
  static LLFormula exists(std::string var, LLFormula body);

  Kind kind() const { return kind_; }
  const std::string& symbol() const { return symbol_; }  // Atom
  const std::vector<Term>& args() const { return args_; }
  const std::string& var() const { return symbol_; }  // Forall/Exists
  const LLFormula& lhs() const { return *children_[0]; }
  const LLFormula& rhs() const { return *children_[1]; }
  const LLFormula& body() const { return *children_[0]; }

  bool is_binary() const {
    return kind_ == Kind::Tensor || kind_ == Kind::Lolli || kind_ == Kind::With ||
           kind_ == Kind::Plus;
  }
  bool is_quantifier() const {
    return kind_ == Kind::Forall || kind_ == Kind::Exists;
  }

  bool operator==(const LLFormula& other) const;  // structural, names matter
  bool operator!=(const LLFormula& other) const { return !(*this == other); }

private:
  explicit LLFormula(Kind k) : kind_(k) {}
  Kind kind_;
  std::string symbol_;
  std::vector<Term> args_;
  std::vector<std::shared_ptr<const LLFormula>> children_;
};

// Right-associated tensor of the parts; 1 when empty.
LLFormula tensor_all(const std::vector<LLFormula>& parts);
// Right-associated plus of the parts; 0 when empty.
LLFormula plus_all(const std::vector<LLFormula>& parts);

VarSet free_vars(const LLFormula& f);

// Capture-avoiding substitution; bound variables are renamed when needed.
LLFormula subst_formula(const Substitution& s, const LLFormula& f);

bool alpha_equal(const LLFormula& a, const LLFormula& b);

// Splits a right-nested tensor into its leaves (non-tensor formulas);
// a plain formula yields one leaf, 1 yields none.
std::vector<LLFormula> tensor_leaves(const LLFormula& f);

struct Sequent {
  std::vector<LLFormula> antecedent;  // multiset
  LLFormula consequent = LLFormula::one();

  bool operator==(const Sequent& other) const;
};

// Multiset helpers over antecedents (structural equality).
bool multiset_equal(const std::vector<LLFormula>& a, const std::vector<LLFormula>& b);
// b subtracted from a; nullopt when some element of b is missing.
std::optional<std::vector<LLFormula>> multiset_minus(std::vector<LLFormula> a,
                                                     const std::vector<LLFormula>& b);

}  // namespace chrl
