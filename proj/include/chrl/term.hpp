#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace chrl {

// First-order terms. A term is either a variable or a compound; constants are
// zero-arity compounds and integer literals are constants whose functor is the
// decimal text. Terms are immutable values.
class Term {
public:
  enum class Kind { Var, Compound };

  static Term var(std::string name);
  static Term compound(std::string functor, std::vector<Term> args);
  static Term constant(std::string name) { return compound(std::move(name), {}); }
  static Term integer(long long value);

  Kind kind() const { return kind_; }
  bool is_var() const { return kind_ == Kind::Var; }
  bool is_compound() const { return kind_ == Kind::Compound; }
  bool is_constant() const { return kind_ == Kind::Compound && args_.empty(); }
  bool is_int() const;
  long long int_value() const;

  // Variable name or functor.
  const std::string& name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }
  size_t arity() const { return args_.size(); }

  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }
  bool operator<(const Term& other) const { return compare(*this, other) < 0; }

  // Total structural order: Var < Compound; vars by name; compounds by
  // (functor, arity, args lexicographically).
  static int compare(const Term& a, const Term& b);

private:
  Term(Kind kind, std::string name, std::vector<Term> args)
      : kind_(kind), name_(std::move(name)), args_(std::move(args)) {}

  Kind kind_;
  std::string name_;
  std::vector<Term> args_;
};

using VarSet = std::set<std::string>;

// A finite map from variables to terms, applied simultaneously (single pass).
// Results of unification and solving are kept idempotent: domain variables do
// not occur in range terms. Matching results need not be.
class Substitution {
public:
  Substitution() = default;

  bool empty() const { return map_.empty(); }
  size_t size() const { return map_.size(); }
  const std::map<std::string, Term>& map() const { return map_; }

  const Term* lookup(const std::string& var) const;

  // Composes {var := term} into the substitution, keeping it idempotent.
  // Returns false on occurs-check failure; the substitution is unchanged then.
  bool bind(const std::string& var, const Term& term);

  // Raw insert without composition; used by one-sided matching where the
  // simultaneous-application semantics is wanted. Fails on conflicting binding.
  bool insert_raw(const std::string& var, const Term& term);

  Term apply(const Term& term) const;
  std::vector<Term> apply(const std::vector<Term>& terms) const;

  bool is_idempotent() const;
  void erase(const std::string& var) { map_.erase(var); }

private:
  std::map<std::string, Term> map_;
};

Term apply_subst(const Substitution& subst, const Term& term);

void collect_vars(const Term& term, VarSet& out);
VarSet vars_of(const Term& term);
VarSet vars_of(const std::vector<Term>& terms);

// One-sided matching: binds pattern variables only; target variables are
// rigid. Nonlinear patterns require consistent bindings.
std::optional<Substitution> match_one_sided(const Term& pattern, const Term& target);
std::optional<Substitution> match_terms(const std::vector<Term>& patterns,
                                        const std::vector<Term>& targets);

// Most general unifier with occurs-check.
std::optional<Substitution> unify(const Term& a, const Term& b);
std::optional<Substitution> unify_lists(const std::vector<Term>& as,
                                        const std::vector<Term>& bs);

// Unification restricted to a set of bindable variables; all other variables
// behave as constants. `seed` bindings are extended.
std::optional<Substitution> unify_restricted(const std::vector<Term>& as,
                                             const std::vector<Term>& bs,
                                             const VarSet& bindable,
                                             Substitution seed);

// Fresh-name facility: a process-global monotone counter with the reserved
// prefix "_V". User programs may not use the prefix; parsers that do accept
// it (state strings echoed back in) bump the counter past any parsed index.
std::string fresh_var_name();
void seed_fresh_counter(uint64_t base);
uint64_t fresh_counter_value();
bool is_reserved_var_name(const std::string& name);
void note_parsed_var_name(const std::string& name);

// A renaming that maps every variable in `rename` to a globally fresh one.
Substitution make_fresh_renaming(const VarSet& rename);

}  // namespace chrl
