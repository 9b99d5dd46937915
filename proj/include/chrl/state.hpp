#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chrl/ct.hpp"
#include "chrl/term.hpp"

namespace chrl {

// Goal trees: conjunction/disjunction over atomic constraints, with the empty
// goal as unit. Atoms carry their built-in/user classification.
class Goal {
public:
  enum class Kind { Top, Atom, And, Or };

  static Goal top();
  static Goal user_atom(Atom a);
  static Goal builtin_atom(Atom a);
  static Goal conj(Goal lhs, Goal rhs);
  static Goal disj(Goal lhs, Goal rhs);
  static Goal conj_all(const std::vector<Goal>& gs);

  Kind kind() const { return kind_; }
  bool is_atom() const { return kind_ == Kind::Atom; }
  bool is_builtin() const { return builtin_; }
  const Atom& atom() const { return atom_; }
  const Goal& lhs() const { return *children_[0]; }
  const Goal& rhs() const { return *children_[1]; }

  bool has_or() const;
  bool operator==(const Goal& other) const;

private:
  Goal() : kind_(Kind::Top) {}
  Kind kind_;
  Atom atom_{};
  bool builtin_ = false;
  std::vector<std::shared_ptr<const Goal>> children_;
};

VarSet vars_of(const Goal& g);
Goal apply_subst(const Substitution& s, const Goal& g);

// Flat goal split into user and built-in parts, in goal order.
struct SplitGoal {
  Store user;
  Store builtin;
};
// Fails when the goal contains a disjunction.
std::optional<SplitGoal> split_flat(const Goal& g);
Goal goal_of_split(const Store& user, const Store& builtin);

// A CHR state <G ; V>.
struct State {
  Goal goal = Goal::top();
  VarSet globals;
};

// Ternary normal form <U ; B ; V>. The canonical failed state is
// <true ; false ; {}>.
struct NormalState {
  Store user;
  Store builtin;
  VarSet globals;

  bool failed() const;
  State to_state() const;
  VarSet vars() const;
  VarSet locals() const;
  VarSet strictly_locals() const;
};

NormalState failed_state();
NormalState apply_subst(const Substitution& s, const NormalState& n);

// Disjunction of states; the empty list is the empty configuration.
struct Configuration {
  std::vector<State> members;
};

struct NormalConfig {
  std::vector<NormalState> members;

  bool empty() const { return members.empty(); }
  Configuration to_config() const;
};

struct StateOpts {
  size_t dnf_cap = 4096;
  size_t match_budget = 10000;
};

// Disjunctive normal form: Or-free goals whose disjunction is goal-equivalent
// to g, distributing left to right. Throws BudgetError(Dnf) past the cap.
std::vector<Goal> dnf(const Goal& g, const StateOpts& opts = {});

// Normal form per the state equivalence axioms: built-ins solved, bindings
// applied, redundant globals dropped, strictly-local solved equations gone.
NormalState normalize_state(const State& s, const CTheory& ct);
NormalState normalize_state(const NormalState& s, const CTheory& ct);

// Renames all local variables to globally fresh ones.
NormalState rename_locals_fresh(const NormalState& n, Substitution* renaming = nullptr);

// All permutations matching the two user stores symbol-wise, paired with the
// argument equations they induce. Empty when the sizes differ.
struct StoreMatching {
  std::vector<size_t> perm;  // u1[i] matched with u2[perm[i]]
  Store equations;
};
std::vector<StoreMatching> match_userstores(const Store& u1, const Store& u2,
                                            const StateOpts& opts = {});

bool state_equiv(const State& s1, const State& s2, const CTheory& ct,
                 const StateOpts& opts = {});
bool state_equiv(const NormalState& n1, const NormalState& n2, const CTheory& ct,
                 const StateOpts& opts = {});

bool state_entails(const State& s1, const State& s2, const CTheory& ct,
                   const StateOpts& opts = {});
bool state_entails(const NormalState& n1, const NormalState& n2, const CTheory& ct,
                   const StateOpts& opts = {});

// Merging: locals renamed apart, globals unified, stores conjoined.
NormalState merge(const NormalState& s1, const NormalState& s2);

NormalConfig config_normalize(const Configuration& c, const CTheory& ct,
                              const StateOpts& opts = {});
NormalConfig config_normalize(const NormalConfig& c, const CTheory& ct,
                              const StateOpts& opts = {});

bool config_equiv(const Configuration& c1, const Configuration& c2,
                  const CTheory& ct, const StateOpts& opts = {});
bool config_equiv(const NormalConfig& c1, const NormalConfig& c2,
                  const CTheory& ct, const StateOpts& opts = {});

bool config_entails(const Configuration& c1, const Configuration& c2,
                    const CTheory& ct, const StateOpts& opts = {});
bool config_entails(const NormalConfig& c1, const NormalConfig& c2,
                    const CTheory& ct, const StateOpts& opts = {});

bool is_compact(const Configuration& c, const CTheory& ct,
                const StateOpts& opts = {});
bool is_compact(const NormalConfig& c, const CTheory& ct,
                const StateOpts& opts = {});

// Canonical key for visited sets: atoms sorted, variables renamed in first
// occurrence order; ties among atoms equal up to variables are broken by
// trying their permutations (capped) and keeping the smallest rendering.
std::string canonical_key(const NormalState& n);
std::string canonical_key(const NormalConfig& c);

}  // namespace chrl
