#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chrl/rule.hpp"
#include "chrl/state.hpp"

namespace chrl {

struct Limits {
  size_t depth = 6;
  size_t nodes = 10000;
  StateOpts state;
  bool history = true;  // propagation history for rules with empty removed head
};

// A rule applicable to one member state of a configuration: the fresh rule
// variant, the matched store positions (kept head first), the induced
// argument equations (store argument on the left), and the witness for the
// variant's variables from the guard entailment.
struct RuleInstance {
  size_t member = 0;
  std::string rule_id;
  Rule variant;
  std::vector<size_t> matched;
  Store equations;
  Substitution witness;
};

std::vector<RuleInstance> applicable(const NormalConfig& c, const Program& p,
                                     const CTheory& ct, const Limits& limits = {});

struct ApplyResult {
  NormalConfig post;
  size_t replaced_member = 0;   // index of the member the rule fired on
  size_t inserted_count = 0;    // how many members replaced it
  // For each inserted member, per user atom: source position in the fired
  // member's user store, or -1 for an atom introduced by the body.
  std::vector<std::vector<int>> member_sources;
};

ApplyResult apply_instance(const NormalConfig& c, const RuleInstance& inst,
                           const CTheory& ct, const Limits& limits = {});

struct Step {
  std::string rule_id;
  NormalConfig pre;
  NormalConfig post;
};

struct Derivation {
  NormalConfig initial;
  std::vector<Step> steps;

  const NormalConfig& final() const {
    return steps.empty() ? initial : steps.back().post;
  }
};

// Finds an instance of the named rule on `pre` whose application is
// configuration-equivalent to `post`.
std::optional<RuleInstance> find_step_instance(const NormalConfig& pre,
                                               const std::string& rule_id,
                                               const NormalConfig& post,
                                               const Program& p, const CTheory& ct,
                                               const Limits& limits = {});

bool replay(const Derivation& d, const Program& p, const CTheory& ct,
            const Limits& limits = {});

// Exhaustive exploration of the class graph up to the limits.
struct ClassNode {
  NormalConfig config;
  size_t depth = 0;
  std::optional<size_t> parent;
  std::string via_rule;     // rule that led here from the parent
  bool expanded = false;    // instances were all applied
  bool has_instances = false;
};

struct ExploreResult {
  std::vector<ClassNode> nodes;  // node 0 is the initial class
  bool complete = true;

  Derivation derivation_to(size_t node) const;
};

ExploreResult explore(const State& initial, const Program& p, const CTheory& ct,
                      const Limits& limits = {});

enum class ObsKind { C, A, S };

struct Observables {
  std::vector<NormalConfig> classes;
  bool complete = true;
};

Observables observables(const State& initial, const Program& p, const CTheory& ct,
                        ObsKind kind, const Limits& limits = {});

// Committed-choice run: deterministically applies the first instance in rule
// order until no rule applies or the depth limit is reached.
struct RunResult {
  Derivation derivation;
  bool limit_hit = false;
};

RunResult run_committed(const State& initial, const Program& p, const CTheory& ct,
                        const Limits& limits = {});

// Line-oriented trace: STEP lines over configuration hashes plus a sidecar of
// canonical configuration texts.
std::string serialize_trace(const Derivation& d);
Derivation parse_trace(const std::string& text, const CTheory& ct);

}  // namespace chrl
