#pragma once

#include <stdexcept>

#include "chrl/engine.hpp"
#include "chrl/proof.hpp"

namespace chrl {

class CertificationError : public std::runtime_error {
public:
  explicit CertificationError(const std::string& what)
      : std::runtime_error(what) {}
};

// A checkable sequent proof of s1^L |- s2^L from the Sigma-CT and Sigma-=
// axioms; requires state_entails(s1, s2).
ProofTree certify_entailment(const State& s1, const State& s2, const CTheory& ct,
                             const StateOpts& opts = {});
ProofTree certify_entailment(const NormalState& s1, const NormalState& s2,
                             const CTheory& ct, const StateOpts& opts = {});

// A checkable proof of c1^L |- c2^L (member-wise entailment into c2).
ProofTree certify_config_entailment(const NormalConfig& c1, const NormalConfig& c2,
                                    const CTheory& ct, const StateOpts& opts = {});

// A checkable proof of initial^L |- final^L for a replayable derivation, with
// one Sigma-P leaf per rule step.
ProofTree certify_derivation(const Derivation& d, const Program& p,
                             const CTheory& ct, const Limits& limits = {});

}  // namespace chrl
