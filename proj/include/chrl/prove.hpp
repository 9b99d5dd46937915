#pragma once

#include <optional>

#include "chrl/proof.hpp"

namespace chrl {

struct ProveBudget {
  size_t nodes = 20000;
  size_t max_depth = 40;
  // Cap on copies of one formula in an antecedent, bounding contraction.
  size_t contraction_cap = 3;
};

// Bounded exhaustive backward proof search, cut-reduced: Cut is used only
// against proper-axiom leaves (through retensoring bridges). A result always
// passes check_proof; nullopt is not a non-provability claim.
std::optional<ProofTree> bounded_prove(const Sequent& goal,
                                       const ProperAxiomSet& axioms,
                                       const ProveBudget& budget = {});

}  // namespace chrl
