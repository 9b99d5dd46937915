#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chrl/ll.hpp"
#include "chrl/rule.hpp"
#include "chrl/translate.hpp"

namespace chrl {

// Canonical inference rule names used in proof files.
namespace rulename {
inline const char* kIdentity = "identity";
inline const char* kCut = "cut";
inline const char* kLTensor = "l-tensor";
inline const char* kRTensor = "r-tensor";
inline const char* kLOne = "l-one";
inline const char* kROne = "r-one";
inline const char* kLLolli = "l-lolli";
inline const char* kRLolli = "r-lolli";
inline const char* kRBang = "r-bang";
inline const char* kDereliction = "dereliction";
inline const char* kContraction = "contraction";
inline const char* kWeakening = "weakening";
inline const char* kLWith1 = "l-with-1";
inline const char* kLWith2 = "l-with-2";
inline const char* kRWith = "r-with";
inline const char* kRTop = "r-top";
inline const char* kLPlus = "l-plus";
inline const char* kRPlus1 = "r-plus-1";
inline const char* kRPlus2 = "r-plus-2";
inline const char* kLZero = "l-zero";
inline const char* kLForall = "l-forall";
inline const char* kRForall = "r-forall";
inline const char* kLExists = "l-exists";
inline const char* kRExists = "r-exists";
inline const char* kSigmaCT = "sigma-ct";
inline const char* kSigmaEq = "sigma-eq";
inline const char* kSigmaP = "sigma-p";
}  // namespace rulename

struct ProofInst {
  std::optional<Term> term;        // witness for l-forall / r-exists
  std::optional<std::string> var;  // eigenvariable for r-forall / l-exists
  std::optional<std::string> rule_id;  // sigma-p: the program rule used

  bool empty() const { return !term && !var && !rule_id; }
};

struct ProofTree {
  std::string rule;
  Sequent conclusion;
  ProofInst inst;
  std::vector<ProofTree> premises;
};

size_t proof_size(const ProofTree& t);

struct CheckResult {
  bool valid = true;
  std::string path;  // dotted child indices from the root, "" for the root
  std::string reason;
};

// Validators for the three proper-axiom schemas, given a theory and an
// optional program. Sigma-CT instances are never materialized; every leaf is
// validated by a fresh CT entailment call.
class ProperAxiomSet {
public:
  ProperAxiomSet() = default;
  ProperAxiomSet(const CTheory* ct, const Program* program)
      : ct_(ct), program_(program) {}

  const CTheory* ct() const { return ct_; }
  const Program* program() const { return program_; }

  // nullopt when the sequent is a valid instance of the tagged schema.
  std::optional<std::string> validate(const std::string& tag, const Sequent& s,
                                      const ProofInst& inst) const;

private:
  const CTheory* ct_ = nullptr;
  const Program* program_ = nullptr;
};

CheckResult check_proof(const ProofTree& t, const ProperAxiomSet& axioms);

std::string print_proof(const ProofTree& t);

}  // namespace chrl
