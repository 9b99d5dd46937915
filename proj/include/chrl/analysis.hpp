#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chrl/engine.hpp"
#include "chrl/proof.hpp"

namespace chrl {

enum class Verdict { Holds, Fails, Unknown };

struct AnalysisReport {
  Verdict verdict = Verdict::Unknown;
  std::vector<std::string> evidence;  // replayable witnesses, certificates
  std::vector<std::string> bounds;    // the limits the verdict is relative to

  std::string to_text() const;  // VERDICT / EVIDENCE / BOUNDS sections
};

struct LowerClosureQuery {
  ObsKind kind = ObsKind::C;  // C or S
  Configuration target;
};

AnalysisReport logical_observable_member(const State& s, const Program& p,
                                         const CTheory& ct,
                                         const LowerClosureQuery& q,
                                         const Limits& limits = {});

AnalysisReport exclude_failure(const State& s, const Program& p, const CTheory& ct,
                               const Limits& limits = {});

AnalysisReport assure_data_sufficient(const State& s, const Program& p,
                                      const CTheory& ct, const Limits& limits = {});

AnalysisReport safety_check(const State& s, const State& bad, const Program& p,
                            const CTheory& ct, const Limits& limits = {});

struct AnalyticResult {
  AnalysisReport report;
  std::string offending_rule;          // set when the criterion fails
  std::pair<size_t, size_t> offending_pair{0, 0};
};

AnalyticResult analytic_criterion(const Program& p, const CTheory& ct,
                                  const StateOpts& opts = {});

struct CompareResult {
  AnalysisReport report;
  // A distinguishing witness: the query state and the observable class seen
  // under exactly one of the programs.
  std::optional<State> witness_query;
  std::optional<NormalConfig> witness_class;
  bool witness_in_first = false;
};

CompareResult compare_programs_operational(const Program& p1, const Program& p2,
                                           const CTheory& ct, ObsKind kind,
                                           const std::vector<State>& corpus,
                                           const Limits& limits = {});

// Generated query corpus from the head symbols of both programs.
std::vector<State> default_corpus(const Program& p1, const Program& p2);

AnalysisReport logical_program_implication(const Program& p1, const Program& p2,
                                           const CTheory& ct,
                                           const Limits& limits = {});

std::vector<std::string> tautology_rule_note(const Program& p, const CTheory& ct,
                                             const StateOpts& opts = {});

}  // namespace chrl
