#pragma once

#include <stdexcept>
#include <string>

#include "chrl/ll.hpp"
#include "chrl/proof.hpp"
#include "chrl/rule.hpp"
#include "chrl/state.hpp"

namespace chrl {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line, int col)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + what),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

private:
  int line_;
  int col_;
};

ProgramFile parse_program_file(const std::string& text);

Term parse_term(const std::string& text);

// Ad-hoc state/configuration strings accept the reserved "_V" variable prefix
// (states echoed by the tool can be fed back in); program files reject it.
State parse_state(const std::string& text, const CTheory& ct);
Configuration parse_config(const std::string& text, const CTheory& ct);
Goal parse_goal(const std::string& text, const CTheory& ct, bool allow_or = true);

LLFormula parse_formula(const std::string& text);
Sequent parse_sequent(const std::string& text);
ProofTree parse_proof(const std::string& text);

}  // namespace chrl
