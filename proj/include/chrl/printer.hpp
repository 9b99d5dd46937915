#pragma once

#include <string>

#include "chrl/ll.hpp"
#include "chrl/rule.hpp"
#include "chrl/state.hpp"

namespace chrl {

std::string print_term(const Term& t);
std::string print_atom(const Atom& a);
std::string print_store(const Store& b);  // "true" when empty
std::string print_goal(const Goal& g);

std::string print_state(const State& s);              // <Goal ; {V}>
std::string print_state(const NormalState& n);        // <U ; B ; {V}>
std::string print_config(const Configuration& c);     // ;-joined blocks
std::string print_config(const NormalConfig& c);

std::string print_rule(const Rule& r);
std::string print_ct_axiom(const CTAxiom& ax);
std::string print_program_file(const ProgramFile& pf);

std::string print_formula(const LLFormula& f);
std::string print_sequent(const Sequent& s);

}  // namespace chrl
