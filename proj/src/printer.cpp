#include "chrl/printer.hpp"

#include <sstream>

namespace chrl {

namespace {

int term_prec(const Term& t) {
  if (t.is_compound() && t.args().size() == 2) {
    if (t.name() == "+" || t.name() == "-") return 500;
    if (t.name() == "mod") return 400;
  }
  return 0;
}

bool is_list_term(const Term& t) {
  return (t.is_compound() && t.name() == "." && t.args().size() == 2) ||
         (t.is_constant() && t.name() == "[]");
}

void print_term_into(const Term& t, int limit, std::ostringstream& os);

void print_list(const Term& t, std::ostringstream& os) {
  os << '[';
  const Term* cur = &t;
  bool first = true;
  while (cur->is_compound() && cur->name() == "." && cur->args().size() == 2) {
    if (!first) os << ',';
    print_term_into(cur->args()[0], 999, os);
    first = false;
    cur = &cur->args()[1];
  }
  if (!(cur->is_constant() && cur->name() == "[]")) {
    os << '|';
    print_term_into(*cur, 999, os);
  }
  os << ']';
}

void print_term_into(const Term& t, int limit, std::ostringstream& os) {
  if (t.is_var()) {
    os << t.name();
    return;
  }
  if (is_list_term(t) && !(t.is_constant())) {
    print_list(t, os);
    return;
  }
  if (t.is_constant() && t.name() == "[]") {
    os << "[]";
    return;
  }
  int prec = term_prec(t);
  if (prec > 0) {
    bool parens = prec > limit;
    if (parens) os << '(';
    print_term_into(t.args()[0], prec, os);
    os << (t.name() == "mod" ? " mod " : (t.name() == "+" ? "+" : "-"));
    print_term_into(t.args()[1], prec - 1, os);
    if (parens) os << ')';
    return;
  }
  os << t.name();
  if (!t.args().empty()) {
    os << '(';
    for (size_t i = 0; i < t.args().size(); ++i) {
      if (i) os << ',';
      print_term_into(t.args()[i], 999, os);
    }
    os << ')';
  }
}

bool infix_atom(const Atom& a) {
  return a.args.size() == 2 &&
         (a.symbol == kEqSymbol || is_arith_comparison(a.symbol));
}

void print_atom_into(const Atom& a, std::ostringstream& os,
                     bool formula_ctx = false) {
  if (infix_atom(a)) {
    // In formulas, bare +/- means the additive connective: parenthesize
    // arithmetic at the top of an argument.
    int limit = formula_ctx ? 400 : 600;
    print_term_into(a.args[0], limit, os);
    os << ' ' << a.symbol << ' ';
    print_term_into(a.args[1], limit, os);
    return;
  }
  os << a.symbol;
  if (!a.args.empty()) {
    os << '(';
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (i) os << ',';
      print_term_into(a.args[i], 999, os);
    }
    os << ')';
  }
}

// Goal precedence for printing: Or chains are left-associated bare, anything
// right-nested is parenthesized; same for And.
void print_goal_into(const Goal& g, int limit, std::ostringstream& os) {
  switch (g.kind()) {
    case Goal::Kind::Top:
      os << "true";
      return;
    case Goal::Kind::Atom:
      print_atom_into(g.atom(), os);
      return;
    case Goal::Kind::And: {
      bool parens = 2 < limit;
      if (parens) os << '(';
      print_goal_into(g.lhs(), 2, os);
      os << ", ";
      print_goal_into(g.rhs(), 3, os);
      if (parens) os << ')';
      return;
    }
    case Goal::Kind::Or: {
      bool parens = 1 < limit;
      if (parens) os << '(';
      print_goal_into(g.lhs(), 1, os);
      os << " ; ";
      print_goal_into(g.rhs(), 2, os);
      if (parens) os << ')';
      return;
    }
  }
}

void print_varset(const VarSet& vs, std::ostringstream& os) {
  os << '{';
  bool first = true;
  for (const std::string& v : vs) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  os << '}';
}

}  // namespace

std::string print_term(const Term& t) {
  std::ostringstream os;
  print_term_into(t, 999, os);
  return os.str();
}

std::string print_atom(const Atom& a) {
  std::ostringstream os;
  print_atom_into(a, os);
  return os.str();
}

std::string print_store(const Store& b) {
  if (b.empty()) return "true";
  std::ostringstream os;
  for (size_t i = 0; i < b.size(); ++i) {
    if (i) os << ", ";
    print_atom_into(b[i], os);
  }
  return os.str();
}

std::string print_goal(const Goal& g) {
  std::ostringstream os;
  print_goal_into(g, 0, os);
  return os.str();
}

std::string print_state(const State& s) {
  std::ostringstream os;
  os << '<';
  // Top-level disjunctions must stay inside parentheses: the bare section
  // separator is ';'.
  print_goal_into(s.goal, s.goal.kind() == Goal::Kind::Or ? 2 : 0, os);
  os << " ; ";
  print_varset(s.globals, os);
  os << '>';
  return os.str();
}

std::string print_state(const NormalState& n) {
  std::ostringstream os;
  os << '<' << print_store(n.user) << " ; " << print_store(n.builtin) << " ; ";
  print_varset(n.globals, os);
  os << '>';
  return os.str();
}

std::string print_config(const Configuration& c) {
  if (c.members.empty()) return "<true ; false ; {}>";
  std::ostringstream os;
  for (size_t i = 0; i < c.members.size(); ++i) {
    if (i) os << " ; ";
    os << print_state(c.members[i]);
  }
  return os.str();
}

std::string print_config(const NormalConfig& c) {
  if (c.members.empty()) return "<true ; false ; {}>";
  std::ostringstream os;
  for (size_t i = 0; i < c.members.size(); ++i) {
    if (i) os << " ; ";
    os << print_state(c.members[i]);
  }
  return os.str();
}

std::string print_rule(const Rule& r) {
  std::ostringstream os;
  if (!r.id.empty()) os << r.id << " @ ";
  if (!r.kept.empty() && !r.removed.empty())
    os << print_store(r.kept) << " \\ " << print_store(r.removed) << " <=> ";
  else if (r.removed.empty())
    os << print_store(r.kept) << " ==> ";
  else
    os << print_store(r.removed) << " <=> ";
  if (!r.guard.empty()) os << print_store(r.guard) << " | ";
  os << print_goal(r.body) << '.';
  return os.str();
}

std::string print_ct_axiom(const CTAxiom& ax) {
  std::ostringstream os;
  os << "axiom ";
  auto side = [&](const VarSet& ex, const Store& b) {
    if (!ex.empty()) {
      os << "exists ";
      bool first = true;
      for (const std::string& v : ex) {
        if (!first) os << ',';
        os << v;
        first = false;
      }
      os << ": ";
    }
    os << print_store(b);
  };
  side(ax.exvars_lhs, ax.lhs);
  os << " ==> ";
  side(ax.exvars_rhs, ax.rhs);
  os << '.';
  return os.str();
}

std::string print_program_file(const ProgramFile& pf) {
  std::ostringstream os;
  os << "mode " << (pf.program.mode == Mode::Vee ? "vee" : "pure") << ".\n";
  if (pf.program.confluent) os << "confluent true.\n";
  if (!pf.ct.declared_builtins.empty()) {
    os << "builtin ";
    for (size_t i = 0; i < pf.ct.declared_builtins.size(); ++i) {
      if (i) os << ", ";
      os << pf.ct.declared_builtins[i].first << '/'
         << pf.ct.declared_builtins[i].second;
    }
    os << ".\n";
  }
  for (const CTAxiom& ax : pf.ct.axioms) os << print_ct_axiom(ax) << '\n';
  for (const Rule& r : pf.program.rules) os << print_rule(r) << '\n';
  for (const auto& [name, state] : pf.queries)
    os << "query " << name << ": " << print_state(state) << ".\n";
  return os.str();
}

namespace {

// Formula precedence: atoms/units/bang 5, infix atoms 4, tensor 3,
// plus/with 2, lolli 1, quantifiers 0. Tensor, plus, with, lolli all
// associate to the right when printed bare.
int formula_prec(const LLFormula& f) {
  switch (f.kind()) {
    case LLFormula::Kind::Atom:
      return infix_atom(Atom{f.symbol(), f.args()}) ? 4 : 5;
    case LLFormula::Kind::One:
    case LLFormula::Kind::Zero:
    case LLFormula::Kind::Top:
    case LLFormula::Kind::Bang:
      return 5;
    case LLFormula::Kind::Tensor:
      return 3;
    case LLFormula::Kind::Plus:
    case LLFormula::Kind::With:
      return 2;
    case LLFormula::Kind::Lolli:
      return 1;
    default:
      return 0;
  }
}

void print_formula_into(const LLFormula& f, int limit, std::ostringstream& os) {
  int prec = formula_prec(f);
  bool parens = prec < limit;
  switch (f.kind()) {
    case LLFormula::Kind::Atom: {
      if (parens && prec == 4) os << '(';
      print_atom_into(Atom{f.symbol(), f.args()}, os, true);
      if (parens && prec == 4) os << ')';
      return;
    }
    case LLFormula::Kind::One:
      os << '1';
      return;
    case LLFormula::Kind::Zero:
      os << '0';
      return;
    case LLFormula::Kind::Top:
      os << "top";
      return;
    case LLFormula::Kind::Bang:
      os << '!';
      print_formula_into(f.body(), 5, os);
      return;
    case LLFormula::Kind::Tensor:
      if (parens) os << '(';
      print_formula_into(f.lhs(), 4, os);
      os << " * ";
      print_formula_into(f.rhs(), 3, os);
      if (parens) os << ')';
      return;
    case LLFormula::Kind::Plus:
    case LLFormula::Kind::With: {
      if (parens) os << '(';
      print_formula_into(f.lhs(), 3, os);
      os << (f.kind() == LLFormula::Kind::Plus ? " + " : " & ");
      const LLFormula& r = f.rhs();
      int rlimit = (r.kind() == f.kind()) ? 2 : 3;
      print_formula_into(r, rlimit, os);
      if (parens) os << ')';
      return;
    }
    case LLFormula::Kind::Lolli:
      if (parens) os << '(';
      print_formula_into(f.lhs(), 2, os);
      os << " -o ";
      print_formula_into(f.rhs(), 1, os);
      if (parens) os << ')';
      return;
    case LLFormula::Kind::Forall:
    case LLFormula::Kind::Exists:
      if (parens) os << '(';
      os << (f.kind() == LLFormula::Kind::Forall ? "forall " : "exists ");
      os << f.var() << ". ";
      print_formula_into(f.body(), 0, os);
      if (parens) os << ')';
      return;
  }
}

}  // namespace

std::string print_formula(const LLFormula& f) {
  std::ostringstream os;
  print_formula_into(f, 0, os);
  return os.str();
}

std::string print_sequent(const Sequent& s) {
  std::ostringstream os;
  for (size_t i = 0; i < s.antecedent.size(); ++i) {
    if (i) os << ", ";
    print_formula_into(s.antecedent[i], 1, os);
  }
  if (!s.antecedent.empty()) os << ' ';
  os << "|- ";
  print_formula_into(s.consequent, 0, os);
  return os.str();
}

}  // namespace chrl
