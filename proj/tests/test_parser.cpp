#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chrl/parser.hpp"
#include "chrl/printer.hpp"
#include "chrl/translate.hpp"
#include "support/rng.hpp"

using namespace chrl;

namespace {

const char* kLeq = R"(
% partial-order solver
mode pure.
confluent true.
rI @ leq(X,Y), leq(X,Y) <=> leq(X,Y).
rR @ leq(X,X) <=> true.
rS @ leq(X,Y), leq(Y,X) <=> X = Y.
rT @ leq(X,Y), leq(Y,Z) ==> leq(X,Z).
query q0: <leq(a,b), leq(b,c), leq(c,a) ; {}>.
)";

}  // namespace

TEST_CASE("rule syntax") {
  ProgramFile pf = parse_program_file(kLeq);
  REQUIRE(pf.program.rules.size() == 4);
  const Rule& rI = pf.program.rules[0];
  CHECK(rI.id == "rI");
  CHECK(rI.kept.empty());
  CHECK(rI.removed.size() == 2);
  CHECK(print_goal(rI.body) == "leq(X,Y)");

  const Rule& rT = pf.program.rules[3];
  CHECK(rT.kept.size() == 2);
  CHECK(rT.removed.empty());

  CHECK(pf.program.confluent);
  CHECK(pf.program.mode == Mode::Pure);
  REQUIRE(pf.find_query("q0") != nullptr);
}

TEST_CASE("vee bodies parse with disjunction") {
  ProgramFile pf = parse_program_file(
      "mode vee.\n"
      "r1 @ bird <=> albatross ; penguin.\n"
      "r2 @ penguin, flies <=> false.\n");
  REQUIRE(pf.program.rules.size() == 2);
  CHECK(pf.program.rules[0].body.has_or());
  CHECK(print_goal(pf.program.rules[0].body) == "albatross ; penguin");
}

TEST_CASE("disjunction is rejected in pure mode") {
  CHECK_THROWS_AS(parse_program_file("mode pure.\nbird <=> albatross ; penguin.\n"),
                  ModeError);
}

TEST_CASE("empty body is a parse error") {
  CHECK_THROWS_AS(parse_program_file("c <=>.\n"), ParseError);
}

TEST_CASE("reserved variable prefix is rejected in programs") {
  CHECK_THROWS_AS(parse_program_file("c(_V1) <=> true.\n"), ParseError);
}

TEST_CASE("guards, simpagation and builtins") {
  ProgramFile pf = parse_program_file(
      "down @ eat(X) <=> Y = (X+1) mod 3 | fork(X), fork(Y).\n"
      "keepit @ c(X) \\ d(X) <=> X >= 1 | e(X).\n");
  const Rule& down = pf.program.rules[0];
  REQUIRE(down.guard.size() == 1);
  CHECK(print_atom(down.guard[0]) == "Y = (X+1) mod 3");
  const Rule& keep = pf.program.rules[1];
  CHECK(keep.kept.size() == 1);
  CHECK(keep.removed.size() == 1);
  CHECK(print_store(keep.guard) == "X >= 1");
}

TEST_CASE("axioms and builtin declarations") {
  ProgramFile pf = parse_program_file(
      "builtin edge/2, path/2.\n"
      "axiom edge(X,Y) ==> path(X,Y).\n"
      "axiom path(X,Y), path(Y,Z) ==> path(X,Z).\n"
      "axiom p(X) ==> exists Y: q(X,Y).\n"
      "builtin p/1, q/2.\n"
      "c(X) <=> edge(X,X).\n");
  CHECK(pf.ct.axioms.size() == 3);
  CHECK(pf.ct.is_builtin("edge", 2));
  CHECK(pf.ct.is_builtin("q", 2));
  // the rule body atom was classified builtin thanks to the declaration
  CHECK(pf.program.rules[0].body.is_builtin());
}

TEST_CASE("program files round trip") {
  ProgramFile pf = parse_program_file(kLeq);
  std::string printed = print_program_file(pf);
  ProgramFile again = parse_program_file(printed);
  CHECK(print_program_file(again) == printed);
  REQUIRE(again.program.rules.size() == 4);
  CHECK(print_goal(again.program.rules[2].body) == "X = Y");
}

TEST_CASE("state and configuration round trips") {
  CTheory ct;
  for (const char* text : {
           "<c(X), X = a ; {}>",
           "<leq(a,b), leq(b,c) ; {}>",
           "<true ; X = 3 ; {X}>",
           "<c(f(X,[a,b|T])), d(3) ; X >= 1 ; {T,X}>",
           "<(a ; b), c ; {}>",
       }) {
    State s = parse_state(text, ct);
    CHECK(print_state(parse_state(print_state(s), ct)) == print_state(s));
  }
  Configuration c = parse_config("<c(X) ; {}> ; <d(Y) ; {Y}>", ct);
  CHECK(c.members.size() == 2);
  CHECK(print_config(parse_config(print_config(c), ct)) == print_config(c));
}

TEST_CASE("term printing round trips with arithmetic and lists") {
  for (const char* text : {
           "f(X,Y)",
           "(X+1) mod 3",
           "X+1 mod 3",
           "X+Y-Z",
           "[a,b,c]",
           "[H|T]",
           "[]",
           "-4",
           "f([X|T], g(3))",
       }) {
    Term t = parse_term(text);
    CHECK(parse_term(print_term(t)) == t);
  }
  CHECK(print_term(parse_term("[a,b|T]")) == "[a,b|T]");
  CHECK(parse_term("[a]") ==
        Term::compound(".", {Term::constant("a"), Term::constant("[]")}));
}

TEST_CASE("formula and sequent round trips") {
  for (const char* text : {
           "!c",
           "!(e -o !c)",
           "e -o c * c",
           "exists A. leq(3,A) * !(A = 3)",
           "1",
           "(0 + top) & 0",
           "forall X. (c(X) * !(X = Y) -o c(Y) * !(X = Y))",
           "(a + b) & c",
           "a * (b + c)",
           "!forall X. (!p(X) -o exists Y. !q(Y))",
       }) {
    LLFormula f = parse_formula(text);
    CHECK(parse_formula(print_formula(f)) == f);
  }
  for (const char* text : {
           "!(e -o !c) |- e -o c * c",
           "|- 1",
           "a, b, !(X = 3) |- a * b",
       }) {
    Sequent s = parse_sequent(text);
    CHECK(print_sequent(parse_sequent(print_sequent(s))) == print_sequent(s));
  }
}

TEST_CASE("additive mixing needs parentheses") {
  CHECK_THROWS_AS(parse_formula("a + b & c"), ParseError);
  CHECK(parse_formula("(a + b) & c").kind() == LLFormula::Kind::With);
}
