#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chrl/ct.hpp"
#include "chrl/parser.hpp"
#include "chrl/printer.hpp"
#include "support/rng.hpp"

using namespace chrl;

namespace {

Term T(const std::string& s) { return parse_term(s); }

Store B(std::initializer_list<Atom> atoms) { return Store(atoms); }

}  // namespace

TEST_CASE("solve: transitive equality") {
  CTheory ct;
  SolvedForm sf = solve(B({make_eq(T("X"), T("a")), make_eq(T("Y"), T("X"))}), ct);
  REQUIRE_FALSE(sf.inconsistent);
  CHECK(sf.bindings.apply(T("X")) == T("a"));
  CHECK(sf.bindings.apply(T("Y")) == T("a"));
  CHECK(sf.residue.empty());
}

TEST_CASE("solve: constant clash and explicit falsity") {
  CTheory ct;
  CHECK(solve(B({make_eq(T("X"), T("head")), make_eq(T("X"), T("tail"))}), ct)
            .inconsistent);
  CHECK(solve(B({make_false()}), ct).inconsistent);
  CHECK_FALSE(satisfiable(B({make_eq(T("X"), T("a")), make_eq(T("X"), T("b"))}), ct));
  CHECK(satisfiable({}, ct));
}

TEST_CASE("ground arithmetic folds during solving") {
  CTheory ct;
  // y = (x+1) mod n with x = 2, n = 5
  Store b = B({make_eq(T("X"), T("2")), make_eq(T("N"), T("5")),
               make_eq(T("Y"), T("(X+1) mod N"))});
  SolvedForm sf = solve(b, ct);
  REQUIRE_FALSE(sf.inconsistent);
  CHECK(sf.bindings.apply(T("Y")) == T("3"));
  CHECK(satisfiable(b, ct));

  CHECK(satisfiable(B({Atom{">=", {T("3"), T("1")}}}), ct));
  CHECK_FALSE(satisfiable(B({Atom{"<", {T("3"), T("1")}}}), ct));
  // non-ground comparisons stay in the residue
  SolvedForm open = solve(B({Atom{">=", {T("X"), T("1")}}}), ct);
  REQUIRE(open.residue.size() == 1);
  CHECK(open.residue[0].symbol == ">=");
}

TEST_CASE("entails examples") {
  CTheory ct;
  CHECK(entails(B({make_eq(T("X"), T("3"))}), {}, {}, ct));
  CHECK_FALSE(entails({}, {}, B({make_eq(T("X"), T("a"))}), ct));

  Store b = B({make_eq(T("X"), T("f(Y)")), make_eq(T("Y"), T("a"))});
  auto w = entails_witness(b, {"Z"}, B({make_eq(T("X"), T("f(Z)"))}), ct);
  REQUIRE(w.has_value());
  CHECK(w->apply(T("Z")) == T("a"));

  // oracle: the witness must be among the subterms of b
  bool found = false;
  for (const Term& cand : {T("X"), T("f(Y)"), T("Y"), T("a"), T("f(a)")}) {
    Substitution theta;
    theta.insert_raw("Z", cand);
    SolvedForm sf = solve(b, ct);
    Term lhs = sf.bindings.apply(T("X"));
    Term rhs = sf.bindings.apply(theta.apply(T("f(Z)")));
    if (lhs == rhs) found = true;
  }
  CHECK(found);
}

TEST_CASE("entails is reflexive and transitive on solved forms") {
  testsupport::Rng rng(3);
  auto random_store = [&](int atoms) {
    Store b;
    for (int i = 0; i < atoms; ++i) {
      static const char* vars[] = {"X", "Y", "Z"};
      static const char* consts[] = {"a", "b"};
      Term lhs = Term::var(vars[rng.below(3)]);
      Term rhs = rng.chance(0.5)
                     ? Term::constant(consts[rng.below(2)])
                     : Term::compound("f", {Term::var(vars[rng.below(3)])});
      b.push_back(make_eq(lhs, rhs));
    }
    return b;
  };
  CTheory ct;
  for (int i = 0; i < 200; ++i) {
    Store b = random_store(1 + rng.below(3));
    CHECK(entails(b, {}, b, ct));
    // monotone under consistent extension
    Store ext = b;
    Store extra = random_store(1);
    ext.insert(ext.end(), extra.begin(), extra.end());
    if (satisfiable(ext, ct)) CHECK(entails(ext, {}, b, ct));
  }
}

TEST_CASE("entails is invariant under premise renaming") {
  CTheory ct;
  Store b = Store{make_eq(T("X"), T("f(Y)")), make_eq(T("Y"), T("a"))};
  Store b2 = Store{make_eq(T("X"), T("f(a)"))};
  CHECK(entails(b, {}, b2, ct));
  Substitution ren;
  ren.insert_raw("Y", Term::var("W"));
  CHECK(entails(apply_subst(ren, b), {}, b2, ct));
}

TEST_CASE("user axioms chain forward") {
  CTheory ct;
  ct.declared_builtins = {{"p", 1}, {"q", 1}, {"r", 1}};
  ct.axioms.push_back(CTAxiom{{}, {Atom{"p", {T("X")}}}, {}, {Atom{"q", {T("X")}}}});
  ct.axioms.push_back(CTAxiom{{}, {Atom{"q", {T("X")}}}, {}, {Atom{"r", {T("X")}}}});

  Store b = {Atom{"p", {T("a")}}};
  CHECK(entails(b, {}, {Atom{"r", {T("a")}}}, ct));
  CHECK_FALSE(entails(b, {}, {Atom{"r", {T("b")}}}, ct));

  // axiom deriving falsity
  CTheory ct2;
  ct2.declared_builtins = {{"p", 1}};
  ct2.axioms.push_back(CTAxiom{{}, {Atom{"p", {T("X")}}}, {}, {make_false()}});
  CHECK_FALSE(satisfiable({Atom{"p", {T("a")}}}, ct2));
}

TEST_CASE("existential axiom conclusions are rigid") {
  CTheory ct;
  ct.declared_builtins = {{"p", 0}, {"q", 1}};
  ct.axioms.push_back(CTAxiom{{}, {Atom{"p", {}}}, {"Y"}, {Atom{"q", {T("Y")}}}});
  Store b = {Atom{"p", {}}};
  // exists Y. q(Y) follows, but q(3) does not
  CHECK(entails(b, {"W"}, {Atom{"q", {T("W")}}}, ct));
  CHECK_FALSE(entails(b, {}, {Atom{"q", {T("3")}}}, ct));
}

TEST_CASE("saturation budget is reported") {
  CTheory ct;
  ct.declared_builtins = {{"q", 1}};
  ct.saturation_depth = 4;
  // every q spawns a new q on a fresh witness: no fixpoint
  ct.axioms.push_back(
      CTAxiom{{}, {Atom{"q", {T("X")}}}, {"Y"}, {Atom{"q", {T("f(Y)")}}}});
  CHECK_THROWS_AS(solve({Atom{"q", {T("a")}}}, ct), BudgetError);
}
