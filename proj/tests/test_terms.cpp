#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chrl/parser.hpp"
#include "chrl/printer.hpp"
#include "chrl/state.hpp"
#include "chrl/term.hpp"
#include "support/rng.hpp"

using namespace chrl;

namespace {

Term T(const std::string& text) { return parse_term(text); }

// Naive oracle: apply single bindings one at a time until nothing changes.
Term naive_apply(const std::map<std::string, Term>& bindings, Term t) {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [v, val] : bindings) {
      Substitution single;
      single.insert_raw(v, val);
      Term next = single.apply(t);
      if (next != t) {
        t = next;
        changed = true;
      }
    }
  }
  return t;
}

}  // namespace

TEST_CASE("apply_subst examples") {
  Substitution s;
  REQUIRE(s.bind("X", T("a")));
  CHECK(apply_subst(s, T("f(X,Y)")) == T("f(a,Y)"));

  Substitution empty;
  CHECK(apply_subst(empty, T("f(X)")) == T("f(X)"));

  Substitution chain;
  REQUIRE(chain.bind("X", T("g(Y)")));
  REQUIRE(chain.bind("Y", T("b")));
  CHECK(chain.is_idempotent());
  Term got = apply_subst(chain, T("h(X)"));
  CHECK(got == T("h(g(b))"));
  CHECK(got == naive_apply({{"X", T("g(Y)")}, {"Y", T("b")}}, T("h(X)")));
}

TEST_CASE("one-sided matching") {
  CHECK_FALSE(match_one_sided(T("p(a)"), T("p(X)")).has_value());
  auto m = match_one_sided(T("p(X)"), T("p(a)"));
  REQUIRE(m.has_value());
  CHECK(m->apply(T("X")) == T("a"));
  CHECK_FALSE(match_one_sided(T("f(X,X)"), T("f(a,b)")).has_value());
}

TEST_CASE("unification") {
  auto u = unify(T("f(X,b)"), T("f(a,Y)"));
  REQUIRE(u.has_value());
  CHECK(u->apply(T("X")) == T("a"));
  CHECK(u->apply(T("Y")) == T("b"));
  CHECK_FALSE(unify(T("X"), T("f(X)")).has_value());
  CHECK_FALSE(unify(T("f(X)"), T("g(X)")).has_value());
}

TEST_CASE("unifier equates both sides when it exists") {
  testsupport::Rng rng(7);
  auto random_term = [&](auto&& self, int depth) -> Term {
    switch (rng.below(depth > 0 ? 5 : 3)) {
      case 0:
        return Term::var("X");
      case 1:
        return Term::var("Y");
      case 2:
        return Term::constant("a");
      case 3:
        return Term::compound("f", {self(self, depth - 1)});
      default:
        return Term::compound("g", {self(self, depth - 1), self(self, depth - 1)});
    }
  };
  int successes = 0;
  for (int i = 0; i < 500; ++i) {
    Term t1 = random_term(random_term, 2);
    Term t2 = random_term(random_term, 2);
    auto u = unify(t1, t2);
    if (!u) continue;
    ++successes;
    CHECK(u->apply(t1) == u->apply(t2));
    CHECK(u->is_idempotent());
  }
  CHECK(successes > 50);
}

TEST_CASE("matching refines unification on variable-disjoint terms") {
  testsupport::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    // patterns over X,Y; targets ground
    Term pat = rng.chance(0.5) ? T("f(X,Y)") : T("g(X,f(Y,X))");
    Term tgt = rng.chance(0.5) ? T("f(a,b)") : T("g(b,f(a,b))");
    auto m = match_one_sided(pat, tgt);
    auto u = unify(pat, tgt);
    if (m) {
      REQUIRE(u.has_value());
      for (const std::string& v : vars_of(pat))
        CHECK(m->apply(Term::var(v)) == u->apply(Term::var(v)));
    }
  }
}

TEST_CASE("fresh names never collide") {
  std::set<std::string> seen;
  for (int i = 0; i < 10000; ++i) CHECK(seen.insert(fresh_var_name()).second);
  CHECK(is_reserved_var_name("_V0"));
  CHECK_FALSE(is_reserved_var_name("X"));
}

TEST_CASE("fresh renaming avoids everything and stays distinct") {
  VarSet rename = {"X", "Y", "Z"};
  Substitution ren = make_fresh_renaming(rename);
  std::set<std::string> images;
  for (const std::string& v : rename) {
    Term img = ren.apply(Term::var(v));
    REQUIRE(img.is_var());
    CHECK(is_reserved_var_name(img.name()));
    CHECK(images.insert(img.name()).second);
    CHECK_FALSE(rename.count(img.name()));
  }
}

TEST_CASE("state variants keep globals fixed") {
  CTheory ct;
  State s = parse_state("<c(L) ; {G}>", ct);
  NormalState n = normalize_state(s, ct);
  Substitution ren;
  NormalState v = rename_locals_fresh(n, &ren);
  CHECK(v.globals == n.globals);
  REQUIRE(v.user.size() == 1);
  CHECK(v.user[0].symbol == "c");
  CHECK(v.user[0].args[0].is_var());
  CHECK(v.user[0].args[0] != Term::var("L"));
}

TEST_CASE("parsed reserved names advance the fresh counter") {
  CTheory ct;
  uint64_t before = fresh_counter_value();
  parse_state("<c(_V99999) ; {}>", ct);
  CHECK(fresh_counter_value() >= 100000);
  CHECK(fresh_counter_value() >= before);
}
