#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chrl/parser.hpp"
#include "chrl/printer.hpp"
#include "chrl/state.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"
#include "support/rng.hpp"

using namespace chrl;

namespace {

CTheory g_ct;

State S(const std::string& text) { return parse_state(text, g_ct); }
NormalState N(const std::string& text) { return normalize_state(S(text), g_ct); }
Goal G(const std::string& text) { return parse_goal(text, g_ct); }
Configuration C(const std::string& text) { return parse_config(text, g_ct); }

// Truth-set oracle for dnf: the multiset of atom-multisets.
std::multiset<std::multiset<std::string>> truth_set(const std::vector<Goal>& ds) {
  std::multiset<std::multiset<std::string>> out;
  for (const Goal& g : ds) {
    auto parts = split_flat(g);
    REQUIRE(parts.has_value());
    std::multiset<std::string> atoms;
    for (const Atom& a : parts->user) atoms.insert(print_atom(a));
    for (const Atom& a : parts->builtin) atoms.insert(print_atom(a));
    out.insert(atoms);
  }
  return out;
}

}  // namespace

TEST_CASE("dnf distributes left to right") {
  std::vector<Goal> d = dnf(G("g1, (g2 ; g3)"));
  REQUIRE(d.size() == 2);
  CHECK(print_goal(d[0]) == "g1, g2");
  CHECK(print_goal(d[1]) == "g1, g3");

  std::vector<Goal> flat = dnf(G("g1, g2"));
  REQUIRE(flat.size() == 1);
  CHECK(print_goal(flat[0]) == "g1, g2");

  std::vector<Goal> four = dnf(G("(a ; b), (c ; d)"));
  REQUIRE(four.size() == 4);
  CHECK(truth_set(four) ==
        truth_set({G("a, c"), G("a, d"), G("b, c"), G("b, d")}));
  CHECK(print_goal(four[0]) == "a, c");

  StateOpts tight;
  tight.dnf_cap = 3;
  CHECK_THROWS_AS(dnf(G("(a ; b), (c ; d)"), tight), BudgetError);
}

TEST_CASE("normalize_state applies bindings and drops solved locals") {
  NormalState n = N("<c(X), X = a ; {}>");
  CHECK_FALSE(n.failed());
  REQUIRE(n.user.size() == 1);
  CHECK(print_atom(n.user[0]) == "c(a)");
  CHECK(n.builtin.empty());
  // the criterion confirms input and output are one class
  CHECK(state_equiv(S("<c(X), X = a ; {}>"), S("<c(a) ; {}>"), g_ct));
}

TEST_CASE("normalize_state collapses failed states") {
  NormalState n = N("<c(X), false ; {X}>");
  CHECK(n.failed());
  CHECK(n.user.empty());
  CHECK(n.globals.empty());
}

TEST_CASE("normalize_state drops redundant globals") {
  NormalState n = N("<true ; {X}>");
  CHECK(n.user.empty());
  CHECK(n.builtin.empty());
  CHECK(n.globals.empty());
}

TEST_CASE("normalization is idempotent and equivalence-preserving") {
  testsupport::Rng rng(21);
  for (int i = 0; i < 150; ++i) {
    NormalState s = testsupport::random_state(rng);
    NormalState n1 = normalize_state(s, g_ct);
    NormalState n2 = normalize_state(n1, g_ct);
    CHECK(canonical_key(n1) == canonical_key(n2));
    CHECK(state_equiv(s, n1, g_ct));
  }
}

TEST_CASE("match_userstores") {
  Store u1 = {Atom{"c", {parse_term("X")}}};
  Store u2 = {Atom{"c", {parse_term("a")}}};
  auto ms = match_userstores(u1, u2);
  REQUIRE(ms.size() == 1);
  REQUIRE(ms[0].equations.size() == 1);
  CHECK(print_atom(ms[0].equations[0]) == "X = a");

  Store v1 = {Atom{"c", {parse_term("X")}}, Atom{"c", {parse_term("Y")}}};
  Store v2 = {Atom{"c", {parse_term("Y")}}, Atom{"c", {parse_term("X")}}};
  CHECK(match_userstores(v1, v2).size() == 2);

  Store w2 = {Atom{"d", {parse_term("X")}}};
  CHECK(match_userstores(u1, w2).empty());
}

TEST_CASE("state_equiv examples") {
  CHECK(state_equiv(S("<c(X), X = a ; {}>"), S("<c(a) ; {}>"), g_ct));
  CHECK(state_equiv(S("<false ; {}>"), S("<d(Z), false ; {Z}>"), g_ct));
  CHECK_FALSE(state_equiv(S("<c(X), c(X) ; {}>"), S("<c(X) ; {}>"), g_ct));
  // globals are rigid
  CHECK_FALSE(state_equiv(S("<c(X) ; {X}>"), S("<c(Y) ; {Y}>"), g_ct));
  CHECK(state_equiv(S("<c(X) ; {}>"), S("<c(Y) ; {}>"), g_ct));
}

TEST_CASE("state_entails examples") {
  CHECK(state_entails(S("<true ; X = 3 ; {X}>"), S("<true ; true ; {}>"), g_ct));
  CHECK_FALSE(state_entails(S("<true ; true ; {}>"), S("<true ; X = 3 ; {X}>"), g_ct));
  CHECK(state_entails(S("<c(0) ; {}>"), S("<c(X) ; {}>"), g_ct));
  CHECK_FALSE(state_entails(S("<c(X) ; {}>"), S("<c(0) ; {}>"), g_ct));
}

TEST_CASE("equivalence iff mutual entailment, against the rewrite oracle") {
  testsupport::Rng rng(5);
  testsupport::RewriteOracle oracle(g_ct);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    NormalState s1 = testsupport::random_state(rng);
    NormalState s2;
    if (rng.chance(0.5)) {
      s2 = s1;
      size_t moves = rng.below(3);
      for (size_t k = 0; k < moves; ++k) testsupport::perturb_once(rng, s2);
    } else {
      s2 = testsupport::random_state(rng);
    }
    bool eq = state_equiv(s1, s2, g_ct);
    bool fwd = state_entails(s1, s2, g_ct);
    bool bwd = state_entails(s2, s1, g_ct);
    CHECK(eq == (fwd && bwd));
    CHECK(eq == oracle.equivalent(s1, s2));
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("entailment is a preorder, antisymmetric modulo equivalence") {
  testsupport::Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    NormalState a = testsupport::random_state(rng, 2);
    NormalState b = testsupport::random_state(rng, 2);
    NormalState c = testsupport::random_state(rng, 2);
    CHECK(state_entails(a, a, g_ct));
    if (state_entails(a, b, g_ct) && state_entails(b, c, g_ct))
      CHECK(state_entails(a, c, g_ct));
    if (state_entails(a, b, g_ct) && state_entails(b, a, g_ct))
      CHECK(state_equiv(a, b, g_ct));
  }
}

TEST_CASE("logical equivalence is necessary for state equivalence") {
  testsupport::Rng rng(23);
  for (int i = 0; i < 40; ++i) {
    NormalState a = testsupport::random_state(rng, 2);
    NormalState b = a;
    testsupport::perturb_once(rng, b);
    if (!state_equiv(a, b, g_ct)) continue;
    // CT |= (exists la. Ua & Ba) <-> (exists lb. Ub & Bb): check both ways as
    // entailments over the full stores with set semantics.
    auto full = [](const NormalState& n) {
      Store all = n.user;
      all.insert(all.end(), n.builtin.begin(), n.builtin.end());
      return all;
    };
    NormalState ra = rename_locals_fresh(a);
    NormalState rb = rename_locals_fresh(b);
    CHECK(entails(full(ra), rb.locals(), full(rb), g_ct));
    CHECK(entails(full(rb), ra.locals(), full(ra), g_ct));
  }
}

TEST_CASE("merge unit and definition") {
  NormalState s1 = N("<c(X) ; {G}>");
  NormalState s2 = N("<d(Y), Y = G ; {G}>");
  NormalState m = merge(s1, s2);
  CHECK(m.user.size() == 2);
  CHECK(m.globals == VarSet{"G"});
  CHECK(state_equiv(m, N("<c(X), d(Y), Y = G ; {G}>"), g_ct));

  NormalState unit = N("<true ; {}>");
  CHECK(state_equiv(merge(s1, unit), s1, g_ct));

  // shared local names get renamed apart
  NormalState a = N("<c(X) ; {}>");
  NormalState b = N("<d(X) ; {}>");
  NormalState ab = merge(a, b);
  CHECK(ab.user[0].args[0] != ab.user[1].args[0]);
}

TEST_CASE("merge is monotone with respect to entailment") {
  testsupport::Rng rng(29);
  for (int i = 0; i < 30; ++i) {
    NormalState s = testsupport::random_state(rng, 2);
    NormalState s2 = s;
    testsupport::perturb_once(rng, s2);
    NormalState t = testsupport::random_state(rng, 2);
    if (!state_entails(s, s2, g_ct)) continue;
    CHECK(state_entails(merge(s, t), merge(s2, t), g_ct));
  }
}

TEST_CASE("config_normalize splits and drops failures") {
  CTheory vee;
  Configuration c;
  c.members.push_back(
      State{Goal::disj(parse_goal("albatross, flies", vee),
                       parse_goal("penguin, flies", vee)),
            {}});
  NormalConfig n = config_normalize(c, vee);
  REQUIRE(n.members.size() == 2);
  CHECK(print_store(n.members[0].user) == "albatross, flies");
  CHECK(print_store(n.members[1].user) == "penguin, flies");

  NormalConfig dropped = config_normalize(C("<false ; {}> ; <c(X) ; {}>"), g_ct);
  REQUIRE(dropped.members.size() == 1);
  CHECK(print_store(dropped.members[0].user) == "c(X)");

  CHECK(config_normalize(Configuration{}, g_ct).empty());
}

TEST_CASE("config_equiv and config_entails") {
  CHECK(config_equiv(C("<c(X) ; {}> ; <d(Y) ; {}>"),
                     C("<d(Y) ; {}> ; <c(X) ; {}>"), g_ct));
  CHECK_FALSE(config_equiv(C("<c(X) ; {}>"), C("<c(X) ; {}> ; <c(X) ; {}>"), g_ct));

  // weakening
  CHECK(config_entails(C("<d(Y) ; {}>"), C("<c(X) ; {}> ; <d(Y) ; {}>"), g_ct));
  // congruence of c(0) | c(X) with c(X)
  CHECK(config_entails(C("<c(0) ; {}> ; <c(X) ; {}>"), C("<c(X) ; {}>"), g_ct));
  CHECK(config_entails(C("<c(X) ; {}>"), C("<c(0) ; {}> ; <c(X) ; {}>"), g_ct));
  CHECK_FALSE(config_entails(C("<c(X) ; {}>"), C("<c(0) ; {}>"), g_ct));

  // the empty configuration entails everything and is entailed by nothing
  Configuration eps;
  CHECK(config_entails(eps, C("<c(X) ; {}>"), g_ct));
  CHECK_FALSE(config_entails(C("<c(X) ; {}>"), eps, g_ct));
  CHECK(config_equiv(eps, C("<false ; {}>"), g_ct));
}

TEST_CASE("compactness") {
  CHECK_FALSE(is_compact(C("<c(0) ; {}> ; <c(X) ; {}>"), g_ct));
  CHECK(is_compact(C("<c(0) ; {}>"), g_ct));
  CHECK(is_compact(C("<c(X), X = [] ; {X}> ; <c(X), X = [H|L] ; {X}>"), g_ct));
}

TEST_CASE("mutual config entailment implies equivalence on compact pairs") {
  testsupport::Rng rng(31);
  for (int i = 0; i < 25; ++i) {
    NormalConfig c1, c2;
    size_t n = 1 + rng.below(2);
    for (size_t k = 0; k < n; ++k)
      c1.members.push_back(testsupport::random_state(rng, 2));
    c2 = c1;
    // a permuted copy with perturbed members stays equivalent
    std::rotate(c2.members.begin(),
                c2.members.begin() + rng.below(c2.members.size()),
                c2.members.end());
    for (NormalState& m : c2.members)
      if (rng.chance(0.5)) testsupport::perturb_once(rng, m);
    if (!is_compact(c1, g_ct) || !is_compact(c2, g_ct)) continue;
    bool cong = config_entails(c1, c2, g_ct) && config_entails(c2, c1, g_ct);
    if (cong) CHECK(config_equiv(c1, c2, g_ct));
  }
}
