#pragma once

#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chrl/ct.hpp"
#include "chrl/state.hpp"

namespace testsupport {

using namespace chrl;

// Independent oracle for state equivalence: exhaustive bounded application of
// the defining axioms (goal transformation, equality as substitution,
// application of CT, neutrality of redundant globals, failed-state collapse),
// deciding equivalence by intersecting the rewrite balls of both states.
// Goal transformation (AC of conjunction, unit top) is absorbed by the
// canonical key, which is order- and renaming-insensitive.
struct RewriteOracle {
  const CTheory& ct;
  size_t depth = 3;
  size_t node_cap = 4000;

  explicit RewriteOracle(const CTheory& theory) : ct(theory) {}

  static bool is_bottom(const NormalState& s) { return s.failed(); }

  // CT |= exists sl. B <-> exists sl'. B' with strictly-local prefixes.
  bool ct_equivalent(const NormalState& a, const NormalState& b) const {
    auto one_way = [&](const NormalState& from, const NormalState& to) {
      Substitution ren = make_fresh_renaming(to.strictly_locals());
      Store target = apply_subst(ren, to.builtin);
      VarSet ex;
      for (const auto& [v, t] : ren.map()) {
        (void)v;
        ex.insert(t.name());
      }
      return entails(from.builtin, ex, target, ct);
    };
    return one_way(a, b) && one_way(b, a);
  }

  std::vector<NormalState> neighbors(const NormalState& s) const {
    std::vector<NormalState> out;
    if (is_bottom(s)) return out;

    // (5) a literal bottom collapses to the canonical failed state
    for (const Atom& a : s.builtin)
      if (a.symbol == kFalseSymbol) {
        out.push_back(failed_state());
        return out;
      }

    // (2) equality as substitution, total, both orientations
    for (size_t i = 0; i < s.builtin.size(); ++i) {
      const Atom& e = s.builtin[i];
      if (e.symbol != kEqSymbol || e.args.size() != 2) continue;
      for (int flip = 0; flip < 2; ++flip) {
        const Term& x = e.args[flip];
        const Term& t = e.args[1 - flip];
        if (!x.is_var() || vars_of(t).count(x.name())) continue;
        Substitution sub;
        sub.insert_raw(x.name(), t);
        NormalState n = s;
        n.user = apply_subst(sub, s.user);
        out.push_back(std::move(n));
        // backward: replace one occurrence of t in some user argument by x
        if (!vars_of(s.user).count(x.name())) {
          for (size_t ui = 0; ui < s.user.size(); ++ui)
            for (size_t ai = 0; ai < s.user[ui].args.size(); ++ai) {
              bool done = false;
              Term rewritten = replace_once(s.user[ui].args[ai], t, Term::var(x.name()), done);
              if (!done) continue;
              NormalState n2 = s;
              n2.user[ui].args[ai] = rewritten;
              out.push_back(std::move(n2));
            }
        }
      }
    }

    // (3) application of CT over candidate replacement stores
    for (const Store& cand : ct_candidates(s)) {
      NormalState n = s;
      n.builtin = cand;
      if (ct_equivalent(s, n)) out.push_back(std::move(n));
    }

    // (4) dropping a redundant global
    VarSet used = s.vars();
    for (const std::string& g : s.globals)
      if (!used.count(g)) {
        NormalState n = s;
        n.globals.erase(g);
        out.push_back(std::move(n));
      }
    return out;
  }

  std::vector<Store> ct_candidates(const NormalState& s) const {
    std::vector<Store> out;
    // remove one atom
    for (size_t i = 0; i < s.builtin.size(); ++i) {
      Store c = s.builtin;
      c.erase(c.begin() + i);
      out.push_back(std::move(c));
    }
    // collapse one variable-variable equation
    for (size_t i = 0; i < s.builtin.size(); ++i) {
      const Atom& e = s.builtin[i];
      if (e.symbol != kEqSymbol || !e.args[0].is_var() || !e.args[1].is_var())
        continue;
      Substitution sub;
      sub.insert_raw(e.args[0].name(), e.args[1]);
      Store c = s.builtin;
      c.erase(c.begin() + i);
      out.push_back(apply_subst(sub, c));
    }
    // the inconsistent store collapses to bottom
    out.push_back(Store{make_false()});
    // add one entailed equation over state subterms
    std::vector<Term> pool = subterms(s);
    size_t added = 0;
    for (size_t i = 0; i < pool.size() && added < 24; ++i)
      for (size_t j = 0; j < pool.size() && added < 24; ++j) {
        if (i == j || pool[i] == pool[j]) continue;
        Atom eq = make_eq(pool[i], pool[j]);
        if (!entails(s.builtin, {}, {eq}, ct)) continue;
        Store c = s.builtin;
        c.push_back(eq);
        out.push_back(std::move(c));
        ++added;
      }
    // add one fresh-variable equation naming a subterm
    VarSet used = s.vars();
    for (const std::string& g : s.globals) used.insert(g);
    std::string fresh;
    for (char c = 'P'; c <= 'W'; ++c)
      if (!used.count(std::string(1, c))) {
        fresh = std::string(1, c);
        break;
      }
    if (!fresh.empty())
      for (size_t i = 0; i < pool.size() && i < 8; ++i) {
        Store c = s.builtin;
        c.push_back(make_eq(Term::var(fresh), pool[i]));
        out.push_back(std::move(c));
      }
    return out;
  }

  static std::vector<Term> subterms(const NormalState& s) {
    std::vector<Term> out;
    auto add = [&](const Term& t) {
      for (const Term& x : out)
        if (x == t) return;
      out.push_back(t);
    };
    std::function<void(const Term&)> walk = [&](const Term& t) {
      add(t);
      for (const Term& a : t.args()) walk(a);
    };
    for (const Atom& a : s.user)
      for (const Term& t : a.args) walk(t);
    for (const Atom& a : s.builtin)
      for (const Term& t : a.args) walk(t);
    return out;
  }

  static Term replace_once(const Term& in, const Term& what, const Term& with,
                           bool& done) {
    if (done) return in;
    if (in == what) {
      done = true;
      return with;
    }
    if (in.is_var()) return in;
    std::vector<Term> args;
    for (const Term& a : in.args()) args.push_back(replace_once(a, what, with, done));
    return Term::compound(in.name(), std::move(args));
  }

  std::set<std::string> ball(const NormalState& start) const {
    std::set<std::string> keys;
    std::deque<std::pair<NormalState, size_t>> queue;
    queue.emplace_back(start, 0);
    keys.insert(canonical_key(start));
    while (!queue.empty() && keys.size() < node_cap) {
      auto [state, d] = queue.front();
      queue.pop_front();
      if (d >= depth) continue;
      for (NormalState& n : neighbors(state)) {
        std::string key = canonical_key(n);
        if (keys.insert(key).second) queue.emplace_back(std::move(n), d + 1);
      }
    }
    return keys;
  }

  bool equivalent(const NormalState& a, const NormalState& b) const {
    std::set<std::string> ba = ball(a);
    std::set<std::string> bb = ball(b);
    for (const std::string& k : ba)
      if (bb.count(k)) return true;
    return false;
  }
};

}  // namespace testsupport
