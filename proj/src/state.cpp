#include "chrl/state.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace chrl {

Goal Goal::top() { return Goal(); }

Goal Goal::user_atom(Atom a) {
  Goal g;
  g.kind_ = Kind::Atom;
  g.atom_ = std::move(a);
  g.builtin_ = false;
  return g;
}

Goal Goal::builtin_atom(Atom a) {
  Goal g;
  g.kind_ = Kind::Atom;
  g.atom_ = std::move(a);
  g.builtin_ = true;
  return g;
}

Goal Goal::conj(Goal lhs, Goal rhs) {
  Goal g;
  g.kind_ = Kind::And;
  g.children_ = {std::make_shared<const Goal>(std::move(lhs)),
                 std::make_shared<const Goal>(std::move(rhs))};
  return g;
}

Goal Goal::disj(Goal lhs, Goal rhs) {
  Goal g;
  g.kind_ = Kind::Or;
  g.children_ = {std::make_shared<const Goal>(std::move(lhs)),
                 std::make_shared<const Goal>(std::move(rhs))};
  return g;
}

Goal Goal::conj_all(const std::vector<Goal>& gs) {
  if (gs.empty()) return top();
  Goal acc = gs[0];
  for (size_t i = 1; i < gs.size(); ++i) acc = conj(std::move(acc), gs[i]);
  return acc;
}

bool Goal::has_or() const {
  switch (kind_) {
    case Kind::Or:
      return true;
    case Kind::And:
      return lhs().has_or() || rhs().has_or();
    default:
      return false;
  }
}

bool Goal::operator==(const Goal& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Top:
      return true;
    case Kind::Atom:
      return builtin_ == other.builtin_ && atom_ == other.atom_;
    default:
      return lhs() == other.lhs() && rhs() == other.rhs();
  }
}

VarSet vars_of(const Goal& g) {
  VarSet out;
  std::function<void(const Goal&)> walk = [&](const Goal& x) {
    switch (x.kind()) {
      case Goal::Kind::Top:
        return;
      case Goal::Kind::Atom:
        for (const Term& t : x.atom().args) collect_vars(t, out);
        return;
      default:
        walk(x.lhs());
        walk(x.rhs());
    }
  };
  walk(g);
  return out;
}

Goal apply_subst(const Substitution& s, const Goal& g) {
  switch (g.kind()) {
    case Goal::Kind::Top:
      return g;
    case Goal::Kind::Atom: {
      Atom a = apply_subst(s, g.atom());
      return g.is_builtin() ? Goal::builtin_atom(std::move(a))
                            : Goal::user_atom(std::move(a));
    }
    case Goal::Kind::And:
      return Goal::conj(apply_subst(s, g.lhs()), apply_subst(s, g.rhs()));
    default:
      return Goal::disj(apply_subst(s, g.lhs()), apply_subst(s, g.rhs()));
  }
}

std::optional<SplitGoal> split_flat(const Goal& g) {
  SplitGoal out;
  bool ok = true;
  std::function<void(const Goal&)> walk = [&](const Goal& x) {
    if (!ok) return;
    switch (x.kind()) {
      case Goal::Kind::Top:
        return;
      case Goal::Kind::Atom:
        (x.is_builtin() ? out.builtin : out.user).push_back(x.atom());
        return;
      case Goal::Kind::And:
        walk(x.lhs());
        walk(x.rhs());
        return;
      case Goal::Kind::Or:
        ok = false;
        return;
    }
  };
  walk(g);
  if (!ok) return std::nullopt;
  return out;
}

Goal goal_of_split(const Store& user, const Store& builtin) {
  std::vector<Goal> gs;
  for (const Atom& a : user) gs.push_back(Goal::user_atom(a));
  for (const Atom& a : builtin) gs.push_back(Goal::builtin_atom(a));
  return Goal::conj_all(gs);
}

bool NormalState::failed() const {
  for (const Atom& a : builtin)
    if (a.symbol == kFalseSymbol && a.args.empty()) return true;
  return false;
}

State NormalState::to_state() const {
  return State{goal_of_split(user, builtin), globals};
}

VarSet NormalState::vars() const {
  VarSet out = vars_of(user);
  for (const std::string& v : vars_of(builtin)) out.insert(v);
  return out;
}

VarSet NormalState::locals() const {
  VarSet out;
  for (const std::string& v : vars())
    if (!globals.count(v)) out.insert(v);
  return out;
}

VarSet NormalState::strictly_locals() const {
  VarSet user_vars = vars_of(user);
  VarSet out;
  for (const std::string& v : locals())
    if (!user_vars.count(v)) out.insert(v);
  return out;
}

NormalState failed_state() { return NormalState{{}, {make_false()}, {}}; }

NormalState apply_subst(const Substitution& s, const NormalState& n) {
  VarSet globals;
  for (const std::string& g : n.globals) {
    Term img = s.apply(Term::var(g));
    globals.insert(img.is_var() ? img.name() : g);
  }
  return NormalState{apply_subst(s, n.user), apply_subst(s, n.builtin), globals};
}

Configuration NormalConfig::to_config() const {
  Configuration c;
  for (const NormalState& n : members) c.members.push_back(n.to_state());
  return c;
}

std::vector<Goal> dnf(const Goal& g, const StateOpts& opts) {
  std::function<std::vector<Goal>(const Goal&)> go =
      [&](const Goal& x) -> std::vector<Goal> {
    switch (x.kind()) {
      case Goal::Kind::Top:
      case Goal::Kind::Atom:
        return {x};
      case Goal::Kind::Or: {
        std::vector<Goal> out = go(x.lhs());
        for (Goal& r : go(x.rhs())) out.push_back(std::move(r));
        if (out.size() > opts.dnf_cap)
          throw BudgetError(BudgetError::Kind::Dnf, "dnf disjunct cap exceeded");
        return out;
      }
      case Goal::Kind::And: {
        std::vector<Goal> ls = go(x.lhs());
        std::vector<Goal> rs = go(x.rhs());
        std::vector<Goal> out;
        out.reserve(ls.size() * rs.size());
        for (const Goal& l : ls)
          for (const Goal& r : rs) {
            out.push_back(Goal::conj(l, r));
            if (out.size() > opts.dnf_cap)
              throw BudgetError(BudgetError::Kind::Dnf, "dnf disjunct cap exceeded");
          }
        return out;
      }
    }
    return {};
  };
  return go(g);
}

namespace {

// Union-find over variable names for binding reorientation.
struct VarClasses {
  std::map<std::string, std::string> parent;

  std::string find(const std::string& v) {
    auto it = parent.find(v);
    if (it == parent.end()) {
      parent[v] = v;
      return v;
    }
    if (it->second == v) return v;
    std::string root = find(it->second);
    parent[v] = root;
    return root;
  }

  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra != rb) parent[ra] = rb;
  }
};

NormalState normalize_parts(const Store& user, const Store& builtin,
                            const VarSet& globals, const CTheory& ct) {
  SolvedForm sf = solve(builtin, ct);
  if (sf.inconsistent) return failed_state();

  VarClasses classes;
  for (const auto& [v, t] : sf.bindings.map())
    if (t.is_var()) classes.unite(v, t.name());
  std::map<std::string, std::vector<std::string>> members;
  for (const auto& [v, unused] : classes.parent) {
    (void)unused;
    members[classes.find(v)].push_back(v);
  }

  Substitution var_remap;
  for (auto& [root, vs] : members) {
    (void)root;
    std::sort(vs.begin(), vs.end());
    std::string repr;
    for (const std::string& v : vs)
      if (globals.count(v)) {
        repr = v;
        break;
      }
    if (repr.empty()) repr = vs.front();
    for (const std::string& v : vs)
      if (v != repr) var_remap.insert_raw(v, Term::var(repr));
  }

  auto final_term = [&](const Term& t) {
    return fold_arith(var_remap.apply(sf.bindings.apply(t)), ct);
  };

  Store user_out;
  user_out.reserve(user.size());
  for (const Atom& a : user) {
    std::vector<Term> args;
    args.reserve(a.args.size());
    for (const Term& t : a.args) args.push_back(final_term(t));
    user_out.push_back(Atom{a.symbol, std::move(args)});
  }

  Store builtin_out;
  for (const std::string& g : globals) {
    Term img = final_term(Term::var(g));
    if (!(img.is_var() && img.name() == g))
      builtin_out.push_back(make_eq(Term::var(g), img));
  }
  for (const Atom& a : sf.residue) {
    Atom b = apply_subst(var_remap, a);
    builtin_out.push_back(std::move(b));
  }

  VarSet occurring = vars_of(user_out);
  for (const std::string& v : vars_of(builtin_out)) occurring.insert(v);
  VarSet globals_out;
  for (const std::string& g : globals)
    if (occurring.count(g)) globals_out.insert(g);

  return NormalState{std::move(user_out), std::move(builtin_out),
                     std::move(globals_out)};
}

}  // namespace

NormalState normalize_state(const State& s, const CTheory& ct) {
  auto parts = split_flat(s.goal);
  if (!parts)
    throw std::logic_error("normalize_state: goal contains a disjunction");
  return normalize_parts(parts->user, parts->builtin, s.globals, ct);
}

NormalState normalize_state(const NormalState& s, const CTheory& ct) {
  return normalize_parts(s.user, s.builtin, s.globals, ct);
}

NormalState rename_locals_fresh(const NormalState& n, Substitution* renaming) {
  Substitution ren = make_fresh_renaming(n.locals());
  if (renaming) *renaming = ren;
  return NormalState{apply_subst(ren, n.user), apply_subst(ren, n.builtin),
                     n.globals};
}

namespace {

struct MatchBudget {
  size_t remaining;
  void tick() {
    if (remaining == 0)
      throw BudgetError(BudgetError::Kind::Match, "matching budget exceeded");
    --remaining;
  }
};

// Enumerates injective symbol-compatible pairings of u1 against u2; calls
// yield with the permutation until it returns true.
bool enumerate_matchings(const Store& u1, const Store& u2, MatchBudget& budget,
                         const std::function<bool(const Term&, const Term&)>& feasible,
                         const std::function<bool(const std::vector<size_t>&)>& yield) {
  if (u1.size() != u2.size()) return false;
  size_t n = u1.size();
  std::vector<size_t> perm(n, 0);
  std::vector<bool> used(n, false);
  std::function<bool(size_t)> go = [&](size_t i) -> bool {
    budget.tick();
    if (i == n) return yield(perm);
    for (size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (u1[i].symbol != u2[j].symbol || u1[i].args.size() != u2[j].args.size())
        continue;
      bool ok = true;
      for (size_t k = 0; ok && k < u1[i].args.size(); ++k)
        ok = feasible(u1[i].args[k], u2[j].args[k]);
      if (!ok) continue;
      used[j] = true;
      perm[i] = j;
      if (go(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return go(0);
}

Store equations_for(const Store& u1, const Store& u2,
                    const std::vector<size_t>& perm) {
  Store eqs;
  for (size_t i = 0; i < u1.size(); ++i)
    for (size_t k = 0; k < u1[i].args.size(); ++k)
      eqs.push_back(make_eq(u1[i].args[k], u2[perm[i]].args[k]));
  return eqs;
}

// One direction of the equivalence/entailment criterion:
// CT |= forall(B1 -> exists locals(n2). (U1 = U2) /\ B2).
bool direction_entails(const NormalState& n1, const NormalState& n2,
                       const CTheory& ct, const StateOpts& opts) {
  if (n1.user.size() != n2.user.size()) return false;
  VarSet exvars = n2.locals();
  SolvedForm sf = solve(n1.builtin, ct);
  if (sf.inconsistent) return true;
  auto feasible = [&](const Term& a, const Term& b) {
    return unify(sf.bindings.apply(a), sf.bindings.apply(b)).has_value();
  };
  MatchBudget budget{opts.match_budget};
  return enumerate_matchings(
      n1.user, n2.user, budget, feasible, [&](const std::vector<size_t>& perm) {
        Store query = equations_for(n1.user, n2.user, perm);
        for (const Atom& a : n2.builtin) query.push_back(a);
        return entails(n1.builtin, exvars, query, ct);
      });
}

}  // namespace

std::vector<StoreMatching> match_userstores(const Store& u1, const Store& u2,
                                            const StateOpts& opts) {
  std::vector<StoreMatching> out;
  MatchBudget budget{opts.match_budget};
  auto feasible = [](const Term&, const Term&) { return true; };
  enumerate_matchings(u1, u2, budget, feasible,
                      [&](const std::vector<size_t>& perm) {
                        out.push_back(StoreMatching{perm, equations_for(u1, u2, perm)});
                        return false;
                      });
  return out;
}

bool state_equiv(const NormalState& n1, const NormalState& n2, const CTheory& ct,
                 const StateOpts& opts) {
  NormalState m1 = normalize_state(n1, ct);
  NormalState m2 = normalize_state(n2, ct);
  if (m1.failed() || m2.failed()) return m1.failed() == m2.failed();
  if (m1.globals != m2.globals) return false;
  if (m1.user.size() != m2.user.size()) return false;
  NormalState a = rename_locals_fresh(m1);
  NormalState b = rename_locals_fresh(m2);
  return direction_entails(a, b, ct, opts) && direction_entails(b, a, ct, opts);
}

bool state_equiv(const State& s1, const State& s2, const CTheory& ct,
                 const StateOpts& opts) {
  if (!s1.goal.has_or() && !s2.goal.has_or())
    return state_equiv(normalize_state(s1, ct), normalize_state(s2, ct), ct, opts);
  // Disjunctive states: goal equivalence does not commute the split operator,
  // so disjunct lists must agree position-wise.
  std::vector<Goal> d1 = dnf(s1.goal, opts);
  std::vector<Goal> d2 = dnf(s2.goal, opts);
  if (d1.size() != d2.size()) return false;
  for (size_t i = 0; i < d1.size(); ++i)
    if (!state_equiv(State{d1[i], s1.globals}, State{d2[i], s2.globals}, ct, opts))
      return false;
  return true;
}

bool state_entails(const NormalState& n1, const NormalState& n2, const CTheory& ct,
                   const StateOpts& opts) {
  NormalState m1 = normalize_state(n1, ct);
  NormalState m2 = normalize_state(n2, ct);
  if (m1.failed()) return true;
  if (m2.failed()) return false;
  NormalState a = rename_locals_fresh(m1);
  NormalState b = rename_locals_fresh(m2);
  // Representatives can always be chosen with V2 within V1: globals of b
  // missing from a never occur in a, so they count as redundant there.
  return direction_entails(a, b, ct, opts);
}

bool state_entails(const State& s1, const State& s2, const CTheory& ct,
                   const StateOpts& opts) {
  return state_entails(normalize_state(s1, ct), normalize_state(s2, ct), ct, opts);
}

NormalState merge(const NormalState& s1, const NormalState& s2) {
  NormalState a = rename_locals_fresh(s1);
  NormalState b = rename_locals_fresh(s2);
  NormalState out;
  out.user = a.user;
  out.user.insert(out.user.end(), b.user.begin(), b.user.end());
  out.builtin = a.builtin;
  out.builtin.insert(out.builtin.end(), b.builtin.begin(), b.builtin.end());
  out.globals = a.globals;
  out.globals.insert(b.globals.begin(), b.globals.end());
  return out;
}

NormalConfig config_normalize(const Configuration& c, const CTheory& ct,
                              const StateOpts& opts) {
  NormalConfig out;
  for (const State& s : c.members) {
    for (const Goal& g : dnf(s.goal, opts)) {
      NormalState n = normalize_state(State{g, s.globals}, ct);
      if (!n.failed()) out.members.push_back(std::move(n));
    }
  }
  return out;
}

NormalConfig config_normalize(const NormalConfig& c, const CTheory& ct,
                              const StateOpts&) {
  NormalConfig out;
  for (const NormalState& s : c.members) {
    NormalState n = normalize_state(s, ct);
    if (!n.failed()) out.members.push_back(std::move(n));
  }
  return out;
}

bool config_equiv(const NormalConfig& c1, const NormalConfig& c2,
                  const CTheory& ct, const StateOpts& opts) {
  NormalConfig a = config_normalize(c1, ct, opts);
  NormalConfig b = config_normalize(c2, ct, opts);
  if (a.members.size() != b.members.size()) return false;
  size_t n = a.members.size();
  std::vector<bool> used(n, false);
  std::function<bool(size_t)> go = [&](size_t i) -> bool {
    if (i == n) return true;
    for (size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (!state_equiv(a.members[i], b.members[j], ct, opts)) continue;
      used[j] = true;
      if (go(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return go(0);
}

bool config_equiv(const Configuration& c1, const Configuration& c2,
                  const CTheory& ct, const StateOpts& opts) {
  return config_equiv(config_normalize(c1, ct, opts),
                      config_normalize(c2, ct, opts), ct, opts);
}

bool config_entails(const NormalConfig& c1, const NormalConfig& c2,
                    const CTheory& ct, const StateOpts& opts) {
  NormalConfig a = config_normalize(c1, ct, opts);
  NormalConfig b = config_normalize(c2, ct, opts);
  for (const NormalState& m : a.members) {
    bool found = false;
    for (const NormalState& t : b.members)
      if (state_entails(m, t, ct, opts)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

bool config_entails(const Configuration& c1, const Configuration& c2,
                    const CTheory& ct, const StateOpts& opts) {
  return config_entails(config_normalize(c1, ct, opts),
                        config_normalize(c2, ct, opts), ct, opts);
}

bool is_compact(const NormalConfig& c, const CTheory& ct, const StateOpts& opts) {
  NormalConfig a = config_normalize(c, ct, opts);
  for (size_t i = 0; i < a.members.size(); ++i)
    for (size_t j = 0; j < a.members.size(); ++j) {
      if (i == j) continue;
      if (state_entails(a.members[i], a.members[j], ct, opts)) return false;
    }
  return true;
}

bool is_compact(const Configuration& c, const CTheory& ct, const StateOpts& opts) {
  return is_compact(config_normalize(c, ct, opts), ct, opts);
}

namespace {

void render_term_canonical(const Term& t, std::map<std::string, size_t>& names,
                           std::ostringstream& os) {
  if (t.is_var()) {
    auto [it, inserted] = names.emplace(t.name(), names.size());
    (void)inserted;
    os << "_" << it->second;
    return;
  }
  os << t.name();
  if (!t.args().empty()) {
    os << '(';
    for (size_t i = 0; i < t.args().size(); ++i) {
      if (i) os << ',';
      render_term_canonical(t.args()[i], names, os);
    }
    os << ')';
  }
}

std::string render_atoms_canonical(const std::vector<const Atom*>& atoms,
                                   const VarSet& globals) {
  std::map<std::string, size_t> names;
  std::ostringstream os;
  for (const Atom* a : atoms) {
    os << a->symbol << '(';
    for (size_t i = 0; i < a->args.size(); ++i) {
      if (i) os << ',';
      render_term_canonical(a->args[i], names, os);
    }
    os << ')';
    os << '&';
  }
  os << '{';
  for (const std::string& g : globals) os << g << ',';
  os << '}';
  return os.str();
}

void blind_term(const Term& t, std::ostringstream& os) {
  if (t.is_var()) {
    os << '_';
    return;
  }
  os << t.name();
  if (!t.args().empty()) {
    os << '(';
    for (size_t i = 0; i < t.args().size(); ++i) {
      if (i) os << ',';
      blind_term(t.args()[i], os);
    }
    os << ')';
  }
}

std::string blind_render(const Atom& a) {
  std::ostringstream os;
  os << a.symbol << '/';
  for (const Term& t : a.args) {
    blind_term(t, os);
    os << ';';
  }
  return os.str();
}

constexpr size_t kKeyPermutationCap = 720;

}  // namespace

std::string canonical_key(const NormalState& n) {
  if (n.failed()) return "<bottom>";
  struct Entry {
    std::string blind;
    const Atom* atom;
  };
  std::vector<Entry> entries;
  for (const Atom& a : n.user) entries.push_back({"u:" + blind_render(a), &a});
  for (const Atom& a : n.builtin) entries.push_back({"b:" + blind_render(a), &a});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& x, const Entry& y) { return x.blind < y.blind; });

  // Tie groups: runs of equal blind renderings. Permute within runs (capped)
  // and keep the lexicographically smallest full rendering.
  std::vector<std::pair<size_t, size_t>> groups;
  for (size_t i = 0; i < entries.size();) {
    size_t j = i + 1;
    while (j < entries.size() && entries[j].blind == entries[i].blind) ++j;
    groups.emplace_back(i, j);
    i = j;
  }
  std::string best;
  size_t candidates = 0;
  std::vector<const Atom*> order(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) order[i] = entries[i].atom;
  std::function<void(size_t)> go = [&](size_t gi) {
    if (candidates >= kKeyPermutationCap) return;
    if (gi == groups.size()) {
      ++candidates;
      std::string key = render_atoms_canonical(order, n.globals);
      if (best.empty() || key < best) best = std::move(key);
      return;
    }
    auto [lo, hi] = groups[gi];
    if (hi - lo <= 1) {
      go(gi + 1);
      return;
    }
    std::vector<const Atom*> slice(order.begin() + lo, order.begin() + hi);
    std::sort(slice.begin(), slice.end());
    do {
      for (size_t k = lo; k < hi; ++k) order[k] = slice[k - lo];
      go(gi + 1);
    } while (std::next_permutation(slice.begin(), slice.end()) &&
             candidates < kKeyPermutationCap);
  };
  go(0);
  return best;
}

std::string canonical_key(const NormalConfig& c) {
  std::vector<std::string> keys;
  keys.reserve(c.members.size());
  for (const NormalState& n : c.members) keys.push_back(canonical_key(n));
  std::sort(keys.begin(), keys.end());
  std::ostringstream os;
  for (const std::string& k : keys) os << k << " | ";
  return os.str().empty() ? "<empty>" : os.str();
}

}  // namespace chrl
