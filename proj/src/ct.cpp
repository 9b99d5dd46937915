#include "chrl/ct.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <sstream>

namespace chrl {

bool Atom::operator<(const Atom& other) const {
  if (symbol != other.symbol) return symbol < other.symbol;
  if (args.size() != other.args.size()) return args.size() < other.args.size();
  for (size_t i = 0; i < args.size(); ++i)
    if (int c = Term::compare(args[i], other.args[i]); c != 0) return c < 0;
  return false;
}

Atom apply_subst(const Substitution& s, const Atom& a) {
  return Atom{a.symbol, s.apply(a.args)};
}

Store apply_subst(const Substitution& s, const Store& b) {
  Store out;
  out.reserve(b.size());
  for (const Atom& a : b) out.push_back(apply_subst(s, a));
  return out;
}

VarSet vars_of(const Atom& a) { return vars_of(a.args); }

VarSet vars_of(const Store& b) {
  VarSet out;
  for (const Atom& a : b)
    for (const Term& t : a.args) collect_vars(t, out);
  return out;
}

Atom make_eq(Term lhs, Term rhs) {
  return Atom{kEqSymbol, {std::move(lhs), std::move(rhs)}};
}

Atom make_false() { return Atom{kFalseSymbol, {}}; }

bool is_arith_comparison(const std::string& symbol) {
  return symbol == "<" || symbol == ">" || symbol == "=<" || symbol == ">=";
}

bool CTheory::is_builtin(const std::string& symbol, size_t arity) const {
  if (symbol == kEqSymbol && arity == 2) return true;
  if (symbol == kFalseSymbol && arity == 0) return true;
  if (is_arith_comparison(symbol) && arity == 2) return true;
  for (const auto& [name, n] : declared_builtins)
    if (name == symbol && static_cast<size_t>(n) == arity) return true;
  return false;
}

namespace {

bool is_arith_functor(const std::string& name, size_t arity) {
  return arity == 2 && (name == "+" || name == "-" || name == "mod");
}

long long math_mod(long long a, long long m) {
  long long r = a % m;
  if (r != 0 && ((r < 0) != (m < 0))) r += m;
  return r;
}

}  // namespace

Term fold_arith(const Term& t, const CTheory& ct) {
  if (!ct.arithmetic_enabled || t.is_var()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(fold_arith(a, ct));
  if (is_arith_functor(t.name(), args.size()) && args[0].is_int() && args[1].is_int()) {
    long long x = args[0].int_value();
    long long y = args[1].int_value();
    if (t.name() == "+") return Term::integer(x + y);
    if (t.name() == "-") return Term::integer(x - y);
    if (y != 0) return Term::integer(math_mod(x, y));
  }
  return Term::compound(t.name(), std::move(args));
}

Atom fold_arith(const Atom& a, const CTheory& ct) {
  if (!ct.arithmetic_enabled) return a;
  std::vector<Term> args;
  args.reserve(a.args.size());
  for (const Term& t : a.args) args.push_back(fold_arith(t, ct));
  return Atom{a.symbol, std::move(args)};
}

namespace {

// -1 false, 1 true, 0 not decidable (not ground integers).
int eval_comparison(const Atom& a) {
  if (!is_arith_comparison(a.symbol) || a.args.size() != 2) return 0;
  if (!a.args[0].is_int() || !a.args[1].is_int()) return 0;
  long long x = a.args[0].int_value();
  long long y = a.args[1].int_value();
  bool r = false;
  if (a.symbol == "<") r = x < y;
  else if (a.symbol == ">") r = x > y;
  else if (a.symbol == "=<") r = x <= y;
  else if (a.symbol == ">=") r = x >= y;
  return r ? 1 : -1;
}

struct SolveCtx {
  Substitution sigma;
  Store residue;
  bool bottom = false;
};

bool unify_in_ctx(SolveCtx& ctx, const Term& a, const Term& b) {
  auto res = unify_lists({ctx.sigma.apply(a)}, {ctx.sigma.apply(b)});
  if (!res) return false;
  for (const auto& [v, t] : res->map())
    if (!ctx.sigma.bind(v, t)) return false;
  return true;
}

void absorb_atom(SolveCtx& ctx, const Atom& raw, const CTheory& ct) {
  if (ctx.bottom) return;
  Atom a = fold_arith(apply_subst(ctx.sigma, raw), ct);
  if (a.symbol == kFalseSymbol && a.args.empty()) {
    ctx.bottom = true;
    return;
  }
  if (a.symbol == kEqSymbol && a.args.size() == 2) {
    if (!unify_in_ctx(ctx, a.args[0], a.args[1])) ctx.bottom = true;
    return;
  }
  ctx.residue.push_back(a);
}

void normalize_residue(SolveCtx& ctx, const CTheory& ct) {
  if (ctx.bottom) return;
  Store next;
  for (const Atom& raw : ctx.residue) {
    Atom a = fold_arith(apply_subst(ctx.sigma, raw), ct);
    int v = eval_comparison(a);
    if (v == 1) continue;
    if (v == -1) {
      ctx.bottom = true;
      return;
    }
    next.push_back(std::move(a));
  }
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  ctx.residue = std::move(next);
}

// Canonical render with variables numbered by first occurrence, so that
// firing records are stable across fresh renamings.
std::string render_atoms(const Store& b) {
  std::ostringstream os;
  std::map<std::string, size_t> names;
  std::function<void(const Term&)> rt = [&](const Term& t) {
    if (t.is_var()) {
      auto [it, inserted] = names.emplace(t.name(), names.size());
      (void)inserted;
      os << '?' << it->second;
      return;
    }
    os << t.name();
    if (!t.args().empty()) {
      os << '(';
      for (size_t i = 0; i < t.args().size(); ++i) {
        if (i) os << ',';
        rt(t.args()[i]);
      }
      os << ')';
    }
  };
  for (const Atom& a : b) {
    os << a.symbol << '/';
    for (const Term& t : a.args) {
      rt(t);
      os << ';';
    }
    os << '|';
  }
  return os.str();
}

constexpr size_t kAxiomMatchCap = 256;

// Backtracking search for instantiations of `exvars` making every query atom
// hold in the solved context: equalities by restricted unification,
// ground comparisons by evaluation, anything else by matching a residue atom.
bool match_atoms(const SolveCtx& ctx, const CTheory& ct, const Store& query,
                 size_t index, const VarSet& exvars, Substitution theta,
                 const std::function<bool(const Substitution&)>& yield) {
  if (index == query.size()) return yield(theta);
  Atom a = fold_arith(apply_subst(theta, query[index]), ct);
  if (a.symbol == kEqSymbol && a.args.size() == 2) {
    auto next = unify_restricted({a.args[0]}, {a.args[1]}, exvars, theta);
    if (!next) return false;
    return match_atoms(ctx, ct, query, index + 1, exvars, *next, yield);
  }
  if (a.symbol == kFalseSymbol && a.args.empty()) return false;
  int v = eval_comparison(a);
  if (v == 1) return match_atoms(ctx, ct, query, index + 1, exvars, theta, yield);
  if (v == -1) return false;
  for (const Atom& r : ctx.residue) {
    if (r.symbol != a.symbol || r.args.size() != a.args.size()) continue;
    auto next = unify_restricted(a.args, r.args, exvars, theta);
    if (!next) continue;
    if (match_atoms(ctx, ct, query, index + 1, exvars, *next, yield)) return true;
  }
  return false;
}

void saturate(SolveCtx& ctx, const CTheory& ct) {
  if (ct.axioms.empty()) return;
  std::set<std::string> fired;
  for (int round = 0;; ++round) {
    if (ctx.bottom) return;
    Store batch;
    for (size_t i = 0; i < ct.axioms.size(); ++i) {
      const CTAxiom& ax = ct.axioms[i];
      VarSet ax_vars = vars_of(ax.lhs);
      for (const std::string& v : vars_of(ax.rhs)) ax_vars.insert(v);
      Substitution ren = make_fresh_renaming(ax_vars);
      Store lhs = apply_subst(ren, ax.lhs);
      Store rhs = apply_subst(ren, ax.rhs);
      // Pre-apply the context bindings to universal variables via matching:
      // all lhs variables are matchable.
      VarSet matchable = vars_of(lhs);
      Store lhs_n = apply_subst(ctx.sigma, lhs);
      size_t found = 0;
      match_atoms(ctx, ct, lhs_n, 0, matchable, Substitution(),
                  [&](const Substitution& theta) {
                    std::string key = std::to_string(i) + "@" +
                                      render_atoms(apply_subst(theta, lhs_n));
                    if (!fired.count(key)) {
                      fired.insert(key);
                      Substitution inst = theta;
                      for (const std::string& xv : ax.exvars_rhs) {
                        std::string r = ren.apply(Term::var(xv)).name();
                        inst.insert_raw(r, Term::constant(fresh_skolem_name()));
                      }
                      for (const Atom& ra : apply_subst(inst, rhs))
                        batch.push_back(ra);
                    }
                    ++found;
                    return found >= kAxiomMatchCap;
                  });
    }
    if (batch.empty()) return;
    if (round >= ct.saturation_depth)
      throw BudgetError(BudgetError::Kind::Saturation,
                        "CT axiom saturation exceeded depth " +
                            std::to_string(ct.saturation_depth));
    for (const Atom& a : batch) absorb_atom(ctx, a, ct);
    normalize_residue(ctx, ct);
  }
}

SolveCtx solve_ctx(const Store& b, const CTheory& ct) {
  SolveCtx ctx;
  for (const Atom& a : b) absorb_atom(ctx, a, ct);
  normalize_residue(ctx, ct);
  saturate(ctx, ct);
  return ctx;
}

}  // namespace

SolvedForm solve(const Store& b, const CTheory& ct) {
  SolveCtx ctx = solve_ctx(b, ct);
  if (ctx.bottom) return SolvedForm{Substitution(), {}, true};
  return SolvedForm{ctx.sigma, ctx.residue, false};
}

bool satisfiable(const Store& b, const CTheory& ct) {
  return !solve(b, ct).inconsistent;
}

std::optional<Substitution> entails_witness(const Store& b, const VarSet& exvars,
                                            const Store& b2, const CTheory& ct) {
  for (const std::string& v : exvars)
    if (vars_of(b).count(v))
      throw std::logic_error("entails: existential variable occurs in premise: " + v);
  SolveCtx ctx = solve_ctx(b, ct);
  if (ctx.bottom) return Substitution();
  Store query = apply_subst(ctx.sigma, b2);
  std::optional<Substitution> witness;
  match_atoms(ctx, ct, query, 0, exvars, Substitution(),
              [&](const Substitution& theta) {
                witness = theta;
                return true;
              });
  return witness;
}

bool entails(const Store& b, const VarSet& exvars, const Store& b2,
             const CTheory& ct) {
  return entails_witness(b, exvars, b2, ct).has_value();
}

Substitution finalize_witness(const Substitution& theta, const VarSet& exvars) {
  Substitution out = theta;
  for (const std::string& v : exvars)
    if (!out.lookup(v)) out.insert_raw(v, Term::constant(fresh_skolem_name()));
  // Resolve exvar chains inside ranges (acyclic by the occurs check).
  for (bool changed = true; changed;) {
    changed = false;
    Substitution next;
    for (const auto& [v, t] : out.map()) {
      Term r = out.apply(t);
      if (r != t) changed = true;
      next.insert_raw(v, r);
    }
    out = next;
  }
  return out;
}

std::string fresh_skolem_name() {
  static std::atomic<uint64_t> counter{0};
  return "sk#" + std::to_string(counter.fetch_add(1));
}

}  // namespace chrl
