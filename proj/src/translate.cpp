#include "chrl/translate.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "chrl/printer.hpp"

namespace chrl {

IFormula IFormula::atom(Atom a) {
  IFormula f(Kind::Atom);
  f.atom_ = std::move(a);
  return f;
}
IFormula IFormula::top() { return IFormula(Kind::Top); }
IFormula IFormula::bot() { return IFormula(Kind::Bot); }

namespace {

std::shared_ptr<const IFormula> ibox(IFormula f) {
  return std::make_shared<const IFormula>(std::move(f));
}

}  // namespace

IFormula IFormula::conj(IFormula lhs, IFormula rhs) {
  IFormula f(Kind::And);
  f.children_ = {ibox(std::move(lhs)), ibox(std::move(rhs))};
  return f;
}
IFormula IFormula::disj(IFormula lhs, IFormula rhs) {
  IFormula f(Kind::Or);
  f.children_ = {ibox(std::move(lhs)), ibox(std::move(rhs))};
  return f;
}
IFormula IFormula::imp(IFormula lhs, IFormula rhs) {
  IFormula f(Kind::Imp);
  f.children_ = {ibox(std::move(lhs)), ibox(std::move(rhs))};
  return f;
}
IFormula IFormula::iff(IFormula lhs, IFormula rhs) {
  IFormula f(Kind::Iff);
  f.children_ = {ibox(std::move(lhs)), ibox(std::move(rhs))};
  return f;
}
IFormula IFormula::forall(std::string var, IFormula body) {
  IFormula f(Kind::Forall);
  f.var_ = std::move(var);
  f.children_ = {ibox(std::move(body))};
  return f;
}
IFormula IFormula::exists(std::string var, IFormula body) {
  IFormula f(Kind::Exists);
  f.var_ = std::move(var);
  f.children_ = {ibox(std::move(body))};
  return f;
}

namespace {

int iprec(const IFormula& f) {
  switch (f.kind()) {
    case IFormula::Kind::Atom:
    case IFormula::Kind::Top:
    case IFormula::Kind::Bot:
      return 4;
    case IFormula::Kind::And:
      return 3;
    case IFormula::Kind::Or:
      return 2;
    case IFormula::Kind::Imp:
    case IFormula::Kind::Iff:
      return 1;
    default:
      return 0;
  }
}

void print_iformula_into(const IFormula& f, int limit, std::ostringstream& os) {
  int prec = iprec(f);
  bool parens = prec < limit;
  if (parens) os << '(';
  switch (f.kind()) {
    case IFormula::Kind::Atom:
      os << print_atom(f.atom_value());
      break;
    case IFormula::Kind::Top:
      os << "true";
      break;
    case IFormula::Kind::Bot:
      os << "false";
      break;
    case IFormula::Kind::And:
      print_iformula_into(f.lhs(), 3, os);
      os << " & ";
      print_iformula_into(f.rhs(), 4, os);
      break;
    case IFormula::Kind::Or:
      print_iformula_into(f.lhs(), 2, os);
      os << " v ";
      print_iformula_into(f.rhs(), 3, os);
      break;
    case IFormula::Kind::Imp:
      print_iformula_into(f.lhs(), 2, os);
      os << " -> ";
      print_iformula_into(f.rhs(), 1, os);
      break;
    case IFormula::Kind::Iff:
      print_iformula_into(f.lhs(), 2, os);
      os << " <-> ";
      print_iformula_into(f.rhs(), 2, os);
      break;
    case IFormula::Kind::Forall:
    case IFormula::Kind::Exists:
      os << (f.kind() == IFormula::Kind::Forall ? "forall " : "exists ");
      os << f.var() << ". ";
      print_iformula_into(f.body(), 0, os);
      break;
  }
  if (parens) os << ')';
}

void push_ordered(const Term& t, std::vector<std::string>& out, VarSet& seen) {
  if (t.is_var()) {
    if (seen.insert(t.name()).second) out.push_back(t.name());
    return;
  }
  for (const Term& a : t.args()) push_ordered(a, out, seen);
}

}  // namespace

std::string print_iformula(const IFormula& f) {
  std::ostringstream os;
  print_iformula_into(f, 0, os);
  return os.str();
}

std::vector<std::string> ordered_vars(const Store& b) {
  std::vector<std::string> out;
  VarSet seen;
  for (const Atom& a : b)
    for (const Term& t : a.args) push_ordered(t, out, seen);
  return out;
}

std::vector<std::string> ordered_vars(const Goal& g) {
  std::vector<std::string> out;
  VarSet seen;
  std::function<void(const Goal&)> walk = [&](const Goal& x) {
    switch (x.kind()) {
      case Goal::Kind::Atom:
        for (const Term& t : x.atom().args) push_ordered(t, out, seen);
        return;
      case Goal::Kind::And:
      case Goal::Kind::Or:
        walk(x.lhs());
        walk(x.rhs());
        return;
      default:
        return;
    }
  };
  walk(g);
  return out;
}

LLFormula exists_close(const std::vector<std::string>& vars, LLFormula body) {
  LLFormula acc = std::move(body);
  for (size_t i = vars.size(); i-- > 0;)
    acc = LLFormula::exists(vars[i], std::move(acc));
  return acc;
}

LLFormula smart_tensor(const std::vector<LLFormula>& parts) {
  std::vector<LLFormula> keep;
  for (const LLFormula& p : parts)
    if (p.kind() != LLFormula::Kind::One) keep.push_back(p);
  return tensor_all(keep);
}

LLFormula translate_atom(const Atom& a, bool builtin) {
  if (!builtin) return LLFormula::atom(a.symbol, a.args);
  if (a.symbol == kFalseSymbol && a.args.empty()) return LLFormula::zero();
  return LLFormula::bang(LLFormula::atom(a.symbol, a.args));
}

LLFormula translate_goal(const Goal& g) {
  switch (g.kind()) {
    case Goal::Kind::Top:
      return LLFormula::one();
    case Goal::Kind::Atom:
      return translate_atom(g.atom(), g.is_builtin());
    case Goal::Kind::And:
      return LLFormula::tensor(translate_goal(g.lhs()), translate_goal(g.rhs()));
    default:
      return LLFormula::plus(translate_goal(g.lhs()), translate_goal(g.rhs()));
  }
}

LLFormula translate_user_store(const Store& u) {
  std::vector<LLFormula> parts;
  for (const Atom& a : u) parts.push_back(translate_atom(a, false));
  return tensor_all(parts);
}

LLFormula translate_builtin_store(const Store& b) {
  std::vector<LLFormula> parts;
  for (const Atom& a : b) parts.push_back(translate_atom(a, true));
  return tensor_all(parts);
}

namespace {

std::vector<std::string> local_prefix(const std::vector<std::string>& occ,
                                      const VarSet& globals) {
  std::vector<std::string> out;
  for (const std::string& v : occ)
    if (!globals.count(v)) out.push_back(v);
  return out;
}

}  // namespace

LLFormula translate_state(const State& s) {
  return exists_close(local_prefix(ordered_vars(s.goal), s.globals),
                      translate_goal(s.goal));
}

LLFormula translate_state(const NormalState& n) {
  std::vector<std::string> occ = ordered_vars(n.user);
  VarSet seen(occ.begin(), occ.end());
  for (const std::string& v : ordered_vars(n.builtin))
    if (seen.insert(v).second) occ.push_back(v);
  LLFormula body = smart_tensor({translate_user_store(n.user),
                                 translate_builtin_store(n.builtin)});
  return exists_close(local_prefix(occ, n.globals), std::move(body));
}

LLFormula translate_config(const Configuration& c) {
  std::vector<LLFormula> parts;
  for (const State& s : c.members) parts.push_back(translate_state(s));
  return plus_all(parts);
}

LLFormula translate_config(const NormalConfig& c) {
  std::vector<LLFormula> parts;
  for (const NormalState& n : c.members) parts.push_back(translate_state(n));
  return plus_all(parts);
}

LLFormula negri_star(const IFormula& f) {
  switch (f.kind()) {
    case IFormula::Kind::Atom: {
      const Atom& a = f.atom_value();
      if (a.symbol == kFalseSymbol && a.args.empty()) return LLFormula::zero();
      return LLFormula::bang(LLFormula::atom(a.symbol, a.args));
    }
    case IFormula::Kind::Top:
      return LLFormula::one();
    case IFormula::Kind::Bot:
      return LLFormula::zero();
    case IFormula::Kind::And:
      return LLFormula::tensor(negri_star(f.lhs()), negri_star(f.rhs()));
    case IFormula::Kind::Or:
      return LLFormula::plus(negri_star(f.lhs()), negri_star(f.rhs()));
    case IFormula::Kind::Imp:
      return LLFormula::bang(
          LLFormula::lolli(negri_star(f.lhs()), negri_star(f.rhs())));
    case IFormula::Kind::Iff:
      return LLFormula::with(
          LLFormula::bang(LLFormula::lolli(negri_star(f.lhs()), negri_star(f.rhs()))),
          LLFormula::bang(LLFormula::lolli(negri_star(f.rhs()), negri_star(f.lhs()))));
    case IFormula::Kind::Forall:
      return LLFormula::bang(LLFormula::forall(f.var(), negri_star(f.body())));
    default:
      return LLFormula::exists(f.var(), negri_star(f.body()));
  }
}

namespace {

IFormula store_iformula(const Store& b) {
  if (b.empty()) return IFormula::top();
  IFormula acc = IFormula::atom(b[0]);
  for (size_t i = 1; i < b.size(); ++i)
    acc = IFormula::conj(std::move(acc), IFormula::atom(b[i]));
  return acc;
}

IFormula exists_close_i(const std::vector<std::string>& vars, IFormula body) {
  IFormula acc = std::move(body);
  for (size_t i = vars.size(); i-- > 0;)
    acc = IFormula::exists(vars[i], std::move(acc));
  return acc;
}

IFormula forall_close_i(const IFormula& f) {
  // Free variables in first occurrence order.
  std::vector<std::string> order;
  VarSet bound, seen;
  std::function<void(const IFormula&, VarSet)> walk = [&](const IFormula& x,
                                                          VarSet b) {
    switch (x.kind()) {
      case IFormula::Kind::Atom:
        for (const Term& t : x.atom_value().args)
          for (const std::string& v : vars_of(t))
            if (!b.count(v) && seen.insert(v).second) order.push_back(v);
        return;
      case IFormula::Kind::Forall:
      case IFormula::Kind::Exists: {
        VarSet b2 = b;
        b2.insert(x.var());
        walk(x.body(), std::move(b2));
        return;
      }
      case IFormula::Kind::Top:
      case IFormula::Kind::Bot:
        return;
      default:
        walk(x.lhs(), b);
        walk(x.rhs(), b);
        return;
    }
  };
  walk(f, {});
  IFormula acc = f;
  for (size_t i = order.size(); i-- > 0;)
    acc = IFormula::forall(order[i], std::move(acc));
  return acc;
}

IFormula simplified_imp(IFormula lhs, IFormula rhs) {
  if (lhs.kind() == IFormula::Kind::Top) return rhs;
  return IFormula::imp(std::move(lhs), std::move(rhs));
}

IFormula goal_iformula(const Goal& g) {
  switch (g.kind()) {
    case Goal::Kind::Top:
      return IFormula::top();
    case Goal::Kind::Atom:
      if (g.is_builtin() && g.atom().symbol == kFalseSymbol && g.atom().args.empty())
        return IFormula::bot();
      return IFormula::atom(g.atom());
    case Goal::Kind::And:
      return IFormula::conj(goal_iformula(g.lhs()), goal_iformula(g.rhs()));
    default:
      throw ModeError("classical reading requires a pure-mode (disjunction-free) object");
  }
}

}  // namespace

IFormula ct_axiom_formula(const CTAxiom& ax) {
  std::vector<std::string> xl(ax.exvars_lhs.begin(), ax.exvars_lhs.end());
  std::vector<std::string> xr(ax.exvars_rhs.begin(), ax.exvars_rhs.end());
  IFormula body = IFormula::imp(exists_close_i(xl, store_iformula(ax.lhs)),
                                exists_close_i(xr, store_iformula(ax.rhs)));
  return forall_close_i(body);
}

IFormula classical_reading(const State& s) {
  IFormula body = goal_iformula(s.goal);
  return exists_close_i(local_prefix(ordered_vars(s.goal), s.globals),
                        std::move(body));
}

IFormula classical_reading(const NormalState& n) {
  return classical_reading(n.to_state());
}

IFormula classical_reading(const Rule& r) {
  IFormula body = goal_iformula(r.body);
  VarSet locals = r.local_vars();
  std::vector<std::string> order;
  VarSet seen;
  for (const std::string& v : ordered_vars(r.guard))
    if (locals.count(v) && seen.insert(v).second) order.push_back(v);
  for (const std::string& v : ordered_vars(r.body))
    if (locals.count(v) && seen.insert(v).second) order.push_back(v);
  IFormula rhs = exists_close_i(order, std::move(body));
  IFormula core = IFormula::iff(store_iformula(r.removed), std::move(rhs));
  core = simplified_imp(store_iformula(r.kept), std::move(core));
  core = simplified_imp(store_iformula(r.guard), std::move(core));
  return forall_close_i(core);
}

IFormula classical_reading(const Program& p) {
  if (p.rules.empty()) return IFormula::top();
  IFormula acc = classical_reading(p.rules[0]);
  for (size_t i = 1; i < p.rules.size(); ++i)
    acc = IFormula::conj(std::move(acc), classical_reading(p.rules[i]));
  return acc;
}

std::vector<LLFormula> encode_ct(
    const CTheory& ct, const std::vector<std::pair<std::string, int>>& signature) {
  std::vector<LLFormula> out;
  for (const CTAxiom& ax : ct.axioms) out.push_back(negri_star(ct_axiom_formula(ax)));
  for (const auto& [symbol, arity] : signature) {
    for (int j = 0; j < arity; ++j) {
      std::vector<Term> xs, ys;
      for (int k = 0; k < arity; ++k) xs.push_back(Term::var("X" + std::to_string(k + 1)));
      ys = xs;
      Term y = Term::var("Y");
      ys[j] = y;
      LLFormula eq = LLFormula::bang(
          LLFormula::atom(kEqSymbol, {xs[j], y}));
      LLFormula lhs = LLFormula::tensor(LLFormula::atom(symbol, xs), eq);
      LLFormula rhs = LLFormula::tensor(LLFormula::atom(symbol, ys), eq);
      LLFormula body = LLFormula::lolli(std::move(lhs), std::move(rhs));
      for (int k = arity; k-- > 0;)
        body = LLFormula::forall("X" + std::to_string(k + 1), std::move(body));
      body = LLFormula::forall("Y", std::move(body));
      out.push_back(LLFormula::bang(std::move(body)));
    }
  }
  return out;
}

namespace {

// Canonical sigma-p shapes: lhs = H1 * H2 * !G flattened; rhs = H1-atoms
// tensored with exists y_r. (B^L * !G) where unit parts are dropped.
LLFormula sigma_p_lhs(const Rule& r) {
  std::vector<LLFormula> parts;
  for (const Atom& a : r.kept) parts.push_back(translate_atom(a, false));
  for (const Atom& a : r.removed) parts.push_back(translate_atom(a, false));
  for (const Atom& a : r.guard) parts.push_back(translate_atom(a, true));
  return tensor_all(parts);
}

LLFormula sigma_p_rhs(const Rule& r) {
  std::vector<LLFormula> core_parts;
  LLFormula body = translate_goal(r.body);
  if (body.kind() != LLFormula::Kind::One) core_parts.push_back(body);
  for (const Atom& a : r.guard) core_parts.push_back(translate_atom(a, true));
  LLFormula core = tensor_all(core_parts);
  VarSet locals = r.local_vars();
  std::vector<std::string> order;
  VarSet seen;
  for (const std::string& v : ordered_vars(r.body))
    if (locals.count(v) && seen.insert(v).second) order.push_back(v);
  for (const std::string& v : ordered_vars(r.guard))
    if (locals.count(v) && seen.insert(v).second) order.push_back(v);
  LLFormula closed = exists_close(order, std::move(core));
  std::vector<LLFormula> parts;
  for (const Atom& a : r.kept) parts.push_back(translate_atom(a, false));
  if (!(closed.kind() == LLFormula::Kind::One)) parts.push_back(closed);
  return tensor_all(parts);
}

}  // namespace

Sequent sigma_p_schema(const Rule& variant) {
  return Sequent{{sigma_p_lhs(variant)}, sigma_p_rhs(variant)};
}

LLFormula encode_rule(const Rule& r) {
  Sequent schema = sigma_p_schema(r);
  LLFormula body = LLFormula::lolli(schema.antecedent[0], schema.consequent);
  VarSet free = free_vars(body);
  std::vector<std::string> order;
  VarSet seen;
  for (const std::string& v : ordered_vars(r.kept))
    if (free.count(v) && seen.insert(v).second) order.push_back(v);
  for (const std::string& v : ordered_vars(r.removed))
    if (free.count(v) && seen.insert(v).second) order.push_back(v);
  for (const std::string& v : ordered_vars(r.guard))
    if (free.count(v) && seen.insert(v).second) order.push_back(v);
  for (const std::string& v : ordered_vars(r.body))
    if (free.count(v) && seen.insert(v).second) order.push_back(v);
  LLFormula closed = std::move(body);
  for (size_t i = order.size(); i-- > 0;)
    closed = LLFormula::forall(order[i], std::move(closed));
  return LLFormula::bang(std::move(closed));
}

std::vector<LLFormula> encode_program(const Program& p) {
  std::vector<LLFormula> out;
  for (const Rule& r : p.rules) out.push_back(encode_rule(r));
  return out;
}

std::optional<BuiltinReading> builtin_reading(const LLFormula& f) {
  BuiltinReading out;
  const LLFormula* cur = &f;
  std::vector<LLFormula> storage;
  while (cur->kind() == LLFormula::Kind::Exists) {
    out.exvars.push_back(cur->var());
    cur = &cur->body();
  }
  std::function<bool(const LLFormula&)> gather = [&](const LLFormula& x) {
    switch (x.kind()) {
      case LLFormula::Kind::One:
        return true;
      case LLFormula::Kind::Zero:
        out.store.push_back(make_false());
        return true;
      case LLFormula::Kind::Bang:
        if (x.body().kind() != LLFormula::Kind::Atom) return false;
        out.store.push_back(Atom{x.body().symbol(), x.body().args()});
        return true;
      case LLFormula::Kind::Tensor:
        return gather(x.lhs()) && gather(x.rhs());
      default:
        return false;
    }
  };
  if (!gather(*cur)) return std::nullopt;
  return out;
}

}  // namespace chrl
