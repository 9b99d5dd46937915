#include "chrl/ll.hpp"

#include <algorithm>
#include <map>

namespace chrl {

LLFormula LLFormula::atom(std::string symbol, std::vector<Term> args) {
  LLFormula f(Kind::Atom);
  f.symbol_ = std::move(symbol);
  f.args_ = std::move(args);
  return f;
}

LLFormula LLFormula::one() { return LLFormula(Kind::One); }
LLFormula LLFormula::zero() { return LLFormula(Kind::Zero); }
LLFormula LLFormula::top() { return LLFormula(Kind::Top); }

namespace {

std::shared_ptr<const LLFormula> box(LLFormula f) {
  return std::make_shared<const LLFormula>(std::move(f));
}

}  // namespace

LLFormula LLFormula::tensor(LLFormula lhs, LLFormula rhs) {
  LLFormula f(Kind::Tensor);
  f.children_ = {box(std::move(lhs)), box(std::move(rhs))};
  return f;
}
LLFormula LLFormula::lolli(LLFormula lhs, LLFormula rhs) {
  LLFormula f(Kind::Lolli);
  f.children_ = {box(std::move(lhs)), box(std::move(rhs))};
  return f;
}
LLFormula LLFormula::with(LLFormula lhs, LLFormula rhs) {
  LLFormula f(Kind::With);
  f.children_ = {box(std::move(lhs)), box(std::move(rhs))};
  return f;
}
LLFormula LLFormula::plus(LLFormula lhs, LLFormula rhs) {
  LLFormula f(Kind::Plus);
  f.children_ = {box(std::move(lhs)), box(std::move(rhs))};
  return f;
}

LLFormula LLFormula::bang(LLFormula body) {
  LLFormula f(Kind::Bang);
  f.children_ = {box(std::move(body))};
  return f;
}

LLFormula LLFormula::forall(std::string var, LLFormula body) {
  LLFormula f(Kind::Forall);
  f.symbol_ = std::move(var);
  f.children_ = {box(std::move(body))};
  return f;
}

LLFormula LLFormula::exists(std::string var, LLFormula body) {
  LLFormula f(Kind::Exists);
  f.symbol_ = std::move(var);
  f.children_ = {box(std::move(body))};
  return f;
}

bool LLFormula::operator==(const LLFormula& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::One:
    case Kind::Zero:
    case Kind::Top:
      return true;
    case Kind::Atom:
      return symbol_ == other.symbol_ && args_ == other.args_;
    case Kind::Bang:
      return body() == other.body();
    case Kind::Forall:
    case Kind::Exists:
      return symbol_ == other.symbol_ && body() == other.body();
    default:
      return lhs() == other.lhs() && rhs() == other.rhs();
  }
}

LLFormula tensor_all(const std::vector<LLFormula>& parts) {
  if (parts.empty()) return LLFormula::one();
  LLFormula acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;)
    acc = LLFormula::tensor(parts[i], std::move(acc));
  return acc;
}

LLFormula plus_all(const std::vector<LLFormula>& parts) {
  if (parts.empty()) return LLFormula::zero();
  LLFormula acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;)
    acc = LLFormula::plus(parts[i], std::move(acc));
  return acc;
}

namespace {

void free_vars_into(const LLFormula& f, VarSet bound, VarSet& out) {
  switch (f.kind()) {
    case LLFormula::Kind::Atom:
      for (const Term& t : f.args())
        for (const std::string& v : vars_of(t))
          if (!bound.count(v)) out.insert(v);
      return;
    case LLFormula::Kind::One:
    case LLFormula::Kind::Zero:
    case LLFormula::Kind::Top:
      return;
    case LLFormula::Kind::Bang:
      free_vars_into(f.body(), bound, out);
      return;
    case LLFormula::Kind::Forall:
    case LLFormula::Kind::Exists:
      bound.insert(f.var());
      free_vars_into(f.body(), bound, out);
      return;
    default:
      free_vars_into(f.lhs(), bound, out);
      free_vars_into(f.rhs(), bound, out);
      return;
  }
}

}  // namespace

VarSet free_vars(const LLFormula& f) {
  VarSet out;
  free_vars_into(f, {}, out);
  return out;
}

LLFormula subst_formula(const Substitution& s, const LLFormula& f) {
  switch (f.kind()) {
    case LLFormula::Kind::Atom:
      return LLFormula::atom(f.symbol(), s.apply(f.args()));
    case LLFormula::Kind::One:
    case LLFormula::Kind::Zero:
    case LLFormula::Kind::Top:
      return f;
    case LLFormula::Kind::Bang:
      return LLFormula::bang(subst_formula(s, f.body()));
    case LLFormula::Kind::Forall:
    case LLFormula::Kind::Exists: {
      Substitution inner = s;
      inner.erase(f.var());
      // Capture avoidance: if any range term mentions the bound name, rename.
      bool capture = false;
      for (const auto& [v, t] : inner.map()) {
        (void)v;
        if (vars_of(t).count(f.var())) capture = true;
      }
      std::string var = f.var();
      LLFormula body = f.body();
      if (capture) {
        std::string nv = fresh_var_name();
        Substitution ren;
        ren.insert_raw(var, Term::var(nv));
        body = subst_formula(ren, body);
        var = nv;
      }
      LLFormula nb = subst_formula(inner, body);
      return f.kind() == LLFormula::Kind::Forall
                 ? LLFormula::forall(var, std::move(nb))
                 : LLFormula::exists(var, std::move(nb));
    }
    case LLFormula::Kind::Tensor:
      return LLFormula::tensor(subst_formula(s, f.lhs()), subst_formula(s, f.rhs()));
    case LLFormula::Kind::Lolli:
      return LLFormula::lolli(subst_formula(s, f.lhs()), subst_formula(s, f.rhs()));
    case LLFormula::Kind::With:
      return LLFormula::with(subst_formula(s, f.lhs()), subst_formula(s, f.rhs()));
    default:
      return LLFormula::plus(subst_formula(s, f.lhs()), subst_formula(s, f.rhs()));
  }
}

namespace {

bool alpha_eq(const LLFormula& a, const LLFormula& b,
              std::map<std::string, std::string>& ab,
              std::map<std::string, std::string>& ba) {
  if (a.kind() != b.kind()) return false;
  auto term_eq = [&](const Term& x, const Term& y) {
    std::function<bool(const Term&, const Term&)> go = [&](const Term& s,
                                                           const Term& t) {
      if (s.is_var() != t.is_var()) return false;
      if (s.is_var()) {
        auto ia = ab.find(s.name());
        auto ib = ba.find(t.name());
        if (ia != ab.end() || ib != ba.end())
          return ia != ab.end() && ib != ba.end() && ia->second == t.name() &&
                 ib->second == s.name();
        return s.name() == t.name();  // both free
      }
      if (s.name() != t.name() || s.args().size() != t.args().size()) return false;
      for (size_t i = 0; i < s.args().size(); ++i)
        if (!go(s.args()[i], t.args()[i])) return false;
      return true;
    };
    return go(x, y);
  };
  switch (a.kind()) {
    case LLFormula::Kind::One:
    case LLFormula::Kind::Zero:
    case LLFormula::Kind::Top:
      return true;
    case LLFormula::Kind::Atom: {
      if (a.symbol() != b.symbol() || a.args().size() != b.args().size())
        return false;
      for (size_t i = 0; i < a.args().size(); ++i)
        if (!term_eq(a.args()[i], b.args()[i])) return false;
      return true;
    }
    case LLFormula::Kind::Bang:
      return alpha_eq(a.body(), b.body(), ab, ba);
    case LLFormula::Kind::Forall:
    case LLFormula::Kind::Exists: {
      auto saved_a = ab.find(a.var()) != ab.end()
                         ? std::optional<std::string>(ab[a.var()])
                         : std::nullopt;
      auto saved_b = ba.find(b.var()) != ba.end()
                         ? std::optional<std::string>(ba[b.var()])
                         : std::nullopt;
      ab[a.var()] = b.var();
      ba[b.var()] = a.var();
      bool ok = alpha_eq(a.body(), b.body(), ab, ba);
      if (saved_a) ab[a.var()] = *saved_a; else ab.erase(a.var());
      if (saved_b) ba[b.var()] = *saved_b; else ba.erase(b.var());
      return ok;
    }
    default:
      return alpha_eq(a.lhs(), b.lhs(), ab, ba) &&
             alpha_eq(a.rhs(), b.rhs(), ab, ba);
  }
}

}  // namespace

bool alpha_equal(const LLFormula& a, const LLFormula& b) {
  std::map<std::string, std::string> ab, ba;
  return alpha_eq(a, b, ab, ba);
}

std::vector<LLFormula> tensor_leaves(const LLFormula& f) {
  std::vector<LLFormula> out;
  std::function<void(const LLFormula&)> go = [&](const LLFormula& x) {
    if (x.kind() == LLFormula::Kind::Tensor) {
      go(x.lhs());
      go(x.rhs());
    } else if (x.kind() != LLFormula::Kind::One) {
      out.push_back(x);
    }
  };
  go(f);
  return out;
}

bool Sequent::operator==(const Sequent& other) const {
  return consequent == other.consequent &&
         multiset_equal(antecedent, other.antecedent);
}

bool multiset_equal(const std::vector<LLFormula>& a,
                    const std::vector<LLFormula>& b) {
  auto rest = multiset_minus(a, b);
  return rest && rest->empty();
}

std::optional<std::vector<LLFormula>> multiset_minus(
    std::vector<LLFormula> a, const std::vector<LLFormula>& b) {
  for (const LLFormula& f : b) {
    auto it = std::find(a.begin(), a.end(), f);
    if (it == a.end()) return std::nullopt;
    a.erase(it);
  }
  return a;
}

}  // namespace chrl
