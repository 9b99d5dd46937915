#include "chrl/proof.hpp"

#include <functional>
#include <sstream>

#include "chrl/printer.hpp"

namespace chrl {

size_t proof_size(const ProofTree& t) {
  size_t n = 1;
  for (const ProofTree& p : t.premises) n += proof_size(p);
  return n;
}

namespace {

LLFormula subst1(const LLFormula& f, const std::string& var, const Term& t) {
  Substitution s;
  s.insert_raw(var, t);
  return subst_formula(s, f);
}

void collect_subterms(const Term& t, std::vector<Term>& out) {
  out.push_back(t);
  for (const Term& a : t.args()) collect_subterms(a, out);
}

std::vector<Term> formula_subterms(const LLFormula& f) {
  std::vector<Term> out;
  std::function<void(const LLFormula&)> walk = [&](const LLFormula& x) {
    switch (x.kind()) {
      case LLFormula::Kind::Atom:
        for (const Term& t : x.args()) collect_subterms(t, out);
        return;
      case LLFormula::Kind::Bang:
      case LLFormula::Kind::Forall:
      case LLFormula::Kind::Exists:
        walk(x.body());
        return;
      case LLFormula::Kind::One:
      case LLFormula::Kind::Zero:
      case LLFormula::Kind::Top:
        return;
      default:
        walk(x.lhs());
        walk(x.rhs());
    }
  };
  walk(f);
  return out;
}

// Infers t such that alpha[x/t] == target, trying subterms of the target.
std::optional<Term> infer_witness(const LLFormula& alpha, const std::string& x,
                                  const LLFormula& target) {
  if (!free_vars(alpha).count(x)) {
    if (alpha == target) return Term::constant("_any");
    return std::nullopt;
  }
  for (const Term& t : formula_subterms(target))
    if (subst1(alpha, x, t) == target) return t;
  return std::nullopt;
}

std::optional<std::string> infer_eigen(const LLFormula& alpha, const std::string& x,
                                       const LLFormula& target) {
  std::vector<std::string> cands(free_vars(target).begin(), free_vars(target).end());
  cands.push_back(x);
  for (const std::string& v : cands)
    if (subst1(alpha, x, Term::var(v)) == target) return v;
  return std::nullopt;
}

struct NodeCheck {
  const ProofTree& node;
  const ProperAxiomSet& axioms;

  std::optional<std::string> fail(const std::string& why) const { return why; }

  std::optional<std::string> need_premises(size_t n) const {
    if (node.premises.size() != n)
      return "expected " + std::to_string(n) + " premises, found " +
             std::to_string(node.premises.size());
    return std::nullopt;
  }

  const Sequent& conc() const { return node.conclusion; }
  const Sequent& prem(size_t i) const { return node.premises[i].conclusion; }

  std::optional<std::string> run() const;
};

std::optional<std::string> NodeCheck::run() const {
  const std::string& r = node.rule;
  const std::vector<LLFormula>& gamma = conc().antecedent;
  const LLFormula& goal = conc().consequent;

  if (r == rulename::kIdentity) {
    if (auto e = need_premises(0)) return e;
    if (gamma.size() != 1 || !(gamma[0] == goal))
      return fail("identity requires the antecedent to be exactly the consequent");
    return std::nullopt;
  }
  if (r == rulename::kROne) {
    if (auto e = need_premises(0)) return e;
    if (!gamma.empty() || goal.kind() != LLFormula::Kind::One)
      return fail("r-one requires an empty antecedent and consequent 1");
    return std::nullopt;
  }
  if (r == rulename::kLZero) {
    if (auto e = need_premises(0)) return e;
    if (gamma.size() != 1 || gamma[0].kind() != LLFormula::Kind::Zero)
      return fail("l-zero requires the antecedent to be exactly 0");
    return std::nullopt;
  }
  if (r == rulename::kRTop) {
    if (auto e = need_premises(0)) return e;
    if (goal.kind() != LLFormula::Kind::Top)
      return fail("r-top requires consequent top");
    return std::nullopt;
  }
  if (r == rulename::kSigmaCT || r == rulename::kSigmaEq || r == rulename::kSigmaP) {
    if (auto e = need_premises(0)) return e;
    return axioms.validate(r, conc(), node.inst);
  }
  if (r == rulename::kCut) {
    if (auto e = need_premises(2)) return e;
    if (!(prem(1).consequent == goal))
      return fail("cut: right premise consequent differs from conclusion");
    const LLFormula& alpha = prem(0).consequent;
    auto delta = multiset_minus(prem(1).antecedent, {alpha});
    if (!delta) return fail("cut: cut formula missing from right premise");
    std::vector<LLFormula> joined = prem(0).antecedent;
    joined.insert(joined.end(), delta->begin(), delta->end());
    if (!multiset_equal(joined, gamma))
      return fail("cut: context mismatch");
    return std::nullopt;
  }
  if (r == rulename::kLTensor) {
    if (auto e = need_premises(1)) return e;
    if (!(prem(0).consequent == goal)) return fail("l-tensor: consequent changed");
    for (size_t i = 0; i < gamma.size(); ++i) {
      if (gamma[i].kind() != LLFormula::Kind::Tensor) continue;
      std::vector<LLFormula> want = gamma;
      want.erase(want.begin() + i);
      want.push_back(gamma[i].lhs());
      want.push_back(gamma[i].rhs());
      if (multiset_equal(want, prem(0).antecedent)) return std::nullopt;
    }
    return fail("l-tensor: no tensor formula splits into the premise context");
  }
  if (r == rulename::kRTensor) {
    if (auto e = need_premises(2)) return e;
    if (goal.kind() != LLFormula::Kind::Tensor)
      return fail("r-tensor: consequent is not a tensor");
    if (!(prem(0).consequent == goal.lhs()) || !(prem(1).consequent == goal.rhs()))
      return fail("r-tensor: premise consequents do not match the factors");
    std::vector<LLFormula> joined = prem(0).antecedent;
    joined.insert(joined.end(), prem(1).antecedent.begin(), prem(1).antecedent.end());
    if (!multiset_equal(joined, gamma)) return fail("r-tensor: context split mismatch");
    return std::nullopt;
  }
  if (r == rulename::kLOne) {
    if (auto e = need_premises(1)) return e;
    if (!(prem(0).consequent == goal)) return fail("l-one: consequent changed");
    auto rest = multiset_minus(gamma, {LLFormula::one()});
    if (!rest) return fail("l-one: no unit in the antecedent");
    if (!multiset_equal(*rest, prem(0).antecedent))
      return fail("l-one: context mismatch");
    return std::nullopt;
  }
  if (r == rulename::kLLolli) {
    if (auto e = need_premises(2)) return e;
    if (!(prem(1).consequent == goal))
      return fail("l-lolli: right premise consequent differs from conclusion");
    for (size_t i = 0; i < gamma.size(); ++i) {
      if (gamma[i].kind() != LLFormula::Kind::Lolli) continue;
      if (!(prem(0).consequent == gamma[i].lhs())) continue;
      auto delta = multiset_minus(prem(1).antecedent, {gamma[i].rhs()});
      if (!delta) continue;
      std::vector<LLFormula> rest = gamma;
      rest.erase(rest.begin() + i);
      std::vector<LLFormula> joined = prem(0).antecedent;
      joined.insert(joined.end(), delta->begin(), delta->end());
      if (multiset_equal(joined, rest)) return std::nullopt;
    }
    return fail("l-lolli: no implication in the context fits the premises");
  }
  if (r == rulename::kRLolli) {
    if (auto e = need_premises(1)) return e;
    if (goal.kind() != LLFormula::Kind::Lolli)
      return fail("r-lolli: consequent is not an implication");
    if (!(prem(0).consequent == goal.rhs()))
      return fail("r-lolli: premise consequent is not the codomain");
    std::vector<LLFormula> want = gamma;
    want.push_back(goal.lhs());
    if (!multiset_equal(want, prem(0).antecedent))
      return fail("r-lolli: premise context must add the domain");
    return std::nullopt;
  }
  if (r == rulename::kRBang) {
    if (auto e = need_premises(1)) return e;
    if (goal.kind() != LLFormula::Kind::Bang)
      return fail("r-bang: consequent is not banged");
    for (const LLFormula& f : gamma)
      if (f.kind() != LLFormula::Kind::Bang)
        return fail("r-bang: context contains an unbanged formula");
    if (!(prem(0).consequent == goal.body()))
      return fail("r-bang: premise consequent mismatch");
    if (!multiset_equal(gamma, prem(0).antecedent))
      return fail("r-bang: context changed");
    return std::nullopt;
  }
  if (r == rulename::kDereliction || r == rulename::kWeakening ||
      r == rulename::kContraction) {
    if (auto e = need_premises(1)) return e;
    if (!(prem(0).consequent == goal)) return fail(r + ": consequent changed");
    for (size_t i = 0; i < gamma.size(); ++i) {
      if (gamma[i].kind() != LLFormula::Kind::Bang) continue;
      std::vector<LLFormula> want = gamma;
      if (r == rulename::kDereliction) {
        want[i] = gamma[i].body();
      } else if (r == rulename::kWeakening) {
        want.erase(want.begin() + i);
      } else {
        want.push_back(gamma[i]);
      }
      if (multiset_equal(want, prem(0).antecedent)) return std::nullopt;
    }
    return fail(r + ": no banged formula in the context fits the premise");
  }
  if (r == rulename::kLWith1 || r == rulename::kLWith2) {
    if (auto e = need_premises(1)) return e;
    if (!(prem(0).consequent == goal)) return fail(r + ": consequent changed");
    bool first = r == rulename::kLWith1;
    for (size_t i = 0; i < gamma.size(); ++i) {
      if (gamma[i].kind() != LLFormula::Kind::With) continue;
      std::vector<LLFormula> want = gamma;
      want[i] = first ? gamma[i].lhs() : gamma[i].rhs();
      if (multiset_equal(want, prem(0).antecedent)) return std::nullopt;
    }
    return fail(r + ": no with-formula in the context fits the premise");
  }
  if (r == rulename::kRWith) {
    if (auto e = need_premises(2)) return e;
    if (goal.kind() != LLFormula::Kind::With)
      return fail("r-with: consequent is not a with");
    if (!(prem(0).consequent == goal.lhs()) || !(prem(1).consequent == goal.rhs()))
      return fail("r-with: premise consequents do not match");
    if (!multiset_equal(gamma, prem(0).antecedent) ||
        !multiset_equal(gamma, prem(1).antecedent))
      return fail("r-with: both premises must keep the full context");
    return std::nullopt;
  }
  if (r == rulename::kLPlus) {
    if (auto e = need_premises(2)) return e;
    if (!(prem(0).consequent == goal) || !(prem(1).consequent == goal))
      return fail("l-plus: premise consequents must equal the conclusion");
    for (size_t i = 0; i < gamma.size(); ++i) {
      if (gamma[i].kind() != LLFormula::Kind::Plus) continue;
      std::vector<LLFormula> w1 = gamma, w2 = gamma;
      w1[i] = gamma[i].lhs();
      w2[i] = gamma[i].rhs();
      if (multiset_equal(w1, prem(0).antecedent) &&
          multiset_equal(w2, prem(1).antecedent))
        return std::nullopt;
    }
    return fail("l-plus: no plus-formula in the context fits the premises");
  }
  if (r == rulename::kRPlus1 || r == rulename::kRPlus2) {
    if (auto e = need_premises(1)) return e;
    if (goal.kind() != LLFormula::Kind::Plus)
      return fail(r + ": consequent is not a plus");
    const LLFormula& pick =
        r == rulename::kRPlus1 ? goal.lhs() : goal.rhs();
    if (!(prem(0).consequent == pick))
      return fail(r + ": premise consequent is not the chosen disjunct");
    if (!multiset_equal(gamma, prem(0).antecedent))
      return fail(r + ": context changed");
    return std::nullopt;
  }
  if (r == rulename::kLForall) {
    if (auto e = need_premises(1)) return e;
    if (!(prem(0).consequent == goal)) return fail("l-forall: consequent changed");
    for (size_t i = 0; i < gamma.size(); ++i) {
      if (gamma[i].kind() != LLFormula::Kind::Forall) continue;
      std::vector<LLFormula> rest = gamma;
      rest.erase(rest.begin() + i);
      // premise context = rest + alpha[x/t]
      for (size_t j = 0; j < prem(0).antecedent.size(); ++j) {
        std::vector<LLFormula> prest = prem(0).antecedent;
        LLFormula cand = prest[j];
        prest.erase(prest.begin() + j);
        if (!multiset_equal(prest, rest)) continue;
        if (node.inst.term) {
          if (subst1(gamma[i].body(), gamma[i].var(), *node.inst.term) == cand)
            return std::nullopt;
        } else if (infer_witness(gamma[i].body(), gamma[i].var(), cand)) {
          return std::nullopt;
        }
      }
    }
    return fail("l-forall: no universal formula instantiates to the premise");
  }
  if (r == rulename::kRExists) {
    if (auto e = need_premises(1)) return e;
    if (goal.kind() != LLFormula::Kind::Exists)
      return fail("r-exists: consequent is not existential");
    if (!multiset_equal(gamma, prem(0).antecedent))
      return fail("r-exists: context changed");
    const LLFormula& cand = prem(0).consequent;
    if (node.inst.term) {
      if (subst1(goal.body(), goal.var(), *node.inst.term) == cand)
        return std::nullopt;
      return fail("r-exists: witness term does not produce the premise");
    }
    if (infer_witness(goal.body(), goal.var(), cand)) return std::nullopt;
    return fail("r-exists: no witness term produces the premise");
  }
  if (r == rulename::kRForall) {
    if (auto e = need_premises(1)) return e;
    if (goal.kind() != LLFormula::Kind::Forall)
      return fail("r-forall: consequent is not universal");
    if (!multiset_equal(gamma, prem(0).antecedent))
      return fail("r-forall: context changed");
    std::optional<std::string> eigen = node.inst.var;
    if (!eigen) eigen = infer_eigen(goal.body(), goal.var(), prem(0).consequent);
    if (!eigen) return fail("r-forall: no eigenvariable produces the premise");
    if (!(subst1(goal.body(), goal.var(), Term::var(*eigen)) == prem(0).consequent))
      return fail("r-forall: eigenvariable does not produce the premise");
    VarSet banned;
    for (const LLFormula& f : gamma)
      for (const std::string& v : free_vars(f)) banned.insert(v);
    for (const std::string& v : free_vars(goal)) banned.insert(v);
    if (banned.count(*eigen))
      return fail("r-forall: eigenvariable occurs free in the conclusion");
    return std::nullopt;
  }
  if (r == rulename::kLExists) {
    if (auto e = need_premises(1)) return e;
    if (!(prem(0).consequent == goal)) return fail("l-exists: consequent changed");
    for (size_t i = 0; i < gamma.size(); ++i) {
      if (gamma[i].kind() != LLFormula::Kind::Exists) continue;
      std::vector<LLFormula> rest = gamma;
      rest.erase(rest.begin() + i);
      for (size_t j = 0; j < prem(0).antecedent.size(); ++j) {
        std::vector<LLFormula> prest = prem(0).antecedent;
        LLFormula cand = prest[j];
        prest.erase(prest.begin() + j);
        if (!multiset_equal(prest, rest)) continue;
        std::optional<std::string> eigen = node.inst.var;
        if (!eigen) eigen = infer_eigen(gamma[i].body(), gamma[i].var(), cand);
        if (!eigen) continue;
        if (!(subst1(gamma[i].body(), gamma[i].var(), Term::var(*eigen)) == cand))
          continue;
        VarSet banned;
        for (const LLFormula& f : rest)
          for (const std::string& v : free_vars(f)) banned.insert(v);
        for (const std::string& v : free_vars(gamma[i])) banned.insert(v);
        for (const std::string& v : free_vars(goal)) banned.insert(v);
        if (banned.count(*eigen)) continue;
        return std::nullopt;
      }
    }
    return fail("l-exists: no existential formula opens to the premise");
  }
  return fail("unknown inference rule '" + r + "'");
}

}  // namespace

CheckResult check_proof(const ProofTree& t, const ProperAxiomSet& axioms) {
  CheckResult out;
  std::function<bool(const ProofTree&, const std::string&)> walk =
      [&](const ProofTree& node, const std::string& path) {
        NodeCheck chk{node, axioms};
        if (auto err = chk.run()) {
          out.valid = false;
          out.path = path;
          out.reason = *err + " [" + print_sequent(node.conclusion) + "]";
          return false;
        }
        for (size_t i = 0; i < node.premises.size(); ++i) {
          std::string sub = path.empty() ? std::to_string(i)
                                         : path + "." + std::to_string(i);
          if (!walk(node.premises[i], sub)) return false;
        }
        return true;
      };
  walk(t, "");
  return out;
}

namespace {

bool match_formula_vars(const LLFormula& pattern, const LLFormula& target,
                        std::map<std::string, std::string>& map);

bool match_term_vars(const Term& p, const Term& t,
                     std::map<std::string, std::string>& map) {
  if (p.is_var()) {
    if (!t.is_var()) return false;
    auto it = map.find(p.name());
    if (it != map.end()) return it->second == t.name();
    map.emplace(p.name(), t.name());
    return true;
  }
  if (t.is_var() || p.name() != t.name() || p.args().size() != t.args().size())
    return false;
  for (size_t i = 0; i < p.args().size(); ++i)
    if (!match_term_vars(p.args()[i], t.args()[i], map)) return false;
  return true;
}

bool match_formula_vars(const LLFormula& pattern, const LLFormula& target,
                        std::map<std::string, std::string>& map) {
  if (pattern.kind() != target.kind()) return false;
  switch (pattern.kind()) {
    case LLFormula::Kind::One:
    case LLFormula::Kind::Zero:
    case LLFormula::Kind::Top:
      return true;
    case LLFormula::Kind::Atom: {
      if (pattern.symbol() != target.symbol() ||
          pattern.args().size() != target.args().size())
        return false;
      for (size_t i = 0; i < pattern.args().size(); ++i)
        if (!match_term_vars(pattern.args()[i], target.args()[i], map))
          return false;
      return true;
    }
    case LLFormula::Kind::Bang:
      return match_formula_vars(pattern.body(), target.body(), map);
    case LLFormula::Kind::Forall:
    case LLFormula::Kind::Exists: {
      auto it = map.find(pattern.var());
      if (it != map.end()) {
        if (it->second != target.var()) return false;
      } else {
        map.emplace(pattern.var(), target.var());
      }
      return match_formula_vars(pattern.body(), target.body(), map);
    }
    default:
      return match_formula_vars(pattern.lhs(), target.lhs(), map) &&
             match_formula_vars(pattern.rhs(), target.rhs(), map);
  }
}

bool injective(const std::map<std::string, std::string>& map) {
  std::set<std::string> seen;
  for (const auto& [k, v] : map) {
    (void)k;
    if (!seen.insert(v).second) return false;
  }
  return true;
}

}  // namespace

std::optional<std::string> ProperAxiomSet::validate(const std::string& tag,
                                                    const Sequent& s,
                                                    const ProofInst& inst) const {
  if (s.antecedent.size() != 1)
    return "proper axiom requires a single antecedent formula";
  const LLFormula& lhs = s.antecedent[0];
  const LLFormula& rhs = s.consequent;

  if (tag == rulename::kSigmaCT) {
    if (!ct_) return "sigma-ct: no constraint theory available";
    auto l = builtin_reading(lhs);
    auto r = builtin_reading(rhs);
    if (!l || !r) return "sigma-ct: sides are not built-in readings";
    Substitution renl, renr;
    for (const std::string& v : l->exvars) renl.insert_raw(v, Term::var(fresh_var_name()));
    for (const std::string& v : r->exvars) renr.insert_raw(v, Term::var(fresh_var_name()));
    Store lb = apply_subst(renl, l->store);
    Store rb = apply_subst(renr, r->store);
    VarSet ex;
    for (const std::string& v : r->exvars) ex.insert(renr.apply(Term::var(v)).name());
    if (!entails(lb, ex, rb, *ct_))
      return "sigma-ct: the CT judgement does not hold";
    return std::nullopt;
  }

  if (tag == rulename::kSigmaEq) {
    auto views = [](const LLFormula& f)
        -> std::optional<std::pair<Atom, Atom>> {
      if (f.kind() != LLFormula::Kind::Tensor) return std::nullopt;
      const LLFormula& a = f.lhs();
      const LLFormula& e = f.rhs();
      if (a.kind() != LLFormula::Kind::Atom) return std::nullopt;
      if (e.kind() != LLFormula::Kind::Bang ||
          e.body().kind() != LLFormula::Kind::Atom)
        return std::nullopt;
      Atom eq{e.body().symbol(), e.body().args()};
      if (eq.symbol != kEqSymbol || eq.args.size() != 2) return std::nullopt;
      return std::make_pair(Atom{a.symbol(), a.args()}, eq);
    };
    auto lv = views(lhs);
    auto rv = views(rhs);
    if (!lv || !rv) return "sigma-eq: sides do not match the rewrite schema";
    const auto& [la, leq] = *lv;
    const auto& [ra, req] = *rv;
    if (!(leq == req)) return "sigma-eq: the equation must be preserved";
    if (la.symbol != ra.symbol || la.args.size() != ra.args.size())
      return "sigma-eq: constraint symbol mismatch";
    const Term& t = leq.args[0];
    const Term& u = leq.args[1];
    size_t diffs = 0;
    bool anchored = false;
    for (size_t j = 0; j < la.args.size(); ++j) {
      if (la.args[j] == ra.args[j]) {
        if (la.args[j] == t && ra.args[j] == u) anchored = true;
        continue;
      }
      ++diffs;
      if (!(la.args[j] == t && ra.args[j] == u))
        return "sigma-eq: rewritten argument must go from t to u";
      anchored = true;
    }
    if (diffs > 1) return "sigma-eq: more than one argument rewritten";
    if (!anchored) return "sigma-eq: the equation does not anchor an argument";
    return std::nullopt;
  }

  if (tag == rulename::kSigmaP) {
    if (!program_) return "sigma-p: no program available";
    for (const Rule& rule : program_->rules) {
      if (inst.rule_id && *inst.rule_id != rule.id) continue;
      Sequent schema = sigma_p_schema(rule);
      std::map<std::string, std::string> map;
      if (!match_formula_vars(schema.antecedent[0], lhs, map)) continue;
      if (!match_formula_vars(schema.consequent, rhs, map)) continue;
      if (!injective(map)) continue;
      return std::nullopt;
    }
    return "sigma-p: not a variant of any program rule";
  }

  return "unknown proper axiom tag '" + tag + "'";
}

namespace {

void print_proof_into(const ProofTree& t, int indent, std::ostringstream& os) {
  std::string pad(indent, ' ');
  os << pad << '(' << t.rule << " (sequent \"" << print_sequent(t.conclusion)
     << "\")";
  if (!t.inst.empty()) {
    os << " (inst";
    if (t.inst.term) os << " term=\"" << print_term(*t.inst.term) << '"';
    if (t.inst.var) os << " var=" << *t.inst.var;
    if (t.inst.rule_id) os << " rule=" << *t.inst.rule_id;
    os << ')';
  }
  for (const ProofTree& p : t.premises) {
    os << '\n';
    print_proof_into(p, indent + 2, os);
  }
  os << ')';
}

}  // namespace

std::string print_proof(const ProofTree& t) {
  std::ostringstream os;
  print_proof_into(t, 0, os);
  os << '\n';
  return os.str();
}

}  // namespace chrl
