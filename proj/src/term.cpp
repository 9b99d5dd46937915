#include "chrl/term.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace chrl {

Term Term::var(std::string name) {
  return Term(Kind::Var, std::move(name), {});
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (functor.empty()) throw std::invalid_argument("empty functor name");
  return Term(Kind::Compound, std::move(functor), std::move(args));
}

Term Term::integer(long long value) {
  return compound(std::to_string(value), {});
}

bool Term::is_int() const {
  if (!is_constant()) return false;
  const std::string& s = name_;
  size_t i = (s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

long long Term::int_value() const {
  return std::strtoll(name_.c_str(), nullptr, 10);
}

bool Term::operator==(const Term& other) const {
  return compare(*this, other) == 0;
}

int Term::compare(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return a.kind_ == Kind::Var ? -1 : 1;
  if (int c = a.name_.compare(b.name_); c != 0) return c < 0 ? -1 : 1;
  if (a.args_.size() != b.args_.size())
    return a.args_.size() < b.args_.size() ? -1 : 1;
  for (size_t i = 0; i < a.args_.size(); ++i)
    if (int c = compare(a.args_[i], b.args_[i]); c != 0) return c;
  return 0;
}

const Term* Substitution::lookup(const std::string& var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

namespace {

bool occurs_in(const std::string& var, const Term& term) {
  if (term.is_var()) return term.name() == var;
  for (const Term& a : term.args())
    if (occurs_in(var, a)) return true;
  return false;
}

}  // namespace

bool Substitution::bind(const std::string& var, const Term& term) {
  Term resolved = apply(term);
  if (resolved.is_var() && resolved.name() == var) return true;
  if (occurs_in(var, resolved)) return false;
  Substitution single;
  single.map_.emplace(var, resolved);
  for (auto& [v, t] : map_) t = single.apply(t);
  map_.insert_or_assign(var, std::move(resolved));
  return true;
}

bool Substitution::insert_raw(const std::string& var, const Term& term) {
  auto it = map_.find(var);
  if (it != map_.end()) return it->second == term;
  map_.emplace(var, term);
  return true;
}

Term Substitution::apply(const Term& term) const {
  if (term.is_var()) {
    const Term* bound = lookup(term.name());
    return bound ? *bound : term;
  }
  if (map_.empty()) return term;
  std::vector<Term> args;
  args.reserve(term.args().size());
  for (const Term& a : term.args()) args.push_back(apply(a));
  return Term::compound(term.name(), std::move(args));
}

std::vector<Term> Substitution::apply(const std::vector<Term>& terms) const {
  std::vector<Term> out;
  out.reserve(terms.size());
  for (const Term& t : terms) out.push_back(apply(t));
  return out;
}

bool Substitution::is_idempotent() const {
  for (const auto& [v, t] : map_) {
    (void)v;
    for (const auto& [w, unused] : map_) {
      (void)unused;
      if (occurs_in(w, t)) return false;
    }
  }
  return true;
}

Term apply_subst(const Substitution& subst, const Term& term) {
  return subst.apply(term);
}

void collect_vars(const Term& term, VarSet& out) {
  if (term.is_var()) {
    out.insert(term.name());
    return;
  }
  for (const Term& a : term.args()) collect_vars(a, out);
}

VarSet vars_of(const Term& term) {
  VarSet out;
  collect_vars(term, out);
  return out;
}

VarSet vars_of(const std::vector<Term>& terms) {
  VarSet out;
  for (const Term& t : terms) collect_vars(t, out);
  return out;
}

namespace {

bool match_into(const Term& pattern, const Term& target, Substitution& accum) {
  if (pattern.is_var()) return accum.insert_raw(pattern.name(), target);
  if (target.is_var()) return false;
  if (pattern.name() != target.name() ||
      pattern.args().size() != target.args().size())
    return false;
  for (size_t i = 0; i < pattern.args().size(); ++i)
    if (!match_into(pattern.args()[i], target.args()[i], accum)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> match_one_sided(const Term& pattern, const Term& target) {
  Substitution s;
  if (!match_into(pattern, target, s)) return std::nullopt;
  return s;
}

std::optional<Substitution> match_terms(const std::vector<Term>& patterns,
                                        const std::vector<Term>& targets) {
  if (patterns.size() != targets.size()) return std::nullopt;
  Substitution s;
  for (size_t i = 0; i < patterns.size(); ++i)
    if (!match_into(patterns[i], targets[i], s)) return std::nullopt;
  return s;
}

namespace {

bool unify_into(const Term& a, const Term& b, Substitution& s,
                const VarSet* bindable) {
  Term ra = s.apply(a);
  Term rb = s.apply(b);
  if (ra == rb) return true;
  auto can_bind = [&](const Term& t) {
    return t.is_var() && (!bindable || bindable->count(t.name()));
  };
  if (can_bind(ra)) return s.bind(ra.name(), rb);
  if (can_bind(rb)) return s.bind(rb.name(), ra);
  if (ra.is_var() || rb.is_var()) return false;
  if (ra.name() != rb.name() || ra.args().size() != rb.args().size())
    return false;
  for (size_t i = 0; i < ra.args().size(); ++i)
    if (!unify_into(ra.args()[i], rb.args()[i], s, bindable)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution s;
  if (!unify_into(a, b, s, nullptr)) return std::nullopt;
  return s;
}

std::optional<Substitution> unify_lists(const std::vector<Term>& as,
                                        const std::vector<Term>& bs) {
  if (as.size() != bs.size()) return std::nullopt;
  Substitution s;
  for (size_t i = 0; i < as.size(); ++i)
    if (!unify_into(as[i], bs[i], s, nullptr)) return std::nullopt;
  return s;
}

std::optional<Substitution> unify_restricted(const std::vector<Term>& as,
                                             const std::vector<Term>& bs,
                                             const VarSet& bindable,
                                             Substitution seed) {
  if (as.size() != bs.size()) return std::nullopt;
  for (size_t i = 0; i < as.size(); ++i)
    if (!unify_into(as[i], bs[i], seed, &bindable)) return std::nullopt;
  return seed;
}

namespace {

constexpr const char* kFreshPrefix = "_V";
std::atomic<uint64_t> g_fresh_counter{0};

}  // namespace

std::string fresh_var_name() {
  return kFreshPrefix + std::to_string(g_fresh_counter.fetch_add(1));
}

void seed_fresh_counter(uint64_t base) { g_fresh_counter.store(base); }

uint64_t fresh_counter_value() { return g_fresh_counter.load(); }

bool is_reserved_var_name(const std::string& name) {
  return name.rfind(kFreshPrefix, 0) == 0;
}

void note_parsed_var_name(const std::string& name) {
  if (!is_reserved_var_name(name)) return;
  const char* digits = name.c_str() + 2;
  char* end = nullptr;
  unsigned long long n = std::strtoull(digits, &end, 10);
  if (end != digits && *end == '\0') {
    uint64_t want = static_cast<uint64_t>(n) + 1;
    uint64_t cur = g_fresh_counter.load();
    while (cur < want && !g_fresh_counter.compare_exchange_weak(cur, want)) {
    }
  }
}

Substitution make_fresh_renaming(const VarSet& rename) {
  Substitution s;
  for (const std::string& v : rename) s.insert_raw(v, Term::var(fresh_var_name()));
  return s;
}

}  // namespace chrl
