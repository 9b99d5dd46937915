#include "chrl/engine.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "chrl/parser.hpp"
#include "chrl/printer.hpp"

namespace chrl {

namespace {

// Enumerates injective assignments of head atoms to distinct user store
// positions with matching symbol and arity.
void enumerate_head_matches(const Store& heads, const Store& user,
                            size_t budget_cap,
                            const std::function<void(const std::vector<size_t>&)>& yield) {
  std::vector<size_t> pick(heads.size());
  std::vector<bool> used(user.size(), false);
  size_t budget = budget_cap;
  std::function<void(size_t)> go = [&](size_t i) {
    if (budget == 0)
      throw BudgetError(BudgetError::Kind::Match, "head matching budget exceeded");
    --budget;
    if (i == heads.size()) {
      yield(pick);
      return;
    }
    for (size_t j = 0; j < user.size(); ++j) {
      if (used[j]) continue;
      if (user[j].symbol != heads[i].symbol ||
          user[j].args.size() != heads[i].args.size())
        continue;
      used[j] = true;
      pick[i] = j;
      go(i + 1);
      used[j] = false;
    }
  };
  go(0);
}

Store head_equations(const Store& heads, const Store& user,
                     const std::vector<size_t>& pick) {
  Store eqs;
  for (size_t i = 0; i < heads.size(); ++i)
    for (size_t k = 0; k < heads[i].args.size(); ++k)
      eqs.push_back(make_eq(user[pick[i]].args[k], heads[i].args[k]));
  return eqs;
}

}  // namespace

std::vector<RuleInstance> applicable(const NormalConfig& c, const Program& p,
                                     const CTheory& ct, const Limits& limits) {
  std::vector<RuleInstance> out;
  for (size_t m = 0; m < c.members.size(); ++m) {
    const NormalState& member = c.members[m];
    if (member.failed()) continue;
    for (const Rule& rule : p.rules) {
      Substitution ren = make_fresh_renaming(rule.all_vars());
      Rule variant = apply_subst(ren, rule);
      VarSet variant_vars;
      for (const std::string& v : variant.all_vars()) variant_vars.insert(v);
      Store heads = variant.kept;
      heads.insert(heads.end(), variant.removed.begin(), variant.removed.end());
      if (heads.empty() || heads.size() > member.user.size()) continue;
      enumerate_head_matches(
          heads, member.user, limits.state.match_budget,
          [&](const std::vector<size_t>& pick) {
            Store query = head_equations(heads, member.user, pick);
            size_t eq_count = query.size();
            for (const Atom& g : variant.guard) query.push_back(g);
            auto w = entails_witness(member.builtin, variant_vars, query, ct);
            if (!w) return;
            RuleInstance inst;
            inst.member = m;
            inst.rule_id = rule.id;
            inst.variant = variant;
            inst.matched = pick;
            inst.equations.assign(query.begin(), query.begin() + eq_count);
            inst.witness = finalize_witness(*w, variant_vars);
            out.push_back(std::move(inst));
          });
    }
  }
  return out;
}

ApplyResult apply_instance(const NormalConfig& c, const RuleInstance& inst,
                           const CTheory& ct, const Limits& limits) {
  const NormalState& member = c.members.at(inst.member);
  const Rule& variant = inst.variant;
  size_t kept_n = variant.kept.size();

  std::vector<int> base_sources;
  Store base_user;
  for (size_t i = 0; i < kept_n; ++i) {
    base_user.push_back(member.user[inst.matched[i]]);
    base_sources.push_back(static_cast<int>(inst.matched[i]));
  }
  std::vector<bool> matched(member.user.size(), false);
  for (size_t pos : inst.matched) matched[pos] = true;
  for (size_t j = 0; j < member.user.size(); ++j)
    if (!matched[j]) {
      base_user.push_back(member.user[j]);
      base_sources.push_back(static_cast<int>(j));
    }

  Store base_builtin = member.builtin;
  for (const Atom& a : inst.equations) base_builtin.push_back(a);
  for (const Atom& a : variant.guard) base_builtin.push_back(a);

  ApplyResult res;
  res.replaced_member = inst.member;

  std::vector<NormalState> inserted;
  std::vector<std::vector<int>> inserted_sources;
  for (const Goal& disjunct : dnf(variant.body, limits.state)) {
    auto parts = split_flat(disjunct);
    Store user = base_user;
    std::vector<int> sources = base_sources;
    for (const Atom& a : parts->user) {
      user.push_back(a);
      sources.push_back(-1);
    }
    Store builtin = base_builtin;
    for (const Atom& a : parts->builtin) builtin.push_back(a);
    NormalState raw{std::move(user), std::move(builtin), member.globals};
    NormalState norm = normalize_state(raw, ct);
    if (norm.failed()) continue;
    inserted.push_back(std::move(norm));
    inserted_sources.push_back(std::move(sources));
  }

  for (size_t i = 0; i < c.members.size(); ++i) {
    if (i == inst.member) {
      for (size_t k = 0; k < inserted.size(); ++k)
        res.post.members.push_back(inserted[k]);
    } else {
      res.post.members.push_back(c.members[i]);
    }
  }
  res.inserted_count = inserted.size();
  res.member_sources = std::move(inserted_sources);
  return res;
}

std::optional<RuleInstance> find_step_instance(const NormalConfig& pre,
                                               const std::string& rule_id,
                                               const NormalConfig& post,
                                               const Program& p, const CTheory& ct,
                                               const Limits& limits) {
  for (const RuleInstance& inst : applicable(pre, p, ct, limits)) {
    if (inst.rule_id != rule_id) continue;
    ApplyResult res = apply_instance(pre, inst, ct, limits);
    if (config_equiv(res.post, post, ct, limits.state)) return inst;
  }
  return std::nullopt;
}

bool replay(const Derivation& d, const Program& p, const CTheory& ct,
            const Limits& limits) {
  NormalConfig current = config_normalize(d.initial, ct, limits.state);
  for (const Step& step : d.steps) {
    if (!config_equiv(current, step.pre, ct, limits.state)) return false;
    if (!find_step_instance(step.pre, step.rule_id, step.post, p, ct, limits))
      return false;
    current = step.post;
  }
  return true;
}

namespace {

struct EngineNode {
  NormalConfig config;
  // Parallel to config.members: atom identities and propagation records.
  std::vector<std::vector<uint64_t>> ids;
  std::vector<std::set<std::string>> history;
};

std::string history_token(const RuleInstance& inst,
                          const std::vector<uint64_t>& member_ids) {
  std::vector<uint64_t> picked;
  for (size_t pos : inst.matched) picked.push_back(member_ids[pos]);
  std::sort(picked.begin(), picked.end());
  std::ostringstream os;
  os << inst.rule_id << ':';
  for (uint64_t id : picked) os << id << ',';
  return os.str();
}

}  // namespace

ExploreResult explore(const State& initial, const Program& p, const CTheory& ct,
                      const Limits& limits) {
  ExploreResult out;
  uint64_t next_id = 1;

  auto fresh_node = [&](const NormalConfig& cfg) {
    EngineNode node;
    node.config = cfg;
    for (const NormalState& m : cfg.members) {
      std::vector<uint64_t> ids;
      for (size_t i = 0; i < m.user.size(); ++i) ids.push_back(next_id++);
      node.ids.push_back(std::move(ids));
      node.history.emplace_back();
    }
    return node;
  };

  NormalConfig root = config_normalize(Configuration{{initial}}, ct, limits.state);
  std::vector<EngineNode> engine_nodes;
  engine_nodes.push_back(fresh_node(root));
  out.nodes.push_back(ClassNode{root, 0, std::nullopt, "", false, false});

  std::map<std::string, std::vector<size_t>> visited;
  visited[canonical_key(root)].push_back(0);

  std::deque<size_t> queue;
  queue.push_back(0);
  while (!queue.empty()) {
    size_t idx = queue.front();
    queue.pop_front();
    EngineNode node = engine_nodes[idx];

    std::vector<RuleInstance> insts = applicable(node.config, p, ct, limits);
    // Propagation history: drop instances whose record was already fired.
    std::vector<RuleInstance> active;
    for (const RuleInstance& inst : insts) {
      const Rule* rule = p.find_rule(inst.rule_id);
      bool track = limits.history && rule && rule->removed.empty();
      if (track &&
          node.history[inst.member].count(history_token(inst, node.ids[inst.member])))
        continue;
      active.push_back(inst);
    }
    out.nodes[idx].has_instances = !active.empty();
    if (active.empty()) {
      out.nodes[idx].expanded = true;
      continue;
    }
    if (out.nodes[idx].depth >= limits.depth) {
      out.complete = false;
      continue;
    }

    out.nodes[idx].expanded = true;
    for (const RuleInstance& inst : active) {
      if (out.nodes.size() >= limits.nodes) {
        out.complete = false;
        break;
      }
      ApplyResult res = apply_instance(node.config, inst, ct, limits);

      EngineNode next;
      next.config = res.post;
      const Rule* rule = p.find_rule(inst.rule_id);
      bool track = limits.history && rule && rule->removed.empty();
      std::string token = track ? history_token(inst, node.ids[inst.member]) : "";
      for (size_t i = 0; i < node.config.members.size(); ++i) {
        if (i != inst.member) {
          next.ids.push_back(node.ids[i]);
          next.history.push_back(node.history[i]);
          continue;
        }
        for (size_t d = 0; d < res.inserted_count; ++d) {
          std::vector<uint64_t> ids;
          for (int src : res.member_sources[d])
            ids.push_back(src >= 0 ? node.ids[i][static_cast<size_t>(src)]
                                   : next_id++);
          next.ids.push_back(std::move(ids));
          std::set<std::string> hist = node.history[i];
          if (track) hist.insert(token);
          next.history.push_back(std::move(hist));
        }
      }

      std::string key = canonical_key(next.config);
      auto& bucket = visited[key];
      bool seen = false;
      for (size_t other : bucket)
        if (config_equiv(out.nodes[other].config, next.config, ct, limits.state)) {
          seen = true;
          break;
        }
      if (seen) continue;
      size_t new_idx = out.nodes.size();
      bucket.push_back(new_idx);
      out.nodes.push_back(ClassNode{next.config, out.nodes[idx].depth + 1, idx,
                                    inst.rule_id, false, false});
      engine_nodes.push_back(std::move(next));
      queue.push_back(new_idx);
    }
  }
  return out;
}

Derivation ExploreResult::derivation_to(size_t node) const {
  std::vector<size_t> path;
  for (std::optional<size_t> cur = node; cur; cur = nodes[*cur].parent)
    path.push_back(*cur);
  std::reverse(path.begin(), path.end());
  Derivation d;
  d.initial = nodes[path.front()].config;
  for (size_t i = 1; i < path.size(); ++i)
    d.steps.push_back(Step{nodes[path[i]].via_rule, nodes[path[i - 1]].config,
                           nodes[path[i]].config});
  return d;
}

Observables observables(const State& initial, const Program& p, const CTheory& ct,
                        ObsKind kind, const Limits& limits) {
  ExploreResult ex = explore(initial, p, ct, limits);
  Observables out;
  out.complete = ex.complete;
  for (const ClassNode& node : ex.nodes) {
    if (kind == ObsKind::A || kind == ObsKind::S) {
      // Answers need the instance check to be meaningful; truncated nodes
      // were classified anyway.
      if (node.has_instances) continue;
      if (kind == ObsKind::S) {
        bool data_sufficient = true;
        for (const NormalState& m : node.config.members)
          if (!m.user.empty()) data_sufficient = false;
        if (!data_sufficient) continue;
      }
    }
    bool dup = false;
    for (const NormalConfig& seen : out.classes)
      if (config_equiv(seen, node.config, ct, limits.state)) {
        dup = true;
        break;
      }
    if (!dup) out.classes.push_back(node.config);
  }
  return out;
}

RunResult run_committed(const State& initial, const Program& p, const CTheory& ct,
                        const Limits& limits) {
  RunResult res;
  NormalConfig current = config_normalize(Configuration{{initial}}, ct, limits.state);
  res.derivation.initial = current;

  // Committed runs honor the propagation history along the single path.
  std::vector<std::vector<uint64_t>> ids;
  std::vector<std::set<std::string>> history;
  uint64_t next_id = 1;
  for (const NormalState& m : current.members) {
    std::vector<uint64_t> v;
    for (size_t i = 0; i < m.user.size(); ++i) v.push_back(next_id++);
    ids.push_back(std::move(v));
    history.emplace_back();
  }

  for (size_t step = 0;; ++step) {
    if (step >= limits.depth) {
      res.limit_hit = true;
      break;
    }
    std::vector<RuleInstance> insts = applicable(current, p, ct, limits);
    const RuleInstance* chosen = nullptr;
    for (const RuleInstance& inst : insts) {
      const Rule* rule = p.find_rule(inst.rule_id);
      bool track = limits.history && rule && rule->removed.empty();
      if (track && history[inst.member].count(history_token(inst, ids[inst.member])))
        continue;
      chosen = &inst;
      break;
    }
    if (!chosen) break;
    ApplyResult ar = apply_instance(current, *chosen, ct, limits);
    const Rule* rule = p.find_rule(chosen->rule_id);
    bool track = limits.history && rule && rule->removed.empty();
    std::string token =
        track ? history_token(*chosen, ids[chosen->member]) : "";

    std::vector<std::vector<uint64_t>> nids;
    std::vector<std::set<std::string>> nhist;
    for (size_t i = 0; i < current.members.size(); ++i) {
      if (i != chosen->member) {
        nids.push_back(ids[i]);
        nhist.push_back(history[i]);
        continue;
      }
      for (size_t d = 0; d < ar.inserted_count; ++d) {
        std::vector<uint64_t> v;
        for (int src : ar.member_sources[d])
          v.push_back(src >= 0 ? ids[i][static_cast<size_t>(src)] : next_id++);
        nids.push_back(std::move(v));
        std::set<std::string> h = history[i];
        if (track) h.insert(token);
        nhist.push_back(std::move(h));
      }
    }
    ids = std::move(nids);
    history = std::move(nhist);

    res.derivation.steps.push_back(Step{chosen->rule_id, current, ar.post});
    current = ar.post;
  }
  return res;
}

namespace {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const NormalConfig& c) {
  std::ostringstream os;
  os << std::hex << fnv1a(canonical_key(c));
  return os.str();
}

}  // namespace

std::string serialize_trace(const Derivation& d) {
  std::ostringstream os;
  os << "CHRL-TRACE 1\n";
  std::map<std::string, std::string> sidecar;
  auto note = [&](const NormalConfig& c) {
    std::string h = config_hash(c);
    sidecar.emplace(h, print_config(c));
    return h;
  };
  os << "INIT " << note(d.initial) << "\n";
  for (const Step& s : d.steps)
    os << "STEP " << s.rule_id << " " << note(s.pre) << " -> " << note(s.post)
       << "\n";
  os << "STATES\n";
  for (const auto& [h, text] : sidecar) os << h << ": " << text << "\n";
  return os.str();
}

Derivation parse_trace(const std::string& text, const CTheory& ct) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("CHRL-TRACE", 0) != 0)
    throw ParseError("missing CHRL-TRACE header", 1, 1);
  struct RawStep {
    std::string rule, pre, post;
  };
  std::string init_hash;
  std::vector<RawStep> raw;
  std::map<std::string, std::string> sidecar;
  bool in_states = false;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line == "STATES") {
      in_states = true;
      continue;
    }
    if (in_states) {
      size_t colon = line.find(": ");
      if (colon == std::string::npos)
        throw ParseError("malformed sidecar line", lineno, 1);
      sidecar[line.substr(0, colon)] = line.substr(colon + 2);
      continue;
    }
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "INIT") {
      ls >> init_hash;
    } else if (word == "STEP") {
      RawStep s;
      std::string arrow;
      ls >> s.rule >> s.pre >> arrow >> s.post;
      if (arrow != "->") throw ParseError("malformed STEP line", lineno, 1);
      raw.push_back(std::move(s));
    } else {
      throw ParseError("unexpected trace line '" + word + "'", lineno, 1);
    }
  }
  auto lookup = [&](const std::string& h) {
    auto it = sidecar.find(h);
    if (it == sidecar.end())
      throw ParseError("trace references unknown state hash " + h, 0, 0);
    return config_normalize(parse_config(it->second, ct), ct);
  };
  Derivation d;
  d.initial = lookup(init_hash);
  for (const RawStep& s : raw)
    d.steps.push_back(Step{s.rule, lookup(s.pre), lookup(s.post)});
  return d;
}

}  // namespace chrl
