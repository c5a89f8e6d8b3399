// Copyright 2026 The autosec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "autosec/attack.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "autosec/error.hpp"

namespace autosec {

namespace {

bool level_satisfies(const SystemModel& model, const std::string& capability, const std::string& have,
                     const std::string& want, bool exact) {
  if (!model.capability_schema.rank(capability, have) || !model.capability_schema.rank(capability, want)) {
    return false;
  }
  const Ordering o = compare_levels(model.capability_schema, capability, have, want);
  return exact ? o == Ordering::Equal : o != Ordering::Less;
}

using GoalId = std::tuple<std::string, std::string, std::string, bool>;

GoalId id_of(const GoalNode& g) { return {g.subject, g.capability, g.level, g.exact}; }

std::string requirements_key(const std::vector<Requirement>& reqs) {
  std::string k;
  for (const auto& r : reqs) {
    k += r.subject + "\x1f" + r.capability + "\x1f" + std::string(to_string(r.op)) + "\x1f" + r.level + "\x1e";
  }
  return k;
}

class TreeBuilder {
 public:
  TreeBuilder(const SystemModel& model, const std::vector<ThreatRule>& rules,
              const std::vector<ThreatMatch>& matches, std::size_t budget)
      : model_(model), matches_(matches), budget_(budget) {
    for (const auto& r : rules) rules_.emplace(r.id, &r);
  }

  void expand(GoalNode& goal, std::vector<GoalId>& ancestors) {
    if (++nodes_ > budget_) throw BudgetExceeded("attack tree node budget exceeded");
    ancestors.push_back(id_of(goal));
    for (const ThreatMatch* m : providers(goal)) {
      RuleNode node;
      node.rule_id = m->rule_id;
      node.match_key = m->key();
      node.leaves = leaves(*m);
      bool viable = true;
      std::set<GoalId> seen;
      for (const auto& r : m->assumptions) {
        GoalNode child{r.subject, r.capability, r.level, r.op == CmpOp::Eq, false, {}};
        const GoalId cid = id_of(child);
        if (!seen.insert(cid).second) continue;
        if (std::find(ancestors.begin(), ancestors.end(), cid) != ancestors.end()) {
          viable = false;
          break;
        }
        expand(child, ancestors);
        if (!child.feasible) {
          viable = false;
          break;
        }
        node.children.push_back(std::move(child));
      }
      if (viable) goal.children.push_back(std::move(node));
    }
    ancestors.pop_back();
    goal.feasible = !goal.children.empty();
  }

 private:
  // One instantiation per (rule, prerequisite set); the shortest, then
  // lexicographically first path stands in for its alternatives.
  std::vector<const ThreatMatch*> providers(const GoalNode& goal) const {
    std::vector<const ThreatMatch*> candidates;
    for (const auto& m : matches_) {
      const bool provides = std::any_of(m.granted.begin(), m.granted.end(), [&](const Grant& g) {
        return g.subject == goal.subject && g.capability == goal.capability &&
               level_satisfies(model_, g.capability, g.level, goal.level, goal.exact);
      });
      if (provides) candidates.push_back(&m);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const ThreatMatch* a, const ThreatMatch* b) {
      if (a->path.size() != b->path.size()) return a->path.size() < b->path.size();
      return a->path < b->path;
    });
    std::set<std::string> keys;
    std::vector<const ThreatMatch*> out;
    for (const ThreatMatch* m : candidates) {
      if (keys.insert(m->rule_id + "\x1d" + requirements_key(m->assumptions)).second) out.push_back(m);
    }
    std::stable_sort(out.begin(), out.end(), [](const ThreatMatch* a, const ThreatMatch* b) {
      return std::tie(a->rule_id, a->path) < std::tie(b->rule_id, b->path);
    });
    return out;
  }

  std::vector<LeafCondition> leaves(const ThreatMatch& m) const {
    std::vector<LeafCondition> out;
    auto it = rules_.find(m.rule_id);
    if (it == rules_.end()) return out;
    auto add = [&](const ElementPattern& p, const std::string& element_id) {
      const Element* e = model_.find_element(element_id);
      if (e == nullptr) return;
      for (const auto& c : p.conditions) {
        std::string attribute;
        if (const auto* cmp = std::get_if<AttrCmp>(&c.node)) attribute = cmp->attribute;
        if (const auto* set = std::get_if<AttrSet>(&c.node)) attribute = set->attribute;
        if (attribute.empty()) continue;
        out.push_back({e->id, to_string(c), model_.attribute_value(*e, attribute)});
      }
    };
    const ThreatRule& rule = *it->second;
    if (const auto* ep = std::get_if<ElementPattern>(&rule.body)) {
      add(*ep, m.source());
    } else {
      const auto& fp = std::get<FlowPattern>(rule.body);
      add(fp.source, m.source());
      add(fp.target, m.target());
    }
    return out;
  }

  const SystemModel& model_;
  const std::vector<ThreatMatch>& matches_;
  std::map<std::string, const ThreatRule*> rules_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
};

void canonical(std::ostream& os, const GoalNode& goal, bool with_leaves);

std::string canonical_rule(const RuleNode& rule, bool with_leaves) {
  std::ostringstream os;
  os << "R(" << rule.rule_id;
  if (with_leaves) {
    std::vector<std::string> leaves;
    for (const auto& l : rule.leaves) leaves.push_back(l.element + ":" + l.condition + "=" + l.actual);
    std::sort(leaves.begin(), leaves.end());
    for (const auto& l : leaves) os << ';' << l;
  }
  os << ")[";
  std::vector<std::string> kids;
  for (const auto& g : rule.children) {
    std::ostringstream k;
    canonical(k, g, with_leaves);
    kids.push_back(k.str());
  }
  std::sort(kids.begin(), kids.end());
  for (const auto& k : kids) os << k;
  os << ']';
  return os.str();
}

void canonical(std::ostream& os, const GoalNode& goal, bool with_leaves) {
  os << "G(" << goal.subject << ',' << goal.capability << (goal.exact ? "==" : ">=") << goal.level
     << (goal.feasible ? "" : ",infeasible") << "){";
  std::vector<std::string> kids;
  for (const auto& r : goal.children) kids.push_back(canonical_rule(r, with_leaves));
  std::sort(kids.begin(), kids.end());
  for (const auto& k : kids) os << k;
  os << '}';
}

struct PathStep {
  const GoalNode* goal;
  const RuleNode* via;  // rule chosen below this goal, null at a leaf goal
};

void collect_paths(const GoalNode& goal, std::vector<PathStep>& prefix, std::vector<std::vector<PathStep>>& out) {
  if (goal.children.empty()) {
    prefix.push_back({&goal, nullptr});
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (const auto& rule : goal.children) {
    prefix.push_back({&goal, &rule});
    if (rule.children.empty()) {
      out.push_back(prefix);
    } else {
      for (const auto& child : rule.children) collect_paths(child, prefix, out);
    }
    prefix.pop_back();
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<std::size_t> Propagation::covering(const SystemModel& model, const Requirement& r) const {
  for (std::size_t i = 0; i < facts.size(); ++i) {
    const auto& f = facts[i];
    if (f.subject == r.subject && f.capability == r.capability &&
        level_satisfies(model, r.capability, f.level, r.level, r.op == CmpOp::Eq)) {
      return i;
    }
  }
  return std::nullopt;
}

bool Propagation::has(const std::string& subject, const std::string& capability, const std::string& level) const {
  return std::any_of(facts.begin(), facts.end(), [&](const CapabilityFact& f) {
    return f.subject == subject && f.capability == capability && f.level == level;
  });
}

Propagation propagate_matches(const SystemModel& model, const std::vector<ThreatMatch>& matches,
                              const std::vector<CapabilityFact>& entry_assumptions) {
  Propagation result;
  std::set<std::tuple<std::string, std::string, std::string>> known;
  for (const auto& a : entry_assumptions) {
    if (known.emplace(a.subject, a.capability, a.level).second) {
      CapabilityFact f = a;
      f.support.clear();
      result.facts.push_back(std::move(f));
    }
  }
  std::vector<bool> fired(matches.size(), false);
  for (;;) {
    ++result.iterations;
    Propagation earlier;
    earlier.facts = result.facts;
    bool grew = false;
    for (std::size_t i = 0; i < matches.size(); ++i) {
      if (fired[i]) continue;
      const ThreatMatch& m = matches[i];
      std::vector<std::size_t> support;
      bool ready = true;
      for (const auto& r : m.assumptions) {
        auto idx = earlier.covering(model, r);
        if (!idx) {
          ready = false;
          break;
        }
        support.push_back(*idx);
      }
      if (!ready) continue;
      fired[i] = true;
      for (const auto& g : m.granted) {
        if (!known.emplace(g.subject, g.capability, g.level).second) continue;
        result.facts.push_back({g.subject, g.capability, g.level, m.rule_id, m.key(), support});
        grew = true;
      }
    }
    if (!grew) break;
  }
  return result;
}

Propagation propagate(const SystemModel& model, const std::vector<ThreatRule>& rules,
                      const std::vector<CapabilityFact>& entry_assumptions, const FlowOptions& options) {
  return propagate_matches(model, all_matches(model, rules, options), entry_assumptions);
}

AttackTree build_attack_tree(const SystemModel& model, const std::vector<ThreatRule>& rules,
                             const std::vector<ThreatMatch>& matches, const std::string& asset_id,
                             std::size_t node_budget) {
  if (model.find_asset(asset_id) == nullptr) throw Error("unknown asset \"" + asset_id + "\"");
  AttackTree tree;
  tree.asset = asset_id;
  tree.root.subject = asset_id;

  bool chosen = false;
  for (const auto& m : matches) {
    for (const auto& g : m.granted) {
      if (g.subject == asset_id && !chosen) {
        tree.root.capability = g.capability;
        tree.root.level = g.level;
        chosen = true;
      }
    }
  }
  for (const auto& r : rules) {
    if (chosen) break;
    std::vector<const ElementPattern*> patterns;
    if (const auto* ep = std::get_if<ElementPattern>(&r.body)) {
      patterns = {ep};
    } else {
      patterns = {&std::get<FlowPattern>(r.body).source, &std::get<FlowPattern>(r.body).target};
    }
    for (const auto* p : patterns) {
      for (const auto& c : p->conditions) {
        const auto* h = std::get_if<HoldsAsset>(&c.node);
        if (h == nullptr || chosen) continue;
        for (const auto& inner : h->conditions) {
          if (const auto* pc = std::get_if<ProvidesCapability>(&inner.node); pc && !chosen) {
            tree.root.capability = pc->capability;
            tree.root.level = pc->level;
            chosen = true;
          }
        }
      }
    }
  }
  if (!chosen) return tree;

  TreeBuilder builder(model, rules, matches, node_budget);
  std::vector<GoalId> ancestors;
  builder.expand(tree.root, ancestors);
  return tree;
}

AttackTree build_attack_tree(const SystemModel& model, const std::vector<ThreatRule>& rules,
                             const std::string& asset_id, const TreeOptions& options) {
  if (model.find_asset(asset_id) == nullptr) throw Error("unknown asset \"" + asset_id + "\"");
  return build_attack_tree(model, rules, all_matches(model, rules, options.flow), asset_id, options.node_budget);
}

std::string canonical_form(const GoalNode& goal, bool with_leaves) {
  std::ostringstream os;
  canonical(os, goal, with_leaves);
  return os.str();
}

std::string tree_to_dot(const AttackTree& tree) {
  std::ostringstream os;
  os << "digraph attack_tree {\n  rankdir=BT;\n  node [fontname=\"Helvetica\"];\n";
  std::size_t next_id = 0;
  auto esc = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '\n') {
        q += "\\n";
      } else {
        if (c == '"' || c == '\\') q += '\\';
        q += c;
      }
    }
    return q + "\"";
  };
  // Edges point from child to parent so the root sits on top with rankdir=BT.
  auto emit_goal = [&](auto&& self, const GoalNode& g) -> std::size_t {
    const std::size_t id = next_id++;
    os << "  n" << id << " [shape=box" << (g.feasible ? "" : ", style=dashed") << ", label="
       << esc(g.subject + "\n" + g.capability + (g.exact ? " = " : " >= ") + g.level +
              (g.feasible ? "" : "\n(infeasible)"))
       << "];\n";
    for (const auto& r : g.children) {
      const std::size_t rid = next_id++;
      std::string label = r.rule_id;
      for (const auto& l : r.leaves) label += "\n" + l.element + ": " + l.condition + " [" + l.actual + "]";
      os << "  n" << rid << " [shape=ellipse, label=" << esc(label) << "];\n";
      os << "  n" << rid << " -> n" << id << ";\n";
      for (const auto& c : r.children) {
        const std::size_t cid = self(self, c);
        os << "  n" << cid << " -> n" << rid;
        if (r.children.size() > 1) os << " [label=\"AND\", arrowhead=none, style=bold]";
        os << ";\n";
      }
    }
    return id;
  };
  emit_goal(emit_goal, tree.root);
  os << "}\n";
  return os.str();
}

VVPlan derive_vv_plan(const SystemModel& model, const std::vector<AttackTree>& trees) {
  struct Acc {
    std::size_t paths = 0;
    std::size_t depth = static_cast<std::size_t>(-1);
    bool entry = false;
    std::set<std::string> caps;
    std::set<std::string> rules;
  };
  std::map<std::string, Acc> acc;

  for (const auto& tree : trees) {
    std::vector<std::vector<PathStep>> paths;
    std::vector<PathStep> prefix;
    if (tree.root.feasible) collect_paths(tree.root, prefix, paths);
    for (const auto& path : paths) {
      std::set<std::string> counted;
      for (std::size_t i = 0; i < path.size(); ++i) {
        const GoalNode& g = *path[i].goal;
        if (model.find_element(g.subject) == nullptr) continue;
        Acc& a = acc[g.subject];
        if (counted.insert(g.subject).second) ++a.paths;
        a.depth = std::min(a.depth, path.size() - 1 - i);
        if (i + 1 == path.size()) a.entry = true;
        a.caps.insert(g.capability + "=" + g.level);
        if (path[i].via != nullptr) a.rules.insert(path[i].via->rule_id);
      }
    }
  }

  VVPlan plan;
  for (auto& [id, a] : acc) {
    plan.entries.push_back({id, a.paths, a.depth, a.entry, {a.caps.begin(), a.caps.end()},
                            {a.rules.begin(), a.rules.end()}});
  }
  std::sort(plan.entries.begin(), plan.entries.end(), [](const VVPlanEntry& x, const VVPlanEntry& y) {
    if (x.attack_paths != y.attack_paths) return x.attack_paths > y.attack_paths;
    if (x.depth_from_entry != y.depth_from_entry) return x.depth_from_entry < y.depth_from_entry;
    return x.component < y.component;
  });
  return plan;
}

}  // namespace autosec
