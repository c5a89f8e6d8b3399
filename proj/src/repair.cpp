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

#include "autosec/repair.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "autosec/error.hpp"

namespace autosec {

namespace {

using Bundle = std::vector<RepairAction>;
using State = std::map<std::pair<std::string, std::string>, std::string>;

const std::string* condition_attribute(const Condition& c) {
  if (const auto* cmp = std::get_if<AttrCmp>(&c.node)) return &cmp->attribute;
  if (const auto* set = std::get_if<AttrSet>(&c.node)) return &set->attribute;
  return nullptr;
}

// Lowest value above the current one for which the condition's truth
// becomes `want`.
std::optional<RepairAction> minimal_raise(const SystemModel& model, const Element& element, const Condition& c,
                                          bool want) {
  const std::string* attribute = condition_attribute(c);
  if (attribute == nullptr || model.attribute_schema.is_fixed(*attribute)) return std::nullopt;
  const std::string current = model.attribute_value(element, *attribute);
  const auto rank = model.attribute_schema.rank(*attribute, current);
  if (!rank) return std::nullopt;
  const auto& values = model.attribute_schema.values(*attribute);
  Element probe = element;
  for (std::size_t r = *rank + 1; r < values.size(); ++r) {
    probe.attributes[*attribute] = values[r];
    if (attribute_condition_holds(model, probe, c) == want) {
      return RepairAction{element.id, *attribute, current, values[r], static_cast<double>(r - *rank)};
    }
  }
  return std::nullopt;
}

void falsify_pattern(const SystemModel& model, const Element& element, const ElementPattern& pattern,
                     std::vector<Bundle>& out) {
  for (const auto& c : pattern.conditions) {
    if (!attribute_condition_holds(model, element, c)) continue;
    if (auto a = minimal_raise(model, element, c, false)) out.push_back({*a});
  }
}

std::optional<Bundle> satisfy_pattern(const SystemModel& model, const Element& element,
                                      const ElementPattern& pattern) {
  if (element.element_type != pattern.element_type) return std::nullopt;
  Bundle bundle;
  Element probe = element;
  for (const auto& c : pattern.conditions) {
    if (attribute_condition_holds(model, probe, c)) continue;
    if (condition_attribute(c) == nullptr) return std::nullopt;
    auto a = minimal_raise(model, probe, c, true);
    if (!a) return std::nullopt;
    a->from = model.attribute_value(element, a->attribute);
    probe.attributes[a->attribute] = a->to;
    bundle.push_back(*a);
  }
  if (bundle.empty() || !bind_pattern(model, probe, pattern)) return std::nullopt;
  // Merge repeated raises of one attribute into a single action.
  std::map<std::string, RepairAction> merged;
  for (auto& a : bundle) {
    auto [it, fresh] = merged.emplace(a.attribute, a);
    if (!fresh) it->second.to = a.to;
  }
  Bundle out;
  for (auto& [attr, a] : merged) {
    a.to = probe.attributes[attr];
    a.cost = static_cast<double>(*model.attribute_schema.rank(attr, a.to) -
                                 *model.attribute_schema.rank(attr, a.from));
    out.push_back(a);
  }
  return out;
}

double bundle_cost(const Bundle& b) {
  double c = 0.0;
  for (const auto& a : b) c += a.cost;
  return c;
}

SystemModel with_state(const SystemModel& base, const State& state) {
  SystemModel m = base;
  for (auto& e : m.elements) {
    for (auto it = state.lower_bound({e.id, ""}); it != state.end() && it->first.first == e.id; ++it) {
      e.attributes[it->first.second] = it->second;
    }
  }
  return m;
}

double state_cost(const SystemModel& base, const State& state) {
  double c = 0.0;
  for (const auto& [key, value] : state) {
    const Element* e = base.find_element(key.first);
    const auto from = base.attribute_schema.rank(key.second, base.attribute_value(*e, key.second));
    const auto to = base.attribute_schema.rank(key.second, value);
    c += static_cast<double>(*to - *from);
  }
  return c;
}

struct Remaining {
  std::vector<ThreatMatch> matches;
  std::vector<std::vector<Bundle>> options;  // parallel to matches
};

class Search {
 public:
  Search(const SystemModel& model, const std::vector<ThreatRule>& rules, const RepairOptions& options)
      : base_(model), options_(options) {
    for (const auto& r : rules) rules_by_id_.emplace(r.id, &r);
    rules_ = &rules;
  }

  Remaining remaining(const SystemModel& m) const {
    Remaining r;
    r.matches = all_matches(m, *rules_, options_.flow);
    for (const auto& match : r.matches) {
      r.options.push_back(breaking_actions(m, *rules_by_id_.at(match.rule_id), match));
    }
    return r;
  }

  static State apply(State state, const Bundle& bundle) {
    for (const auto& a : bundle) state[{a.element, a.attribute}] = a.to;
    return state;
  }

  // Depth-first branch and bound. Returns false when the node budget ran out.
  bool exact(const State& state, double cost) {
    if (++nodes_ > options_.node_budget) return false;
    if (best_ && cost >= best_cost_) return true;
    auto seen = visited_.find(state);
    if (seen != visited_.end() && seen->second <= cost) return true;
    visited_[state] = cost;

    const SystemModel m = with_state(base_, state);
    const Remaining rem = remaining(m);
    if (rem.matches.empty()) {
      best_ = state;
      best_cost_ = cost;
      return true;
    }
    if (best_ && cost + 1.0 > best_cost_ - 1e-9) return true;
    // Every repair must break each remaining match; branch on the match
    // with the fewest ways to do so.
    std::size_t pick = 0;
    for (std::size_t i = 0; i < rem.matches.size(); ++i) {
      if (rem.options[i].size() < rem.options[pick].size()) pick = i;
    }
    if (rem.options[pick].empty()) return true;
    std::vector<Bundle> branches = rem.options[pick];
    std::stable_sort(branches.begin(), branches.end(),
                     [](const Bundle& a, const Bundle& b) { return bundle_cost(a) < bundle_cost(b); });
    for (const auto& b : branches) {
      if (!exact(apply(state, b), cost + bundle_cost(b))) return false;
    }
    return true;
  }

  std::optional<State> greedy() {
    State state;
    for (;;) {
      const SystemModel m = with_state(base_, state);
      const Remaining rem = remaining(m);
      if (rem.matches.empty()) return state;
      std::vector<Bundle> candidates;
      std::set<Bundle, BundleLess> unique;
      for (const auto& opts : rem.options) {
        for (const auto& b : opts) {
          if (unique.insert(b).second) candidates.push_back(b);
        }
      }
      if (candidates.empty()) return std::nullopt;
      const Bundle* chosen = nullptr;
      double best_score = -1.0;
      for (const auto& b : candidates) {
        ++nodes_;
        const SystemModel next = with_state(base_, apply(state, b));
        const double removed = static_cast<double>(rem.matches.size()) -
                               static_cast<double>(all_matches(next, *rules_, options_.flow).size());
        const double score = removed / bundle_cost(b);
        if (score > best_score) {
          best_score = score;
          chosen = &b;
        }
      }
      state = apply(state, *chosen);
    }
  }

  const SystemModel& base() const { return base_; }
  const std::optional<State>& best() const { return best_; }
  std::size_t nodes() const { return nodes_; }

 private:
  struct BundleLess {
    bool operator()(const Bundle& a, const Bundle& b) const {
      auto key = [](const Bundle& x) {
        std::vector<std::pair<std::pair<std::string, std::string>, std::string>> k;
        for (const auto& a : x) k.push_back({{a.element, a.attribute}, a.to});
        return k;
      };
      return key(a) < key(b);
    }
  };

  const SystemModel& base_;
  const std::vector<ThreatRule>* rules_;
  std::map<std::string, const ThreatRule*> rules_by_id_;
  RepairOptions options_;
  std::map<State, double> visited_;
  std::optional<State> best_;
  double best_cost_ = 0.0;
  std::size_t nodes_ = 0;
};

RepairPlan plan_from(const SystemModel& base, const State& state) {
  RepairPlan plan;
  for (const auto& [key, value] : state) {
    const Element* e = base.find_element(key.first);
    const std::string from = base.attribute_value(*e, key.second);
    const double cost = static_cast<double>(*base.attribute_schema.rank(key.second, value) -
                                            *base.attribute_schema.rank(key.second, from));
    plan.actions.push_back({key.first, key.second, from, value, cost});
  }
  plan.cost = state_cost(base, state);
  return plan;
}

}  // namespace

std::vector<Bundle> breaking_actions(const SystemModel& model, const ThreatRule& rule, const ThreatMatch& match) {
  std::vector<Bundle> out;
  auto element = [&](const std::string& id) -> const Element& {
    const Element* e = model.find_element(id);
    if (e == nullptr) throw Error("match refers to unknown element \"" + id + "\"");
    return *e;
  };
  if (const auto* ep = std::get_if<ElementPattern>(&rule.body)) {
    falsify_pattern(model, element(match.source()), *ep, out);
  } else {
    const auto& fp = std::get<FlowPattern>(rule.body);
    falsify_pattern(model, element(match.source()), fp.source, out);
    falsify_pattern(model, element(match.target()), fp.target, out);
    for (std::size_t i = 1; i + 1 < match.path.size(); ++i) {
      const Element& e = element(match.path[i]);
      for (const auto& inc : fp.includes) {
        if (bind_pattern(model, e, inc)) falsify_pattern(model, e, inc, out);
      }
    }
    for (const auto& id : match.path) {
      const Element& e = element(id);
      for (const auto& exc : fp.excludes) {
        if (auto b = satisfy_pattern(model, e, exc)) out.push_back(std::move(*b));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Bundle& a, const Bundle& b) {
    auto key = [](const Bundle& x) {
      std::vector<std::tuple<std::string, std::string, std::string>> k;
      for (const auto& a : x) k.emplace_back(a.element, a.attribute, a.to);
      return k;
    };
    return key(a) < key(b);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RepairPlan repair(const SystemModel& model, const std::vector<ThreatRule>& rules, const RepairOptions& options) {
  Search search(model, rules, options);
  const Remaining initial = search.remaining(model);
  for (std::size_t i = 0; i < initial.matches.size(); ++i) {
    if (initial.options[i].empty()) {
      throw Error("rule '" + initial.matches[i].rule_id + "' cannot be repaired: match " +
                  initial.matches[i].key() + " holds on fixed or maximal attributes only");
    }
  }
  if (initial.matches.empty()) {
    RepairPlan plan;
    plan.optimal = true;
    return plan;
  }

  if (options.mode == RepairMode::Exact) {
    const bool finished = search.exact({}, 0.0);
    if (finished) {
      if (!search.best()) throw Error("no combination of attribute raises removes every threat match");
      RepairPlan plan = plan_from(model, *search.best());
      plan.optimal = true;
      plan.nodes = search.nodes();
      return plan;
    }
  }

  std::optional<State> found = search.greedy();
  if (options.mode == RepairMode::Exact && search.best() &&
      (!found || state_cost(model, *search.best()) <= state_cost(model, *found))) {
    found = search.best();
  }
  if (!found) throw Error("no combination of attribute raises removes every threat match");
  RepairPlan plan = plan_from(model, *found);
  plan.fell_back = options.mode == RepairMode::Exact;
  plan.nodes = search.nodes();
  return plan;
}

SystemModel apply_repair(const SystemModel& model, const RepairPlan& plan) {
  SystemModel m = model;
  for (const auto& a : plan.actions) {
    Element* e = m.find_element(a.element);
    if (e == nullptr) throw Error("repair action refers to unknown element \"" + a.element + "\"");
    e->attributes[a.attribute] = a.to;
  }
  return m;
}

}  // namespace autosec
