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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "autosec/model.hpp"
#include "autosec/rules.hpp"
#include "autosec/threat.hpp"

namespace autosec {

/// An attacker capability on an element or asset. `support` indexes the
/// facts that satisfied the firing rule's requirements; entry assumptions
/// have an empty rule id.
struct CapabilityFact {
  std::string subject;
  std::string capability;
  std::string level;
  std::string rule_id;
  std::string match_key;
  std::vector<std::size_t> support;
};

struct Propagation {
  std::vector<CapabilityFact> facts;
  std::size_t iterations = 0;

  [[nodiscard]] std::optional<std::size_t> covering(const SystemModel& model, const Requirement& r) const;
  [[nodiscard]] bool covers(const SystemModel& model, const Requirement& r) const {
    return covering(model, r).has_value();
  }
  [[nodiscard]] bool has(const std::string& subject, const std::string& capability,
                         const std::string& level) const;
};

/// Least fixed point of rule firing. Each round fires every match whose
/// requirements are covered by facts from earlier rounds, so every fact
/// keeps a shortest derivation as provenance.
Propagation propagate(const SystemModel& model, const std::vector<ThreatRule>& rules,
                      const std::vector<CapabilityFact>& entry_assumptions, const FlowOptions& options = {});
Propagation propagate_matches(const SystemModel& model, const std::vector<ThreatMatch>& matches,
                              const std::vector<CapabilityFact>& entry_assumptions);

/// Attribute test shown as a leaf annotation of a rule node.
struct LeafCondition {
  std::string element;
  std::string condition;  // rendered condition text
  std::string actual;     // the element's effective value
  bool operator==(const LeafCondition&) const = default;
};

struct RuleNode;

/// OR node: any child rule instantiation achieves the goal.
struct GoalNode {
  std::string subject;
  std::string capability;
  std::string level;
  bool exact = false;  // requirement used "=" instead of ">="
  bool feasible = false;
  std::vector<RuleNode> children;
};

/// AND node: all child goals are prerequisites of this rule instantiation.
struct RuleNode {
  std::string rule_id;
  std::string match_key;
  std::vector<LeafCondition> leaves;
  std::vector<GoalNode> children;
};

struct AttackTree {
  std::string asset;
  GoalNode root;
};

struct TreeOptions {
  FlowOptions flow;
  std::size_t node_budget = 1'000'000;
};

/// Backward chaining from the asset capability provided by the first
/// HOLDS ASSET provision in the rule list. Rule instantiations whose
/// prerequisites revisit a goal on the current path, or are infeasible,
/// are pruned. Throws Error for an unknown asset.
AttackTree build_attack_tree(const SystemModel& model, const std::vector<ThreatRule>& rules,
                             const std::string& asset_id, const TreeOptions& options = {});

/// Same, over precomputed standalone matches.
AttackTree build_attack_tree(const SystemModel& model, const std::vector<ThreatRule>& rules,
                             const std::vector<ThreatMatch>& matches, const std::string& asset_id,
                             std::size_t node_budget = 1'000'000);

/// Order-insensitive rendering of the goal/rule skeleton; two trees are
/// isomorphic up to child order iff their canonical forms are equal.
std::string canonical_form(const GoalNode& goal, bool with_leaves = false);

std::string tree_to_dot(const AttackTree& tree);

struct VVPlanEntry {
  std::string component;
  std::size_t attack_paths = 0;
  std::size_t depth_from_entry = 0;
  bool entry_point = false;
  std::vector<std::string> capabilities;  // "Control=true"
  std::vector<std::string> rules;
};

struct VVPlan {
  std::vector<VVPlanEntry> entries;  // ranked
};

/// Ranks components by the number of root-to-leaf attack paths through them
/// (descending), then by distance from the entry point (ascending), then id.
VVPlan derive_vv_plan(const SystemModel& model, const std::vector<AttackTree>& trees);

}  // namespace autosec
