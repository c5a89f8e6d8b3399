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
#include <string>
#include <vector>

#include "autosec/model.hpp"
#include "autosec/rules.hpp"
#include "autosec/threat.hpp"

namespace autosec {

/// Raise of one element attribute. Cost is the number of rank steps.
struct RepairAction {
  std::string element;
  std::string attribute;
  std::string from;
  std::string to;
  double cost = 0.0;
  bool operator==(const RepairAction&) const = default;
};

enum class RepairMode { Exact, Greedy };

struct RepairOptions {
  RepairMode mode = RepairMode::Exact;
  std::size_t node_budget = 100'000;  // search nodes before falling back to greedy
  FlowOptions flow;
};

struct RepairPlan {
  std::vector<RepairAction> actions;  // sorted by element, attribute
  double cost = 0.0;
  bool optimal = false;     // exact search completed within budget
  bool fell_back = false;   // budget ran out, plan came from the greedy pass
  std::size_t nodes = 0;    // search nodes expanded
};

/// Cheapest set of attribute raises after which no rule matches the model
/// standalone. Fixed attributes are never touched. Throws Error naming the
/// rule when some match cannot be broken by any raise.
RepairPlan repair(const SystemModel& model, const std::vector<ThreatRule>& rules, const RepairOptions& options = {});

/// Model with the plan's attribute values written in.
SystemModel apply_repair(const SystemModel& model, const RepairPlan& plan);

/// Every single raise that would stop `match` from holding on its own
/// elements, each as a bundle of actions applied together.
std::vector<std::vector<RepairAction>> breaking_actions(const SystemModel& model, const ThreatRule& rule,
                                                        const ThreatMatch& match);

}  // namespace autosec
