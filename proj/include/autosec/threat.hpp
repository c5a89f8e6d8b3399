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

namespace autosec {

enum class MatchKind { Element, Flow };

/// A capability an attacker must hold on `subject` (element or asset id).
struct Requirement {
  std::string subject;
  std::string capability;
  CmpOp op = CmpOp::Ge;
  std::string level;
  bool operator==(const Requirement&) const = default;
};

/// A capability granted on `subject` when the match is exploited.
struct Grant {
  std::string subject;
  std::string capability;
  std::string level;
  bool operator==(const Grant&) const = default;
  auto operator<=>(const Grant&) const = default;
};

struct ThreatMatch {
  std::string rule_id;
  MatchKind kind = MatchKind::Element;
  // The matched element for element rules, the simple path for flow rules.
  std::vector<std::string> path;
  // Capability requirements taken as attacker assumptions.
  std::vector<Requirement> assumptions;
  // Requirements shown derivable by capability propagation (chained mode).
  std::vector<Requirement> discharged;
  std::vector<Grant> granted;

  [[nodiscard]] std::string key() const;
  [[nodiscard]] const std::string& source() const { return path.front(); }
  [[nodiscard]] const std::string& target() const { return path.back(); }
  bool operator==(const ThreatMatch&) const = default;
};

/// Result of binding one pattern to one element.
struct PatternBinding {
  std::vector<Requirement> requirements;
  std::vector<Grant> grants;
};

/// Tests attribute conditions (unset attribute reads as the lowest value).
bool attribute_condition_holds(const SystemModel& model, const Element& element, const Condition& condition);

/// Full pattern test: type, attribute conditions and HOLDS ASSET blocks.
/// Capability requirements are collected, never evaluated.
std::optional<PatternBinding> bind_pattern(const SystemModel& model, const Element& element,
                                           const ElementPattern& pattern);

struct FlowOptions {
  std::size_t max_len = 0;          // in elements; 0 means "number of elements"
  std::size_t budget = 1'000'000;   // explored path prefixes
};

std::vector<ThreatMatch> match_element(const SystemModel& model, const ElementPattern& pattern);

/// All simple directed paths from a source match to a target match whose
/// intermediate elements cover every INCLUDES pattern and whose elements
/// (endpoints included) match no INCLUDES NO pattern. Sorted by path.
/// Throws BudgetExceeded rather than return a partial list.
std::vector<ThreatMatch> match_flow(const SystemModel& model, const FlowPattern& pattern,
                                    const FlowOptions& options = {});

/// Reference kernel; match_flow runs the OpenMP one.
std::vector<ThreatMatch> match_flow_serial(const SystemModel& model, const FlowPattern& pattern,
                                           const FlowOptions& options = {});
std::vector<ThreatMatch> match_flow_parallel(const SystemModel& model, const FlowPattern& pattern,
                                             const FlowOptions& options = {});

/// Every rule matched standalone, rule ids filled in, canonical order.
std::vector<ThreatMatch> all_matches(const SystemModel& model, const std::vector<ThreatRule>& rules,
                                     const FlowOptions& options = {});

enum class AnalysisMode { Standalone, Chained };

struct RuleFindings {
  std::string rule_id;
  std::string title;
  Severity severity = Severity::Medium;
  std::vector<ThreatMatch> matches;
};

struct ThreatReport {
  AnalysisMode mode = AnalysisMode::Standalone;
  std::vector<RuleFindings> findings;  // rules with at least one match, by rule id

  [[nodiscard]] std::size_t match_count() const;
  [[nodiscard]] bool empty() const { return findings.empty(); }
  [[nodiscard]] const RuleFindings* find(const std::string& rule_id) const;
};

ThreatReport analyze(const SystemModel& model, const std::vector<ThreatRule>& rules, AnalysisMode mode,
                     const FlowOptions& options = {});

}  // namespace autosec
