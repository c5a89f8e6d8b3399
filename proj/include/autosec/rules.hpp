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

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "autosec/error.hpp"

namespace autosec {

struct SystemModel;

enum class CmpOp { Eq, Ne, Ge, Le };
enum class Severity { Low, Medium, High, Critical };

std::string_view to_string(CmpOp op);
std::string_view to_string(Severity s);

/// Name of the pseudo-attribute that HOLDS ASSET blocks test.
inline constexpr std::string_view kAssetAttribute = "Cybersecurity Attribute";

struct Condition;

struct AttrCmp {
  std::string attribute;
  CmpOp op = CmpOp::Eq;
  std::string value;
  bool operator==(const AttrCmp&) const = default;
};

struct AttrSet {
  std::string attribute;
  bool negated = false;  // NOT IN
  std::vector<std::string> values;
  bool operator==(const AttrSet&) const = default;
};

struct RequiresCapability {
  std::string capability;
  CmpOp op = CmpOp::Ge;
  std::string level;
  bool operator==(const RequiresCapability&) const = default;
};

struct ProvidesCapability {
  std::string capability;
  std::string level;
  bool operator==(const ProvidesCapability&) const = default;
};

struct HoldsAsset {
  std::vector<Condition> conditions;
  bool operator==(const HoldsAsset&) const;
};

struct Condition {
  std::variant<AttrCmp, AttrSet, RequiresCapability, ProvidesCapability, HoldsAsset> node;
  bool operator==(const Condition&) const = default;
};

inline bool HoldsAsset::operator==(const HoldsAsset& other) const { return conditions == other.conditions; }

struct ElementPattern {
  std::string element_type;
  std::vector<Condition> conditions;
  bool operator==(const ElementPattern&) const = default;
};

struct FlowPattern {
  ElementPattern source;
  ElementPattern target;
  std::vector<ElementPattern> includes;
  std::vector<ElementPattern> excludes;
  bool operator==(const FlowPattern&) const = default;
};

struct SourceSpan {
  SourceLocation begin;
  SourceLocation end;
};

struct ThreatRule {
  std::string id;
  std::string title;
  Severity severity = Severity::Medium;
  std::variant<ElementPattern, FlowPattern> body;
  SourceSpan span;  // not part of equality

  [[nodiscard]] bool is_flow() const { return std::holds_alternative<FlowPattern>(body); }
  bool operator==(const ThreatRule& o) const {
    return id == o.id && title == o.title && severity == o.severity && body == o.body;
  }
};

/// Parses a threat database. Each rule may be preceded by a header line
///   RULE <id> "<title>" SEVERITY low|medium|high|critical
/// Rules without a header get id "rule<N>" (1-based position), their id as
/// title and medium severity.
std::vector<ThreatRule> parse_rules(std::string_view text);
std::vector<ThreatRule> load_rules(const std::string& path);

/// Canonical text; parse_rules(serialize_rules(r)) == r.
std::string serialize_rules(const std::vector<ThreatRule>& rules);

/// Checks rule values and capability levels against the model's schemas.
/// Throws ValidationError listing every offending condition.
void bind_rules(const std::vector<ThreatRule>& rules, const SystemModel& model);

/// Canonical text of one condition, as serialize_rules writes it.
std::string to_string(const Condition& condition);

/// (capability, level) pairs provided directly by a pattern (not via assets).
std::vector<ProvidesCapability> provisions(const ElementPattern& pattern);

}  // namespace autosec
