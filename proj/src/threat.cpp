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

#include "autosec/threat.hpp"

#include <algorithm>
#include <map>

#include "autosec/attack.hpp"

namespace autosec {

namespace {

bool asset_condition_holds(const Asset& asset, const Condition& condition) {
  const std::string value(to_string(asset.security_attribute));
  if (const auto* c = std::get_if<AttrCmp>(&condition.node)) {
    if (c->attribute != kAssetAttribute) return false;
    switch (c->op) {
      case CmpOp::Eq:
        return value == c->value;
      case CmpOp::Ne:
        return value != c->value;
      default:
        return false;
    }
  }
  if (const auto* s = std::get_if<AttrSet>(&condition.node)) {
    if (s->attribute != kAssetAttribute) return false;
    const bool in = std::find(s->values.begin(), s->values.end(), value) != s->values.end();
    return in != s->negated;
  }
  return true;
}

}  // namespace

std::string ThreatMatch::key() const {
  std::string k = rule_id + ":";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i != 0) k += ">";
    k += path[i];
  }
  return k;
}

bool attribute_condition_holds(const SystemModel& model, const Element& element, const Condition& condition) {
  if (const auto* c = std::get_if<AttrCmp>(&condition.node)) {
    const std::string value = model.attribute_value(element, c->attribute);
    switch (c->op) {
      case CmpOp::Eq:
        return value == c->value;
      case CmpOp::Ne:
        return value != c->value;
      case CmpOp::Ge:
      case CmpOp::Le: {
        auto have = model.attribute_schema.rank(c->attribute, value);
        auto want = model.attribute_schema.rank(c->attribute, c->value);
        if (!have || !want) return false;
        return c->op == CmpOp::Ge ? *have >= *want : *have <= *want;
      }
    }
  }
  if (const auto* s = std::get_if<AttrSet>(&condition.node)) {
    const std::string value = model.attribute_value(element, s->attribute);
    const bool in = std::find(s->values.begin(), s->values.end(), value) != s->values.end();
    return in != s->negated;
  }
  return true;
}

std::optional<PatternBinding> bind_pattern(const SystemModel& model, const Element& element,
                                           const ElementPattern& pattern) {
  if (element.element_type != pattern.element_type) return std::nullopt;
  PatternBinding binding;
  for (const auto& cond : pattern.conditions) {
    if (!attribute_condition_holds(model, element, cond)) return std::nullopt;
    if (const auto* r = std::get_if<RequiresCapability>(&cond.node)) {
      binding.requirements.push_back({element.id, r->capability, r->op, r->level});
    } else if (const auto* p = std::get_if<ProvidesCapability>(&cond.node)) {
      binding.grants.push_back({element.id, p->capability, p->level});
    } else if (const auto* h = std::get_if<HoldsAsset>(&cond.node)) {
      bool any = false;
      for (const auto& asset_id : element.held_assets) {
        const Asset* asset = model.find_asset(asset_id);
        if (asset == nullptr) continue;
        const bool holds = std::all_of(h->conditions.begin(), h->conditions.end(),
                                       [&](const Condition& c) { return asset_condition_holds(*asset, c); });
        if (!holds) continue;
        any = true;
        for (const auto& inner : h->conditions) {
          if (const auto* r = std::get_if<RequiresCapability>(&inner.node)) {
            binding.requirements.push_back({asset->id, r->capability, r->op, r->level});
          } else if (const auto* p = std::get_if<ProvidesCapability>(&inner.node)) {
            binding.grants.push_back({asset->id, p->capability, p->level});
          }
        }
      }
      if (!any) return std::nullopt;
    }
  }
  return binding;
}

std::vector<ThreatMatch> match_element(const SystemModel& model, const ElementPattern& pattern) {
  std::vector<ThreatMatch> out;
  for (const auto& e : model.elements) {
    auto binding = bind_pattern(model, e, pattern);
    if (!binding) continue;
    ThreatMatch m;
    m.kind = MatchKind::Element;
    m.path = {e.id};
    m.assumptions = std::move(binding->requirements);
    m.granted = std::move(binding->grants);
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), [](const ThreatMatch& a, const ThreatMatch& b) { return a.path < b.path; });
  return out;
}

std::vector<ThreatMatch> match_flow(const SystemModel& model, const FlowPattern& pattern,
                                    const FlowOptions& options) {
  return match_flow_parallel(model, pattern, options);
}

std::vector<ThreatMatch> all_matches(const SystemModel& model, const std::vector<ThreatRule>& rules,
                                     const FlowOptions& options) {
  std::vector<ThreatMatch> out;
  for (const auto& rule : rules) {
    auto matches = rule.is_flow() ? match_flow(model, std::get<FlowPattern>(rule.body), options)
                                  : match_element(model, std::get<ElementPattern>(rule.body));
    for (auto& m : matches) {
      m.rule_id = rule.id;
      out.push_back(std::move(m));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const ThreatMatch& a, const ThreatMatch& b) {
    if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
    return a.path < b.path;
  });
  return out;
}

std::size_t ThreatReport::match_count() const {
  std::size_t n = 0;
  for (const auto& f : findings) n += f.matches.size();
  return n;
}

const RuleFindings* ThreatReport::find(const std::string& rule_id) const {
  for (const auto& f : findings) {
    if (f.rule_id == rule_id) return &f;
  }
  return nullptr;
}

ThreatReport analyze(const SystemModel& model, const std::vector<ThreatRule>& rules, AnalysisMode mode,
                     const FlowOptions& options) {
  ThreatReport report;
  report.mode = mode;
  auto matches = all_matches(model, rules, options);

  if (mode == AnalysisMode::Chained) {
    const Propagation facts = propagate_matches(model, matches, {});
    std::vector<ThreatMatch> kept;
    for (auto& m : matches) {
      const bool derivable = std::all_of(m.assumptions.begin(), m.assumptions.end(),
                                         [&](const Requirement& r) { return facts.covers(model, r); });
      if (!derivable) continue;
      m.discharged = std::move(m.assumptions);
      m.assumptions.clear();
      kept.push_back(std::move(m));
    }
    matches = std::move(kept);
  }

  std::map<std::string, const ThreatRule*> by_id;
  for (const auto& r : rules) by_id.emplace(r.id, &r);
  for (auto& m : matches) {
    if (report.findings.empty() || report.findings.back().rule_id != m.rule_id) {
      const ThreatRule* rule = by_id.at(m.rule_id);
      report.findings.push_back({rule->id, rule->title, rule->severity, {}});
    }
    report.findings.back().matches.push_back(std::move(m));
  }
  return report;
}

}  // namespace autosec
