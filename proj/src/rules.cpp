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

#include "autosec/rules.hpp"

#include <set>
#include <sstream>

#include "autosec/lexer.hpp"
#include "autosec/model.hpp"

namespace autosec {

namespace {

class RuleParser {
 public:
  explicit RuleParser(std::string_view text) : ts_(tokenize(text)) {}

  std::vector<ThreatRule> parse() {
    std::vector<ThreatRule> rules;
    while (!ts_.at_end()) {
      ThreatRule rule;
      rule.span.begin = ts_.peek().where;
      if (ts_.accept_word("RULE")) {
        rule.id = ts_.expect_identifier();
        rule.title = ts_.expect_string();
        ts_.expect_word("SEVERITY");
        rule.severity = parse_severity();
      } else {
        rule.id = "rule" + std::to_string(rules.size() + 1);
        rule.title = rule.id;
      }
      if (rule.title.empty()) ts_.fail("rule title must not be empty");
      try {
        if (ts_.accept_word("ELEMENT")) {
          rule.body = parse_element_tail();
        } else if (ts_.accept_word("FLOW")) {
          rule.body = parse_flow_body();
        } else {
          ts_.fail("expected ELEMENT or FLOW");
        }
      } catch (const ParseError& e) {
        // Anchor the report inside the rule, even when the failure surfaced
        // at a token that belongs to the next rule or at end of input.
        SourceLocation where = e.where();
        if (ts_.peek().kind == TokenKind::End || ts_.is_word("RULE")) where = ts_.last_location();
        std::string message = e.what();
        message = message.substr(message.find(": ") + 2);
        throw ParseError(message + " (in rule '" + rule.id + "')", where);
      }
      rule.span.end = ts_.last_location();
      rules.push_back(std::move(rule));
    }
    return rules;
  }

 private:
  Severity parse_severity() {
    const std::string word = ts_.expect_identifier();
    if (word == "low") return Severity::Low;
    if (word == "medium") return Severity::Medium;
    if (word == "high") return Severity::High;
    if (word == "critical") return Severity::Critical;
    throw ParseError("unknown severity '" + word + "'", ts_.last_location());
  }

  // After the ELEMENT keyword: ":" STRING "{" condList "}"
  ElementPattern parse_element_tail() {
    ElementPattern p;
    ts_.expect_punct(":");
    p.element_type = ts_.expect_string();
    ts_.expect_punct("{");
    p.conditions = parse_cond_list();
    ts_.expect_punct("}");
    return p;
  }

  FlowPattern parse_flow_body() {
    FlowPattern flow;
    bool have_source = false;
    bool have_target = false;
    ts_.expect_punct("{");
    do {
      if (ts_.accept_word("SOURCE")) {
        if (have_source) ts_.fail("duplicate SOURCE clause");
        ts_.expect_word("ELEMENT");
        flow.source = parse_element_tail();
        have_source = true;
      } else if (ts_.accept_word("TARGET")) {
        if (have_target) ts_.fail("duplicate TARGET clause");
        ts_.expect_word("ELEMENT");
        flow.target = parse_element_tail();
        have_target = true;
      } else if (ts_.accept_word("INCLUDES")) {
        const bool negated = ts_.accept_word("NO");
        ts_.expect_word("ELEMENT");
        ElementPattern p;
        ts_.expect_punct(":");
        p.element_type = ts_.expect_string();
        if (ts_.accept_punct("{")) {
          p.conditions = parse_cond_list();
          ts_.expect_punct("}");
        }
        (negated ? flow.excludes : flow.includes).push_back(std::move(p));
      } else {
        ts_.fail("expected SOURCE, TARGET or INCLUDES");
      }
    } while (ts_.accept_punct("&"));
    ts_.expect_punct("}");
    if (!have_source) ts_.fail("FLOW rule without SOURCE ELEMENT");
    if (!have_target) ts_.fail("FLOW rule without TARGET ELEMENT");
    return flow;
  }

  std::vector<Condition> parse_cond_list() {
    std::vector<Condition> conds;
    if (ts_.is_punct("}")) return conds;
    conds.push_back(parse_cond());
    while (ts_.accept_punct("&")) conds.push_back(parse_cond());
    ts_.accept_punct(".");
    return conds;
  }

  CmpOp parse_cmp_op() {
    if (ts_.accept_punct("=")) return CmpOp::Eq;
    if (ts_.accept_punct("!=")) return CmpOp::Ne;
    if (ts_.accept_punct(">=")) return CmpOp::Ge;
    if (ts_.accept_punct("<=")) return CmpOp::Le;
    ts_.fail("expected a comparison operator");
  }

  Condition parse_cond() {
    if (ts_.accept_word("PROVIDES")) {
      ts_.expect_word("CAPABILITY");
      ProvidesCapability p;
      p.capability = ts_.expect_string();
      ts_.expect_punct(":=");
      p.level = ts_.expect_string();
      return {p};
    }
    if (ts_.accept_word("REQUIRES")) {
      ts_.expect_word("CAPABILITY");
      RequiresCapability r;
      r.capability = ts_.expect_string();
      r.op = parse_cmp_op();
      r.level = ts_.expect_string();
      return {r};
    }
    if (ts_.accept_word("HOLDS")) {
      ts_.expect_word("ASSET");
      ts_.expect_punct("{");
      HoldsAsset h;
      h.conditions = parse_cond_list();
      ts_.expect_punct("}");
      return {std::move(h)};
    }
    std::string attribute = ts_.expect_string();
    if (ts_.is_word("IN") || ts_.is_word("NOT")) {
      AttrSet s;
      s.attribute = std::move(attribute);
      s.negated = ts_.accept_word("NOT");
      ts_.expect_word("IN");
      ts_.expect_punct("[");
      s.values.push_back(ts_.expect_string());
      while (ts_.accept_punct(",")) s.values.push_back(ts_.expect_string());
      ts_.expect_punct("]");
      return {std::move(s)};
    }
    AttrCmp c;
    c.attribute = std::move(attribute);
    c.op = parse_cmp_op();
    c.value = ts_.expect_string();
    return {std::move(c)};
  }

  TokenStream ts_;
};

void write_conditions(std::ostream& os, const std::vector<Condition>& conds);

void write_condition(std::ostream& os, const Condition& cond) {
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, AttrCmp>) {
          os << quote(c.attribute) << ' ' << to_string(c.op) << ' ' << quote(c.value);
        } else if constexpr (std::is_same_v<T, AttrSet>) {
          os << quote(c.attribute) << (c.negated ? " NOT IN [" : " IN [");
          for (std::size_t i = 0; i < c.values.size(); ++i) os << (i ? ", " : "") << quote(c.values[i]);
          os << ']';
        } else if constexpr (std::is_same_v<T, RequiresCapability>) {
          os << "REQUIRES CAPABILITY " << quote(c.capability) << ' ' << to_string(c.op) << ' ' << quote(c.level);
        } else if constexpr (std::is_same_v<T, ProvidesCapability>) {
          os << "PROVIDES CAPABILITY " << quote(c.capability) << " := " << quote(c.level);
        } else {
          os << "HOLDS ASSET ";
          write_conditions(os, c.conditions);
        }
      },
      cond.node);
}

void write_conditions(std::ostream& os, const std::vector<Condition>& conds) {
  if (conds.empty()) {
    os << "{ }";
    return;
  }
  os << "{ ";
  for (std::size_t i = 0; i < conds.size(); ++i) {
    if (i != 0) os << " & ";
    write_condition(os, conds[i]);
  }
  os << " }";
}

void write_pattern(std::ostream& os, const ElementPattern& p) {
  os << "ELEMENT : " << quote(p.element_type) << ' ';
  write_conditions(os, p.conditions);
}

// -- binding -------------------------------------------------------------

class Binder {
 public:
  explicit Binder(const SystemModel& model) : model_(model) {}

  void pattern(const ElementPattern& p, const std::string& where, bool capabilities_allowed) {
    for (const auto& c : p.conditions) condition(c, where, capabilities_allowed, false);
  }

  std::vector<std::string> problems;

 private:
  void value_in_domain(const std::string& attribute, const std::string& value, const std::string& where,
                       bool asset_level) {
    if (asset_level) {
      if (attribute != kAssetAttribute) {
        problems.push_back(where + ": assets only expose \"" + std::string(kAssetAttribute) + "\", not \"" +
                           attribute + "\"");
      } else if (!parse_security_attribute(value)) {
        problems.push_back(where + ": \"" + value + "\" is not a security attribute");
      }
      return;
    }
    if (!model_.attribute_schema.rank(attribute, value)) {
      problems.push_back(where + ": value \"" + value + "\" is not in the domain of attribute \"" + attribute +
                         "\"");
    }
  }

  void capability_level(const std::string& capability, const std::string& level, const std::string& where) {
    if (!model_.capability_schema.has(capability)) {
      problems.push_back(where + ": undeclared capability \"" + capability + "\"");
    } else if (!model_.capability_schema.rank(capability, level)) {
      problems.push_back(where + ": level \"" + level + "\" is not in the domain of capability \"" + capability +
                         "\"");
    }
  }

  void condition(const Condition& cond, const std::string& where, bool capabilities_allowed, bool asset_level) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, AttrCmp>) {
            value_in_domain(c.attribute, c.value, where, asset_level);
            if (asset_level && (c.op == CmpOp::Ge || c.op == CmpOp::Le)) {
              problems.push_back(where + ": security attributes are unordered");
            }
          } else if constexpr (std::is_same_v<T, AttrSet>) {
            for (const auto& v : c.values) value_in_domain(c.attribute, v, where, asset_level);
          } else if constexpr (std::is_same_v<T, RequiresCapability>) {
            if (!capabilities_allowed) problems.push_back(where + ": capability clause not allowed here");
            if (c.op != CmpOp::Ge && c.op != CmpOp::Eq) {
              problems.push_back(where + ": REQUIRES CAPABILITY supports only >= and =");
            }
            capability_level(c.capability, c.level, where);
          } else if constexpr (std::is_same_v<T, ProvidesCapability>) {
            if (!capabilities_allowed) problems.push_back(where + ": capability clause not allowed here");
            capability_level(c.capability, c.level, where);
          } else {
            if (asset_level) problems.push_back(where + ": nested HOLDS ASSET");
            for (const auto& inner : c.conditions) condition(inner, where, capabilities_allowed, true);
          }
        },
        cond.node);
  }

  const SystemModel& model_;
};

}  // namespace

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq:
      return "=";
    case CmpOp::Ne:
      return "!=";
    case CmpOp::Ge:
      return ">=";
    case CmpOp::Le:
      return "<=";
  }
  return "";
}

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Low:
      return "low";
    case Severity::Medium:
      return "medium";
    case Severity::High:
      return "high";
    case Severity::Critical:
      return "critical";
  }
  return "";
}

std::string to_string(const Condition& condition) {
  std::ostringstream os;
  write_condition(os, condition);
  return os.str();
}

std::vector<ThreatRule> parse_rules(std::string_view text) { return RuleParser(text).parse(); }

std::vector<ThreatRule> load_rules(const std::string& path) { return parse_rules(read_file(path)); }

std::string serialize_rules(const std::vector<ThreatRule>& rules) {
  std::ostringstream os;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    if (i != 0) os << '\n';
    os << "RULE " << r.id << ' ' << quote(r.title) << " SEVERITY " << to_string(r.severity) << '\n';
    if (const auto* e = std::get_if<ElementPattern>(&r.body)) {
      write_pattern(os, *e);
      os << '\n';
      continue;
    }
    const auto& f = std::get<FlowPattern>(r.body);
    os << "FLOW {\n    SOURCE ";
    write_pattern(os, f.source);
    os << " &\n    TARGET ";
    write_pattern(os, f.target);
    auto clause = [&](const ElementPattern& p, bool negated) {
      os << " &\n    INCLUDES " << (negated ? "NO " : "") << "ELEMENT : " << quote(p.element_type);
      if (!p.conditions.empty()) {
        os << ' ';
        write_conditions(os, p.conditions);
      }
    };
    for (const auto& p : f.includes) clause(p, false);
    for (const auto& p : f.excludes) clause(p, true);
    os << " }\n";
  }
  return os.str();
}

void bind_rules(const std::vector<ThreatRule>& rules, const SystemModel& model) {
  Binder binder(model);
  std::set<std::string> seen;
  for (const auto& r : rules) {
    const std::string where = "rule '" + r.id + "'";
    if (!seen.insert(r.id).second) binder.problems.push_back(where + ": duplicate rule id");
    if (const auto* e = std::get_if<ElementPattern>(&r.body)) {
      binder.pattern(*e, where, true);
      continue;
    }
    const auto& f = std::get<FlowPattern>(r.body);
    binder.pattern(f.source, where + " SOURCE", true);
    binder.pattern(f.target, where + " TARGET", true);
    for (const auto& p : f.includes) binder.pattern(p, where + " INCLUDES", false);
    for (const auto& p : f.excludes) binder.pattern(p, where + " INCLUDES NO", false);
  }
  if (!binder.problems.empty()) throw ValidationError(std::move(binder.problems));
}

std::vector<ProvidesCapability> provisions(const ElementPattern& pattern) {
  std::vector<ProvidesCapability> out;
  for (const auto& c : pattern.conditions) {
    if (const auto* p = std::get_if<ProvidesCapability>(&c.node)) out.push_back(*p);
  }
  return out;
}

}  // namespace autosec
