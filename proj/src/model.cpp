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

#include "autosec/model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "autosec/error.hpp"
#include "autosec/lexer.hpp"

namespace autosec {

namespace {

constexpr std::string_view kModelHeader = "autosec-model";
constexpr std::string_view kModelVersion = "1";

const std::vector<std::string> kBoolean = {"false", "true"};
const std::vector<std::string> kAccess = {"Access", "Read", "Modify", "Control"};

bool has_duplicates(std::vector<std::string> values) {
  std::sort(values.begin(), values.end());
  return std::adjacent_find(values.begin(), values.end()) != values.end();
}

std::vector<std::string> parse_string_list(TokenStream& ts) {
  std::vector<std::string> out;
  ts.expect_punct("[");
  if (!ts.is_punct("]")) {
    out.push_back(ts.expect_string());
    while (ts.accept_punct(",")) out.push_back(ts.expect_string());
  }
  ts.expect_punct("]");
  return out;
}

// Parses "{ "k" = "v" ; ... }". Duplicate keys are reported to `problems`.
AttributeMap parse_attribute_block(TokenStream& ts, const std::string& owner,
                                   std::vector<std::string>& problems) {
  AttributeMap attrs;
  ts.expect_punct("{");
  while (!ts.is_punct("}")) {
    std::string key = ts.expect_string();
    ts.expect_punct("=");
    std::string value = ts.expect_string();
    if (!attrs.emplace(key, value).second) {
      problems.push_back(owner + ": duplicate attribute \"" + key + "\"");
    }
    if (!ts.accept_punct(";")) break;
  }
  ts.expect_punct("}");
  return attrs;
}

void write_string_list(std::ostream& os, const std::vector<std::string>& values) {
  os << '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != 0) os << ", ";
    os << quote(values[i]);
  }
  os << ']';
}

void write_attribute_block(std::ostream& os, const AttributeMap& attrs) {
  os << '{';
  bool first = true;
  for (const auto& [k, v] : attrs) {
    os << (first ? " " : "; ") << quote(k) << " = " << quote(v);
    first = false;
  }
  os << (attrs.empty() ? "}" : " }");
}

}  // namespace

std::string_view to_string(Medium m) { return m == Medium::Wired ? "wired" : "wireless"; }

std::string_view to_string(SecurityAttribute a) {
  switch (a) {
    case SecurityAttribute::Confidentiality:
      return "Confidentiality";
    case SecurityAttribute::Integrity:
      return "Integrity";
    case SecurityAttribute::Availability:
      return "Availability";
  }
  return "";
}

std::optional<SecurityAttribute> parse_security_attribute(std::string_view text) {
  if (text == "Confidentiality") return SecurityAttribute::Confidentiality;
  if (text == "Integrity") return SecurityAttribute::Integrity;
  if (text == "Availability") return SecurityAttribute::Availability;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Schemas

const std::vector<std::string>& AttributeSchema::default_values() {
  static const std::vector<std::string> values = {"No", "Yes", "Strong"};
  return values;
}

void AttributeSchema::declare(const std::string& name, std::vector<std::string> values, bool fixed) {
  if (values.empty()) throw Error("attribute \"" + name + "\" declares an empty domain");
  if (has_duplicates(values)) throw Error("attribute \"" + name + "\" declares duplicate values");
  declared_[name] = Domain{std::move(values), fixed};
}

const std::vector<std::string>& AttributeSchema::values(const std::string& name) const {
  auto it = declared_.find(name);
  return it == declared_.end() ? default_values() : it->second.values;
}

std::optional<std::size_t> AttributeSchema::rank(const std::string& name, const std::string& value) const {
  const auto& vs = values(name);
  auto it = std::find(vs.begin(), vs.end(), value);
  if (it == vs.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vs.begin());
}

bool AttributeSchema::is_fixed(const std::string& name) const {
  auto it = declared_.find(name);
  return it != declared_.end() && it->second.fixed;
}

CapabilitySchema::CapabilitySchema() {
  levels_["boolean"] = kBoolean;
  levels_["access"] = kAccess;
  levels_["Control"] = kBoolean;
  levels_["Read"] = kBoolean;
}

bool CapabilitySchema::is_builtin(const std::string& name) const {
  static const std::set<std::string> names = {"boolean", "access", "Control", "Read"};
  auto it = levels_.find(name);
  if (it == levels_.end() || !names.contains(name)) return false;
  return it->second == (name == "access" ? kAccess : kBoolean);
}

void CapabilitySchema::declare(const std::string& name, std::vector<std::string> levels) {
  if (levels.empty()) throw Error("capability \"" + name + "\" declares no levels");
  if (has_duplicates(levels)) throw Error("capability \"" + name + "\" declares duplicate levels");
  levels_[name] = std::move(levels);
}

const std::vector<std::string>& CapabilitySchema::levels(const std::string& name) const {
  auto it = levels_.find(name);
  if (it == levels_.end()) throw Error("unknown capability \"" + name + "\"");
  return it->second;
}

std::optional<std::size_t> CapabilitySchema::rank(const std::string& name, const std::string& level) const {
  auto it = levels_.find(name);
  if (it == levels_.end()) return std::nullopt;
  auto pos = std::find(it->second.begin(), it->second.end(), level);
  if (pos == it->second.end()) return std::nullopt;
  return static_cast<std::size_t>(pos - it->second.begin());
}

Ordering compare_levels(const CapabilitySchema& schema, const std::string& capability,
                        const std::string& a, const std::string& b) {
  if (!schema.has(capability)) throw Error("unknown capability \"" + capability + "\"");
  auto ra = schema.rank(capability, a);
  auto rb = schema.rank(capability, b);
  if (!ra) throw Error("level \"" + a + "\" is not in the domain of capability \"" + capability + "\"");
  if (!rb) throw Error("level \"" + b + "\" is not in the domain of capability \"" + capability + "\"");
  if (*ra < *rb) return Ordering::Less;
  if (*ra > *rb) return Ordering::Greater;
  return Ordering::Equal;
}

// ---------------------------------------------------------------------------
// SystemModel

const Element* SystemModel::find_element(std::string_view id) const {
  auto it = std::find_if(elements.begin(), elements.end(), [&](const Element& e) { return e.id == id; });
  return it == elements.end() ? nullptr : &*it;
}

Element* SystemModel::find_element(std::string_view id) {
  auto it = std::find_if(elements.begin(), elements.end(), [&](const Element& e) { return e.id == id; });
  return it == elements.end() ? nullptr : &*it;
}

const Asset* SystemModel::find_asset(std::string_view id) const {
  auto it = std::find_if(assets.begin(), assets.end(), [&](const Asset& a) { return a.id == id; });
  return it == assets.end() ? nullptr : &*it;
}

std::optional<std::size_t> SystemModel::element_index(std::string_view id) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].id == id) return i;
  }
  return std::nullopt;
}

std::string SystemModel::attribute_value(const Element& e, const std::string& attribute) const {
  auto it = e.attributes.find(attribute);
  return it == e.attributes.end() ? attribute_schema.lowest(attribute) : it->second;
}

void SystemModel::link_assets() {
  for (auto& e : elements) e.held_assets.clear();
  for (const auto& a : assets) {
    if (Element* holder = find_element(a.holder)) holder->held_assets.push_back(a.id);
  }
}

ValidationReport validate(const SystemModel& model) {
  ValidationReport report;
  std::set<std::string> ids;
  auto claim = [&](const std::string& id, std::string_view what) {
    if (id.empty()) {
      report.errors.push_back(std::string(what) + " with empty identifier");
    } else if (!ids.insert(id).second) {
      report.errors.push_back("duplicate identifier \"" + id + "\" (" + std::string(what) + ")");
    }
  };
  auto check_attrs = [&](const AttributeMap& attrs, const std::string& owner) {
    for (const auto& [k, v] : attrs) {
      if (!model.attribute_schema.rank(k, v)) {
        report.errors.push_back(owner + ": value \"" + v + "\" is not in the domain of attribute \"" + k + "\"");
      }
    }
  };

  std::set<std::string> element_ids;
  for (const auto& e : model.elements) {
    claim(e.id, "element");
    element_ids.insert(e.id);
    if (e.element_type.empty()) report.errors.push_back("element \"" + e.id + "\" has an empty type");
    check_attrs(e.attributes, "element \"" + e.id + "\"");
  }
  for (const auto& c : model.connectors) {
    claim(c.id, "connector");
    if (!element_ids.contains(c.source)) {
      report.errors.push_back("connector \"" + c.id + "\" source \"" + c.source + "\" is not an element");
    }
    if (!element_ids.contains(c.target)) {
      report.errors.push_back("connector \"" + c.id + "\" target \"" + c.target + "\" is not an element");
    }
    if (c.source == c.target) report.warnings.push_back("connector \"" + c.id + "\" is a self-loop");
    check_attrs(c.attributes, "connector \"" + c.id + "\"");
  }
  for (const auto& a : model.assets) {
    claim(a.id, "asset");
    if (!element_ids.contains(a.holder)) {
      report.errors.push_back("asset \"" + a.id + "\" holder \"" + a.holder + "\" is not an element");
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Text format

SystemModel parse_model(std::string_view text) {
  TokenStream ts(tokenize(text));
  if (ts.at_end()) ts.fail("empty model file");
  ts.expect_word(kModelHeader);
  const Token& version = ts.peek();
  if (version.kind != TokenKind::Identifier || version.text != kModelVersion) {
    ts.fail("unsupported model version '" + version.text + "'");
  }
  ts.next();

  SystemModel model;
  std::vector<std::string> problems;
  while (!ts.at_end()) {
    if (ts.accept_word("attribute")) {
      const SourceLocation at = ts.peek().where;
      std::string name = ts.expect_string();
      auto values = parse_string_list(ts);
      const bool fixed = ts.accept_word("fixed");
      try {
        model.attribute_schema.declare(name, std::move(values), fixed);
      } catch (const Error& e) {
        throw ParseError(e.what(), at);
      }
    } else if (ts.accept_word("capability")) {
      const SourceLocation at = ts.peek().where;
      std::string name = ts.expect_string();
      try {
        model.capability_schema.declare(name, parse_string_list(ts));
      } catch (const Error& e) {
        throw ParseError(e.what(), at);
      }
    } else if (ts.accept_word("element")) {
      Element e;
      e.id = ts.expect_identifier();
      e.name = ts.expect_string();
      ts.expect_punct(":");
      e.element_type = ts.expect_string();
      e.attributes = parse_attribute_block(ts, "element \"" + e.id + "\"", problems);
      model.elements.push_back(std::move(e));
    } else if (ts.accept_word("connector")) {
      Connector c;
      c.id = ts.expect_identifier();
      ts.expect_punct(":");
      c.source = ts.expect_identifier();
      ts.expect_punct("->");
      c.target = ts.expect_identifier();
      if (ts.accept_word("wired")) {
        c.medium = Medium::Wired;
      } else if (ts.accept_word("wireless")) {
        c.medium = Medium::Wireless;
      } else {
        ts.fail("expected 'wired' or 'wireless'");
      }
      if (ts.is_punct("{")) c.attributes = parse_attribute_block(ts, "connector \"" + c.id + "\"", problems);
      model.connectors.push_back(std::move(c));
    } else if (ts.accept_word("asset")) {
      Asset a;
      a.id = ts.expect_identifier();
      a.name = ts.expect_string();
      ts.expect_punct(":");
      const Token& attr = ts.peek();
      auto sa = attr.kind == TokenKind::Identifier ? parse_security_attribute(attr.text) : std::nullopt;
      if (!sa) ts.fail("expected Confidentiality, Integrity or Availability");
      ts.next();
      a.security_attribute = *sa;
      ts.expect_punct("@");
      a.holder = ts.expect_identifier();
      model.assets.push_back(std::move(a));
    } else {
      ts.fail("expected 'attribute', 'capability', 'element', 'connector' or 'asset'");
    }
  }

  auto report = validate(model);
  problems.insert(problems.end(), report.errors.begin(), report.errors.end());
  if (!problems.empty()) throw ValidationError(std::move(problems));
  model.link_assets();
  return model;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SystemModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

std::string serialize_model(const SystemModel& model) {
  std::ostringstream os;
  os << kModelHeader << ' ' << kModelVersion << '\n';
  for (const auto& [name, domain] : model.attribute_schema.declared()) {
    os << "attribute " << quote(name) << ' ';
    write_string_list(os, domain.values);
    if (domain.fixed) os << " fixed";
    os << '\n';
  }
  for (const auto& [name, levels] : model.capability_schema.all()) {
    if (model.capability_schema.is_builtin(name)) continue;
    os << "capability " << quote(name) << ' ';
    write_string_list(os, levels);
    os << '\n';
  }
  for (const auto& e : model.elements) {
    os << "element " << e.id << ' ' << quote(e.name) << " : " << quote(e.element_type) << ' ';
    write_attribute_block(os, e.attributes);
    os << '\n';
  }
  for (const auto& c : model.connectors) {
    os << "connector " << c.id << " : " << c.source << " -> " << c.target << ' ' << to_string(c.medium);
    if (!c.attributes.empty()) {
      os << ' ';
      write_attribute_block(os, c.attributes);
    }
    os << '\n';
  }
  for (const auto& a : model.assets) {
    os << "asset " << a.id << ' ' << quote(a.name) << " : " << to_string(a.security_attribute) << " @ "
       << a.holder << '\n';
  }
  return os.str();
}

}  // namespace autosec
