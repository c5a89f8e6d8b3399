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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace autosec {

enum class Medium { Wired, Wireless };
enum class SecurityAttribute { Confidentiality, Integrity, Availability };
enum class Ordering { Less, Equal, Greater };

std::string_view to_string(Medium m);
std::string_view to_string(SecurityAttribute a);
std::optional<SecurityAttribute> parse_security_attribute(std::string_view text);

using AttributeMap = std::map<std::string, std::string>;

struct Element {
  std::string id;
  std::string name;
  std::string element_type;
  AttributeMap attributes;
  std::vector<std::string> held_assets;  // filled by SystemModel::link_assets()

  bool operator==(const Element&) const = default;
};

struct Connector {
  std::string id;
  std::string source;
  std::string target;
  Medium medium = Medium::Wired;
  AttributeMap attributes;

  bool operator==(const Connector&) const = default;
};

struct Asset {
  std::string id;
  std::string name;
  SecurityAttribute security_attribute = SecurityAttribute::Confidentiality;
  std::string holder;

  bool operator==(const Asset&) const = default;
};

/// Admissible values per attribute, ordered by rank (lowest first).
/// Attributes that were never declared use {"No", "Yes", "Strong"}.
/// A fixed attribute describes the architecture rather than a security
/// control, so repair never touches it.
class AttributeSchema {
 public:
  struct Domain {
    std::vector<std::string> values;
    bool fixed = false;
    bool operator==(const Domain&) const = default;
  };

  static const std::vector<std::string>& default_values();

  void declare(const std::string& name, std::vector<std::string> values, bool fixed = false);

  [[nodiscard]] const std::vector<std::string>& values(const std::string& name) const;
  [[nodiscard]] std::optional<std::size_t> rank(const std::string& name, const std::string& value) const;
  [[nodiscard]] const std::string& lowest(const std::string& name) const { return values(name).front(); }
  [[nodiscard]] bool is_fixed(const std::string& name) const;
  [[nodiscard]] const std::map<std::string, Domain>& declared() const { return declared_; }

  bool operator==(const AttributeSchema&) const = default;

 private:
  std::map<std::string, Domain> declared_;
};

/// Capability name -> totally ordered level list. Built-ins: "boolean" and
/// the boolean capabilities "Control" and "Read" use {"false","true"};
/// "access" uses {"Access","Read","Modify","Control"}.
class CapabilitySchema {
 public:
  CapabilitySchema();

  void declare(const std::string& name, std::vector<std::string> levels);

  [[nodiscard]] bool has(const std::string& name) const { return levels_.contains(name); }
  [[nodiscard]] bool is_builtin(const std::string& name) const;
  /// Throws Error for an unknown capability.
  [[nodiscard]] const std::vector<std::string>& levels(const std::string& name) const;
  [[nodiscard]] std::optional<std::size_t> rank(const std::string& name, const std::string& level) const;
  [[nodiscard]] const std::map<std::string, std::vector<std::string>>& all() const { return levels_; }

  bool operator==(const CapabilitySchema&) const = default;

 private:
  std::map<std::string, std::vector<std::string>> levels_;
};

/// Orders two levels of the same capability by list position.
/// Throws Error for an unknown capability or a level outside its domain.
Ordering compare_levels(const CapabilitySchema& schema, const std::string& capability,
                        const std::string& a, const std::string& b);

struct SystemModel {
  std::vector<Element> elements;
  std::vector<Connector> connectors;
  std::vector<Asset> assets;
  AttributeSchema attribute_schema;
  CapabilitySchema capability_schema;

  [[nodiscard]] const Element* find_element(std::string_view id) const;
  [[nodiscard]] Element* find_element(std::string_view id);
  [[nodiscard]] const Asset* find_asset(std::string_view id) const;
  [[nodiscard]] std::optional<std::size_t> element_index(std::string_view id) const;

  /// Effective value; an unset attribute reads as its domain's lowest value.
  [[nodiscard]] std::string attribute_value(const Element& e, const std::string& attribute) const;

  /// Recomputes Element::held_assets from the asset holders.
  void link_assets();

  bool operator==(const SystemModel&) const = default;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

ValidationReport validate(const SystemModel& model);

/// Parses model text and validates it. Throws ParseError or ValidationError.
SystemModel parse_model(std::string_view text);
SystemModel load_model(const std::filesystem::path& path);
std::string serialize_model(const SystemModel& model);

std::string read_file(const std::filesystem::path& path);

}  // namespace autosec
