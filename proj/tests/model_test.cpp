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


#include <gtest/gtest.h>

#include <random>

#include "autosec/error.hpp"
#include "autosec/model.hpp"
#include "test_support.hpp"

namespace autosec {
namespace {

using testing::fixture;

constexpr const char* kSmall = R"(autosec-model 1
attribute "Tier" ["Low", "High"] fixed
capability "Depth" ["shallow", "deep"]
element a "A" : "ECU" { "Authentication" = "Yes"; "Tier" = "High" }
element b "B" : "BUS Communication" { }
connector c1 : a -> b wired
connector c2 : b -> a wireless { "Authentication" = "No" }
asset k "Key" : Integrity @ a
)";

TEST(ModelParse, SmallModel) {
  const SystemModel m = parse_model(kSmall);
  ASSERT_EQ(m.elements.size(), 2u);
  ASSERT_EQ(m.connectors.size(), 2u);
  ASSERT_EQ(m.assets.size(), 1u);
  EXPECT_EQ(m.elements[0].name, "A");
  EXPECT_EQ(m.elements[0].element_type, "ECU");
  EXPECT_EQ(m.connectors[1].medium, Medium::Wireless);
  EXPECT_EQ(m.assets[0].security_attribute, SecurityAttribute::Integrity);
  EXPECT_EQ(m.elements[0].held_assets, std::vector<std::string>{"k"});
  EXPECT_TRUE(m.attribute_schema.is_fixed("Tier"));
  EXPECT_FALSE(m.attribute_schema.is_fixed("Authentication"));
  EXPECT_EQ(m.capability_schema.levels("Depth"), (std::vector<std::string>{"shallow", "deep"}));
}

TEST(ModelParse, UnsetAttributeReadsAsLowest) {
  const SystemModel m = parse_model(kSmall);
  EXPECT_EQ(m.attribute_value(m.elements[1], "Authentication"), "No");
  EXPECT_EQ(m.attribute_value(m.elements[1], "Tier"), "Low");
  EXPECT_EQ(m.attribute_value(m.elements[0], "Tier"), "High");
}

TEST(ModelParse, InfotainmentFixtureCounts) {
  const SystemModel m = load_model(fixture("infotainment.model"));
  EXPECT_EQ(m.elements.size(), 22u);
  EXPECT_EQ(m.connectors.size(), 43u);
  EXPECT_EQ(m.assets.size(), 2u);
  EXPECT_TRUE(validate(m).errors.empty());
  ASSERT_NE(m.find_element("head_unit"), nullptr);
  EXPECT_EQ(m.find_element("head_unit")->held_assets, std::vector<std::string>{"conf_asset"});
}

TEST(ModelParse, RoundTripIsIdentity) {
  const SystemModel m = load_model(fixture("infotainment.model"));
  const std::string text = serialize_model(m);
  const SystemModel again = parse_model(text);
  EXPECT_EQ(again, m);
  EXPECT_EQ(serialize_model(again), text);
}

TEST(ModelParse, RandomModelsRoundTrip) {
  testing::Rng rng(4242);
  for (int i = 0; i < 200; ++i) {
    const SystemModel m = testing::random_model(rng, 8, 20);
    const std::string text = serialize_model(m);
    EXPECT_EQ(parse_model(text), m) << text;
  }
}

TEST(ModelParse, ErrorsCarryLocation) {
  try {
    parse_model("autosec-model 1\nelement a \"A\" \"ECU\" { }\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where().line, 2);
    EXPECT_GT(e.where().column, 1);
  }
}

TEST(ModelParse, RejectsBadHeaderAndVersion) {
  EXPECT_THROW(parse_model(""), ParseError);
  EXPECT_THROW(parse_model("model 1\n"), ParseError);
  EXPECT_THROW(parse_model("autosec-model 2\n"), ParseError);
}

TEST(ModelParse, RejectsUnknownKeywordAndMedium) {
  EXPECT_THROW(parse_model("autosec-model 1\nnode a\n"), ParseError);
  EXPECT_THROW(parse_model("autosec-model 1\nelement a \"A\" : \"E\" { }\nconnector c : a -> a cable\n"), ParseError);
  EXPECT_THROW(parse_model("autosec-model 1\nelement a \"A\" : \"E\" { }\nasset x \"X\" : Secrecy @ a\n"), ParseError);
}

TEST(ModelParse, BadDomainDeclarationsAreParseErrors) {
  EXPECT_THROW(parse_model("autosec-model 1\nattribute \"X\" []\n"), ParseError);
  EXPECT_THROW(parse_model("autosec-model 1\nattribute \"X\" [\"a\", \"a\"]\n"), ParseError);
  EXPECT_THROW(parse_model("autosec-model 1\ncapability \"C\" []\n"), ParseError);
}

TEST(ModelValidate, CollectsAllProblems) {
  const char* text = R"(autosec-model 1
element a "A" : "ECU" { "Authentication" = "Maybe"; "Authentication" = "Yes" }
element a "A2" : "ECU" { }
connector c1 : a -> ghost wired
asset k "K" : Confidentiality @ nobody
)";
  try {
    parse_model(text);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string all = e.what();
    EXPECT_GE(e.problems().size(), 4u) << all;
    EXPECT_NE(all.find("duplicate attribute"), std::string::npos);
    EXPECT_NE(all.find("duplicate identifier"), std::string::npos);
    EXPECT_NE(all.find("ghost"), std::string::npos);
    EXPECT_NE(all.find("nobody"), std::string::npos);
  }
}

TEST(ModelValidate, SelfLoopIsOnlyAWarning) {
  SystemModel m;
  m.elements.push_back({"a", "A", "ECU", {}, {}});
  m.connectors.push_back({"c", "a", "a", Medium::Wired, {}});
  const ValidationReport r = validate(m);
  EXPECT_TRUE(r.errors.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
}

TEST(ModelValidate, EmptyTypeIsAnError) {
  SystemModel m;
  m.elements.push_back({"a", "A", "", {}, {}});
  EXPECT_FALSE(validate(m).errors.empty());
}

TEST(CapabilitySchema, BuiltinsAndOrdering) {
  CapabilitySchema s;
  EXPECT_TRUE(s.has("Control"));
  EXPECT_TRUE(s.has("access"));
  EXPECT_EQ(s.levels("access"), (std::vector<std::string>{"Access", "Read", "Modify", "Control"}));
  EXPECT_EQ(compare_levels(s, "access", "Read", "Control"), Ordering::Less);
  EXPECT_EQ(compare_levels(s, "Control", "true", "true"), Ordering::Equal);
  EXPECT_EQ(compare_levels(s, "Control", "true", "false"), Ordering::Greater);
  EXPECT_THROW(compare_levels(s, "Control", "maybe", "true"), Error);
  EXPECT_THROW(compare_levels(s, "Teleport", "a", "b"), Error);
  EXPECT_THROW((void)s.levels("Teleport"), Error);
}

TEST(CapabilitySchema, DeclareRejectsBadDomains) {
  CapabilitySchema s;
  EXPECT_THROW(s.declare("X", {}), Error);
  EXPECT_THROW(s.declare("X", {"a", "a"}), Error);
  s.declare("X", {"lo", "hi"});
  EXPECT_EQ(s.rank("X", "hi"), 1u);
  EXPECT_FALSE(s.rank("X", "mid").has_value());
}

TEST(AttributeSchema, DefaultDomainRanks) {
  AttributeSchema s;
  EXPECT_EQ(s.values("Anything"), AttributeSchema::default_values());
  EXPECT_EQ(s.rank("Anything", "No"), 0u);
  EXPECT_EQ(s.rank("Anything", "Strong"), 2u);
  EXPECT_EQ(s.lowest("Anything"), "No");
}

TEST(SecurityAttribute, ParseAndPrint) {
  for (auto a : {SecurityAttribute::Confidentiality, SecurityAttribute::Integrity, SecurityAttribute::Availability}) {
    EXPECT_EQ(parse_security_attribute(to_string(a)), a);
  }
  EXPECT_FALSE(parse_security_attribute("confidentiality").has_value());
}

}  // namespace
}  // namespace autosec
