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

#include <algorithm>

#include "autosec/error.hpp"
#include "autosec/learner.hpp"
#include "autosec/suls.hpp"
#include "autosec/vv.hpp"
#include "test_support.hpp"

namespace autosec {
namespace {

using testing::fixture;

const SafetyProperty& property(const std::vector<SafetyProperty>& all, const std::string& id) {
  return *std::find_if(all.begin(), all.end(), [&](const SafetyProperty& p) { return p.id == id; });
}

// Independent evaluator: first matching transition wins, unmatched
// observations keep the state; true once an accepting state is reached.
bool observation_accepted(const SafetyProperty& p, const Word& inputs, const Word& outputs) {
  auto accepting = [&](const std::string& q) {
    return std::find(p.accepting.begin(), p.accepting.end(), q) != p.accepting.end();
  };
  std::string q = p.initial;
  if (accepting(q)) return true;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (const auto& t : p.transitions) {
      if (t.from == q && (t.input == "*" || t.input == inputs[k]) && (t.output == "*" || t.output == outputs[k])) {
        q = t.to;
        break;
      }
    }
    if (accepting(q)) return true;
  }
  return false;
}

TEST(Check, WrongKeyPropertyOnUds) {
  const auto props = load_properties(fixture("uds.properties"));
  const auto& wrong = property(props, "wrong-key-auth");
  const CheckResult buggy = check(load_mealy(fixture("uds_buggy.machine")), wrong);
  ASSERT_FALSE(buggy.passed);
  EXPECT_EQ(buggy.inputs, (Word{"ExtDiag", "Prog", "SecAcc()", "SecAcc(Key)", "SecAcc(Wrong)"}));
  EXPECT_EQ(buggy.outputs, (Word{"ok", "ok", "seed", "accept", "accept"}));
  EXPECT_TRUE(check(load_mealy(fixture("uds_fixed.machine")), wrong).passed);
}

TEST(Check, PreviousKeyPropertyOnUds) {
  const auto props = load_properties(fixture("uds.properties"));
  const auto& prev = property(props, "prev-key-auth");
  const CheckResult buggy = check(load_mealy(fixture("uds_buggy.machine")), prev);
  ASSERT_FALSE(buggy.passed);
  EXPECT_EQ(buggy.inputs.back(), "SecAcc(PrevKey)");
  EXPECT_EQ(buggy.outputs.back(), "accept");
  EXPECT_TRUE(check(load_mealy(fixture("uds_fixed.machine")), prev).passed);
}

TEST(Check, PatternWithoutAcceptingStatesAlwaysPasses) {
  SafetyProperty p{"none", "accepts nothing", "q", {}, {{"q", "*", "*", "q"}}};
  EXPECT_TRUE(check(load_mealy(fixture("uds_buggy.machine")), p).passed);
  EXPECT_TRUE(check(load_mealy(fixture("ble_buggy.machine")), p).passed);
}

TEST(Check, AlphabetMismatch) {
  const MealyMachine uds = load_mealy(fixture("uds_buggy.machine"));
  EXPECT_THROW(check(uds, forbid_after("x", "d", {"Reboot"}, "Prog", "ok")), Error);
  EXPECT_THROW(check(uds, forbid_after("x", "d", {}, "Prog", "granted")), Error);
}

TEST(Check, WitnessIsShortestOnRandomMachines) {
  testing::Rng rng(808);
  int violations = 0;
  for (int i = 0; i < 150; ++i) {
    const MealyMachine m = testing::random_mealy(rng, 1 + testing::pick(rng, 8), 2, 3);
    Word after;
    for (std::size_t k = testing::pick(rng, 3); k > 0; --k) after.push_back(m.inputs()[testing::pick(rng, 2)]);
    const SafetyProperty p =
        forbid_after("p", "random", after, m.inputs()[testing::pick(rng, 2)], m.outputs()[testing::pick(rng, 3)]);
    const CheckResult r = check(m, p);
    if (r.passed) {
      for (std::size_t n = 0; n <= 7; ++n) {
        for (const Word& w : testing::all_words(m, n)) ASSERT_FALSE(observation_accepted(p, w, m.run(w)));
      }
      continue;
    }
    ++violations;
    EXPECT_EQ(r.outputs, m.run(r.inputs));
    EXPECT_TRUE(observation_accepted(p, r.inputs, r.outputs));
    for (std::size_t n = 0; n < r.inputs.size(); ++n) {
      for (const Word& w : testing::all_words(m, n)) ASSERT_FALSE(observation_accepted(p, w, m.run(w))) << join_word(w);
    }
    // Lexicographically first among the shortest.
    for (const Word& w : testing::all_words(m, r.inputs.size())) {
      if (observation_accepted(p, w, m.run(w))) {
        EXPECT_EQ(w, r.inputs);
        break;
      }
    }
  }
  EXPECT_GT(violations, 30);
}

TEST(Properties, FileMatchesBuiltinsAndRoundTrips) {
  const auto props = load_properties(fixture("uds.properties"));
  EXPECT_EQ(props, builtin_properties());
  const std::string text = serialize_properties(props);
  EXPECT_EQ(parse_properties(text), props);
  EXPECT_EQ(serialize_properties(parse_properties(text)), text);
}

TEST(Properties, ShorthandExpansion) {
  const SafetyProperty p = forbid_after("id", "desc", {"a", "b"}, "c", "x");
  EXPECT_EQ(p.initial, "p0");
  EXPECT_FALSE(p.accepting.empty());
  EXPECT_TRUE(observation_accepted(p, {"a", "z", "b", "c"}, {"o", "o", "o", "x"}));
  EXPECT_FALSE(observation_accepted(p, {"b", "a", "c"}, {"o", "o", "x"}));
  EXPECT_FALSE(observation_accepted(p, {"a", "b", "c"}, {"o", "o", "y"}));
}

TEST(Properties, ParseErrors) {
  EXPECT_THROW(parse_properties(""), ParseError);
  EXPECT_THROW(parse_properties("autosec-property 2\n"), ParseError);
  EXPECT_THROW(parse_properties("autosec-property 1\ninitial p\n"), ParseError);
  EXPECT_THROW(parse_properties("autosec-property 1\nproperty x \"d\"\ninitial p\n"), ParseError);
  EXPECT_THROW(parse_properties("autosec-property 1\nproperty x \"d\ninitial p\nend\n"), ParseError);
  EXPECT_THROW(parse_properties("autosec-property 1\nproperty x \"d\"\nend\n"), ParseError);
  EXPECT_THROW(parse_properties("autosec-property 1\nproperty x \"d\"\nafter a forbid b\nend\n"), ParseError);
  EXPECT_THROW(parse_properties("autosec-property 1\nproperty x \"d\"\ninitial p\np a x -> q\nend\n"), ParseError);
  EXPECT_THROW(parse_properties("autosec-property 1\nproperty x \"d\"\ninitial p\nafter a forbid b / c\nend\n"),
               ParseError);
}

TEST(Sinks, BuggyBleHasOneSink) {
  const MealyMachine ble = load_mealy(fixture("ble_buggy.machine"));
  const auto sinks = find_sinks(ble, {"controller_reset"});
  ASSERT_EQ(sinks.size(), 1u);
  EXPECT_EQ(sinks[0].access.size(), 4u);
  EXPECT_EQ(sinks[0].access,
            (Word{"connect", "pairing_request_legacy", "pairing_request_secure", "pairing_request_legacy"}));
  EXPECT_EQ(ble.state_names()[ble.state_after(sinks[0].access)], sinks[0].state);
}

TEST(Sinks, FixedBleHasNone) {
  EXPECT_TRUE(find_sinks(load_mealy(fixture("ble_fixed.machine")), {"controller_reset"}).empty());
}

TEST(Sinks, SingleStateMachineIsASink) {
  MealyMachine m({"a"}, {"x"});
  m.add_state("s");
  m.set_transition(0, 0, 0, 0);
  const auto sinks = find_sinks(m, {});
  ASSERT_EQ(sinks.size(), 1u);
  EXPECT_TRUE(sinks[0].access.empty());
}

TEST(Sinks, RemovingTheSinkLeavesNone) {
  const MealyMachine ble = load_mealy(fixture("ble_buggy.machine"));
  const auto sinks = find_sinks(ble, {"controller_reset"});
  ASSERT_EQ(sinks.size(), 1u);
  const std::size_t sink = *ble.state_index(sinks[0].state);
  // Reroute the sink's first non-escape input to the initial state.
  MealyMachine patched(ble.inputs(), ble.outputs());
  for (const auto& n : ble.state_names()) patched.add_state(n);
  for (std::size_t s = 0; s < ble.num_states(); ++s) {
    for (std::size_t i = 0; i < ble.num_inputs(); ++i) {
      const bool reroute = s == sink && ble.inputs()[i] == "disconnect";
      patched.set_transition(s, i, reroute ? ble.initial() : ble.target(s, i), ble.output(s, i));
    }
  }
  patched.set_initial(ble.initial());
  EXPECT_TRUE(find_sinks(patched, {"controller_reset"}).empty());
}

TEST(Sinks, UnknownEscapeInput) {
  EXPECT_THROW(find_sinks(load_mealy(fixture("ble_buggy.machine")), {"power_cycle"}), Error);
}

TEST(Fuzz, DeterministicForAFixedSeed) {
  const MealyMachine uds = load_mealy(fixture("uds_buggy.machine"));
  const FuzzOptions options{100, 10, 0.2, 7};
  const TestSuite a = fuzz_from_model(uds, options);
  EXPECT_EQ(a.cases.size(), 100u);
  EXPECT_EQ(serialize_suite(fuzz_from_model(uds, options)), serialize_suite(a));
  FuzzOptions other = options;
  other.seed = 8;
  EXPECT_NE(serialize_suite(fuzz_from_model(uds, other)), serialize_suite(a));
  const auto free_cases = std::count_if(a.cases.begin(), a.cases.end(), [](const TestCase& c) { return !c.expected; });
  EXPECT_GT(free_cases, 0);
  EXPECT_LT(free_cases, 100);
}

TEST(Fuzz, UnmutatedCasesReplayOnTheDouble) {
  for (const auto& [name, file] : {std::pair{"uds-buggy", "uds_buggy.machine"}, {"ble-buggy", "ble_buggy.machine"}}) {
    const TestSuite suite = fuzz_from_model(load_mealy(fixture(file)), {200, 15, 0.0, 3});
    for (const auto& c : suite.cases) ASSERT_TRUE(c.expected.has_value());
    SulBundle b = make_sul(name);
    const VerifyReport report = verify_suite(suite, *b.sul, *b.mapper);
    EXPECT_EQ(report.results.size(), 200u);
    EXPECT_EQ(report.failures(), 0u) << name;
    EXPECT_TRUE(report.counterexamples().empty());
  }
}

TEST(Fuzz, ZeroLengthAndBudget) {
  const MealyMachine uds = load_mealy(fixture("uds_buggy.machine"));
  for (const auto& c : fuzz_from_model(uds, {20, 0, 0.5, 1}).cases) EXPECT_TRUE(c.inputs.empty());
  EXPECT_THROW(fuzz_from_model(uds, {0, 5, 0.0, 1}), Error);
}

TEST(Suite, RoundTripAndErrors) {
  const TestSuite suite = fuzz_from_model(load_mealy(fixture("ble_fixed.machine")), {50, 8, 0.3, 11});
  const std::string text = serialize_suite(suite);
  EXPECT_EQ(parse_suite(text), suite);
  EXPECT_EQ(parse_suite(serialize_suite(TestSuite{})), TestSuite{});
  EXPECT_THROW(parse_suite(""), ParseError);
  EXPECT_THROW(parse_suite("autosec-suite 1\ncase 1 expect | a b | x\n"), ParseError);
  EXPECT_THROW(parse_suite("autosec-suite 1\ncase 1 free | a | x\n"), ParseError);
  EXPECT_THROW(parse_suite("autosec-suite 1\ncase one expect | a | x\n"), ParseError);
  EXPECT_THROW(parse_suite("autosec-suite 1\ncase 1 maybe | a | x\n"), ParseError);
  EXPECT_THROW(parse_suite("autosec-suite 1\ncase 1 expect a x\n"), ParseError);
}

TEST(Verify, FixedSuiteExposesTheBuggyDoubleAndFeedsTheLearner) {
  const TestSuite suite = fuzz_from_model(load_mealy(fixture("ble_fixed.machine")), {500, 12, 0.0, 7});
  SulBundle target = make_sul("ble-buggy");
  const VerifyReport report = verify_suite(suite, *target.sul, *target.mapper);
  ASSERT_GT(report.failures(), 0u);
  const auto cexs = report.counterexamples();
  ASSERT_EQ(cexs.size(), report.failures());
  for (const auto& r : report.results) {
    if (r.passed) continue;
    EXPECT_TRUE(r.error.empty());
    EXPECT_NE(r.observed, *r.expected);
  }

  SulBundle learnee = make_sul("ble-buggy");
  QueryRunner runner(*learnee.sul, *learnee.mapper);
  LStarLearner learner(runner);
  const MealyMachine h0 = learner.hypothesis();
  bool changed = false;
  for (const auto& r : report.results) {
    if (r.passed || h0.run(r.inputs) == r.observed) continue;
    learner.add_counterexample(r.inputs);
    const MealyMachine h1 = learner.hypothesis();
    EXPECT_FALSE(diff(h0, h1).equivalent);
    EXPECT_GT(h1.num_states(), h0.num_states());
    changed = true;
    break;
  }
  EXPECT_TRUE(changed);
}

TEST(Verify, CounterexamplesStopAtTheFirstMismatch) {
  TestSuite suite;
  suite.cases.push_back({1, {"ExtDiag", "Prog", "SecAcc()", "SecAcc(Key)", "SecAcc(Wrong)", "Prog"},
                         Word{"ok", "ok", "seed", "accept", "reject", "ok"}});
  SulBundle b = make_sul("uds-buggy");
  const VerifyReport report = verify_suite(suite, *b.sul, *b.mapper);
  ASSERT_EQ(report.failures(), 1u);
  EXPECT_EQ(report.counterexamples()[0], (Word{"ExtDiag", "Prog", "SecAcc()", "SecAcc(Key)", "SecAcc(Wrong)"}));
}

TEST(Verify, EmptySuiteAndTransportErrors) {
  SulBundle b = make_sul("uds-fixed");
  EXPECT_TRUE(verify_suite(TestSuite{}, *b.sul, *b.mapper).results.empty());
  TestSuite bad;
  bad.cases.push_back({1, {"ExtDiag", "Reboot"}, std::nullopt});
  const VerifyReport report = verify_suite(bad, *b.sul, *b.mapper);
  ASSERT_EQ(report.results.size(), 1u);
  EXPECT_FALSE(report.results[0].passed);
  EXPECT_NE(report.results[0].error.find("Reboot"), std::string::npos);
}

}  // namespace
}  // namespace autosec
