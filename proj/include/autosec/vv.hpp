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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autosec/learner.hpp"
#include "autosec/mealy.hpp"

namespace autosec {

/// Observation pattern over (input, output) pairs; "*" matches any symbol.
/// From each state the first matching transition in declaration order is
/// taken; an observation no transition matches leaves the state unchanged.
/// Reaching an accepting state is a violation.
struct PatternTransition {
  std::string from;
  std::string input;
  std::string output;
  std::string to;
  bool operator==(const PatternTransition&) const = default;
};

struct SafetyProperty {
  std::string id;
  std::string description;
  std::string initial;
  std::vector<std::string> accepting;
  std::vector<PatternTransition> transitions;
  bool operator==(const SafetyProperty&) const = default;
};

/// "after a1 ... an forbid x / y": a1..an observed in order (any outputs,
/// other observations in between allowed), then x answered with y.
SafetyProperty forbid_after(std::string id, std::string description, const Word& after, std::string input,
                            std::string output);

/// wrong-key-auth and prev-key-auth for the UDS secure access machines.
std::vector<SafetyProperty> builtin_properties();

std::vector<SafetyProperty> parse_properties(std::string_view text);
std::vector<SafetyProperty> load_properties(const std::string& path);
std::string serialize_properties(const std::vector<SafetyProperty>& properties);

struct CheckResult {
  bool passed = true;
  Word inputs;   // shortest witness, lexicographically first
  Word outputs;  // the machine's answers along it
};

/// Throws Error when the pattern names symbols outside the machine's alphabets.
CheckResult check(const MealyMachine& machine, const SafetyProperty& property);

struct Sink {
  std::string state;
  Word access;
};

/// Reachable states that no input outside `escape_inputs` leaves.
/// Throws Error for escape inputs outside the alphabet.
std::vector<Sink> find_sinks(const MealyMachine& machine, const std::vector<std::string>& escape_inputs);

struct TestCase {
  std::size_t id = 0;
  Word inputs;
  std::optional<Word> expected;  // nullopt for mutated, expectation-free cases
  bool operator==(const TestCase&) const = default;
};

struct TestSuite {
  std::vector<TestCase> cases;
  bool operator==(const TestSuite&) const = default;
};

struct FuzzOptions {
  std::size_t budget = 100;  // number of cases
  std::size_t max_len = 10;
  double mutation_rate = 0.0;
  std::uint64_t seed = 1;
};

/// Random walks with uniform lengths in [0, max_len]. Each symbol is then
/// substituted, and a random symbol inserted before it, with probability
/// mutation_rate each; a case with any mutation carries no expectation.
TestSuite fuzz_from_model(const MealyMachine& machine, const FuzzOptions& options);

std::string serialize_suite(const TestSuite& suite);
TestSuite parse_suite(std::string_view text);
TestSuite load_suite(const std::string& path);

struct CaseResult {
  std::size_t id = 0;
  bool passed = true;
  Word inputs;
  std::optional<Word> expected;
  Word observed;
  std::string error;  // transport or mapper failure
};

struct VerifyReport {
  std::vector<CaseResult> results;
  [[nodiscard]] std::size_t failures() const;
  /// Failing words truncated after their first mismatching step.
  [[nodiscard]] std::vector<Word> counterexamples() const;
};

/// Resets the SUL and mapper before every case.
VerifyReport verify_suite(const TestSuite& suite, SulSession& sul, Mapper& mapper);

}  // namespace autosec
