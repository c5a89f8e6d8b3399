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

#include <set>

#include "autosec/error.hpp"
#include "autosec/mealy.hpp"
#include "test_support.hpp"

namespace autosec {
namespace {

using testing::fixture;

constexpr const char* kToggle = R"(autosec-mealy 1
# two states plus one that cannot be reached
inputs a b
outputs x y
initial p
p a -> q / x
p b -> p / y
q a -> p / y
q b -> q / x
z a -> z / x
z b -> p / x
)";

MealyMachine constant_machine() {
  MealyMachine m({"a", "b"}, {"x"});
  m.add_state("only");
  m.set_transition(0, 0, 0, 0);
  m.set_transition(0, 1, 0, 0);
  return m;
}

// A copy of `m` with one cell changed.
MealyMachine mutate(const MealyMachine& m, testing::Rng& rng) {
  MealyMachine out(m.inputs(), m.outputs());
  for (const auto& n : m.state_names()) out.add_state(n);
  const std::size_t s0 = testing::pick(rng, m.num_states());
  const std::size_t i0 = testing::pick(rng, m.num_inputs());
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    for (std::size_t i = 0; i < m.num_inputs(); ++i) {
      std::size_t t = m.target(s, i);
      std::size_t o = m.output(s, i);
      if (s == s0 && i == i0) {
        if (testing::pick(rng, 2) == 0) {
          o = (o + 1) % m.outputs().size();
        } else {
          t = testing::pick(rng, m.num_states());
        }
      }
      out.set_transition(s, i, t, o);
    }
  }
  out.set_initial(m.initial());
  return out;
}

TEST(MealyRun, UdsPrefix) {
  const MealyMachine uds = load_mealy(fixture("uds_buggy.machine"));
  EXPECT_EQ(uds.run({"ExtDiag", "Prog", "SecAcc()"}), (Word{"ok", "ok", "seed"}));
  EXPECT_EQ(uds.run({}), Word{});
}

TEST(MealyRun, ConstantMachine) {
  EXPECT_EQ(constant_machine().run({"a", "a", "b"}), (Word{"x", "x", "x"}));
}

TEST(MealyRun, RunIsPure) {
  const MealyMachine m = parse_mealy(kToggle);
  const Word w = {"a", "b", "a"};
  EXPECT_EQ(m.run(w), m.run(w));
  EXPECT_EQ(m.run(w), (Word{"x", "x", "y"}));
  EXPECT_EQ(m.state_after(w), *m.state_index("p"));
}

TEST(MealyRun, UnknownSymbol) {
  EXPECT_THROW((void)constant_machine().run({"a", "c"}), Error);
}

TEST(MealyConstruct, RejectsBadAlphabets) {
  EXPECT_THROW(MealyMachine({}, {"x"}), Error);
  EXPECT_THROW(MealyMachine({"a", "a"}, {"x"}), Error);
  EXPECT_THROW(MealyMachine({"a b"}, {"x"}), Error);
  EXPECT_THROW(MealyMachine({"->"}, {"x"}), Error);
  EXPECT_THROW(MealyMachine({"a"}, {"x|y"}), Error);
  EXPECT_THROW(MealyMachine({"a#"}, {"x"}), Error);
}

TEST(MealyConstruct, CompletenessIsChecked) {
  MealyMachine m({"a", "b"}, {"x"});
  m.add_state("s");
  m.set_transition(0, 0, 0, 0);
  try {
    m.check_complete();
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.problems().size(), 1u);
    EXPECT_NE(e.problems()[0].find("b"), std::string::npos);
  }
  EXPECT_THROW(m.set_transition(0, 5, 0, 0), Error);
  EXPECT_THROW(m.set_transition(0, 0, 3, 0), Error);
}

TEST(MealyDiff, SelfIsEquivalent) {
  const MealyMachine uds = load_mealy(fixture("uds_buggy.machine"));
  EXPECT_TRUE(diff(uds, uds).equivalent);
}

TEST(MealyDiff, BuggyVersusFixedUds) {
  const MealyMachine buggy = load_mealy(fixture("uds_buggy.machine"));
  const MealyMachine fixed = load_mealy(fixture("uds_fixed.machine"));
  const DiffResult d = diff(buggy, fixed);
  ASSERT_FALSE(d.equivalent);
  EXPECT_EQ(d.word, (Word{"ExtDiag", "Prog", "SecAcc()", "SecAcc(Key)", "SecAcc(Wrong)"}));
  EXPECT_EQ(d.left, buggy.run(d.word));
  EXPECT_EQ(d.right, fixed.run(d.word));
  EXPECT_NE(d.left.back(), d.right.back());
  // Exhaustive: no shorter word tells them apart.
  for (std::size_t n = 0; n < d.word.size(); ++n) {
    for (const Word& w : testing::all_words(buggy, n)) ASSERT_EQ(buggy.run(w), fixed.run(w)) << join_word(w);
  }
}

TEST(MealyDiff, AlphabetMismatch) {
  MealyMachine other({"a", "c"}, {"x"});
  other.add_state("s");
  other.set_transition(0, 0, 0, 0);
  other.set_transition(0, 1, 0, 0);
  EXPECT_THROW(diff(constant_machine(), other), Error);
}

TEST(MealyDiff, InputOrderDoesNotMatter) {
  MealyMachine swapped({"b", "a"}, {"x"});
  swapped.add_state("s");
  swapped.set_transition(0, 0, 0, 0);
  swapped.set_transition(0, 1, 0, 0);
  EXPECT_TRUE(diff(constant_machine(), swapped).equivalent);
}

TEST(MealyDiffProperty, TenStateWitnessesRespectTheProductBound) {
  testing::Rng rng(10);
  int differing = 0;
  for (int i = 0; i < 200; ++i) {
    const MealyMachine a = testing::random_mealy(rng, 10, 3, 3);
    const MealyMachine b = mutate(a, rng);
    const DiffResult d = diff(a, b);
    if (d.equivalent) continue;
    ++differing;
    EXPECT_LE(d.word.size(), 100u);
    EXPECT_NE(a.run(d.word), b.run(d.word));
  }
  EXPECT_GT(differing, 50);
}

TEST(MealyDiffProperty, AgreesWithExhaustiveEnumeration) {
  testing::Rng rng(11);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 1 + testing::pick(rng, 4);
    const MealyMachine a = testing::random_mealy(rng, n, 2, 2);
    const MealyMachine b = testing::pick(rng, 3) == 0 ? a : mutate(a, rng);
    const DiffResult d = diff(a, b);
    // Words of the bound length cover every shorter word as a prefix.
    std::optional<Word> first;
    std::size_t first_len = 0;
    for (const Word& w : testing::all_words(a, n * n)) {
      const Word x = a.run(w);
      const Word y = b.run(w);
      if (x == y) continue;
      std::size_t k = 0;
      while (x[k] == y[k]) ++k;
      if (!first || k + 1 < first_len) {
        first = Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k + 1));
        first_len = k + 1;
      }
    }
    ASSERT_EQ(d.equivalent, !first.has_value());
    if (first) EXPECT_EQ(d.word.size(), first_len);
  }
}

TEST(MealyDiffProperty, WitnessIsLexicographicallySmallestAmongShortest) {
  testing::Rng rng(12);
  for (int i = 0; i < 60; ++i) {
    const MealyMachine a = testing::random_mealy(rng, 4, 3, 2);
    const MealyMachine b = mutate(a, rng);
    const DiffResult d = diff(a, b);
    if (d.equivalent) continue;
    for (const Word& w : testing::all_words(a, d.word.size())) {
      if (a.run(w) != b.run(w)) {
        // all_words enumerates in input order, so the first hit is the smallest.
        EXPECT_EQ(w, d.word);
        break;
      }
    }
  }
}

TEST(MealyNormalize, DropsUnreachableStatesAndIsIdempotent) {
  const MealyMachine m = parse_mealy(kToggle);
  EXPECT_EQ(m.num_states(), 3u);
  const MealyMachine n = normalize(m);
  EXPECT_EQ(n.num_states(), 2u);
  EXPECT_FALSE(n.state_index("z").has_value());
  EXPECT_EQ(serialize_mealy(n).find(" z "), std::string::npos);
  EXPECT_EQ(normalize(n), n);
  EXPECT_TRUE(diff(m, n).equivalent);
  const MealyMachine renamed = normalize(m, true);
  EXPECT_EQ(renamed.state_names(), (std::vector<std::string>{"s0", "s1"}));
  EXPECT_EQ(normalize(renamed, true), renamed);
}

TEST(MealyNormalize, RandomMachinesStayEquivalent) {
  testing::Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const MealyMachine m = testing::random_mealy(rng, 1 + testing::pick(rng, 8), 2, 3);
    const MealyMachine n = normalize(m);
    EXPECT_EQ(normalize(n), n);
    EXPECT_TRUE(diff(m, n).equivalent);
    const MealyMachine small = minimize(m);
    EXPECT_LE(small.num_states(), n.num_states());
    EXPECT_TRUE(diff(m, small).equivalent);
    EXPECT_EQ(minimize(small).num_states(), small.num_states());
  }
}

TEST(MealyMinimize, MergesEquivalentStates) {
  // Two copies of the constant state.
  MealyMachine m({"a"}, {"x"});
  m.add_state("s");
  m.add_state("t");
  m.set_transition(0, 0, 1, 0);
  m.set_transition(1, 0, 0, 0);
  EXPECT_EQ(minimize(m).num_states(), 1u);
}

TEST(MealyStructure, AccessWordsAndCharacterization) {
  const MealyMachine uds = load_mealy(fixture("uds_fixed.machine"));
  const auto access = access_words(uds);
  ASSERT_EQ(access.size(), uds.num_states());
  for (std::size_t s = 0; s < access.size(); ++s) {
    ASSERT_TRUE(access[s].has_value());
    EXPECT_EQ(uds.state_after(*access[s]), s);
  }
  EXPECT_TRUE(access[uds.initial()]->empty());

  const auto w = characterization_set(uds);
  std::set<std::vector<Word>> signatures;
  for (std::size_t s = 0; s < uds.num_states(); ++s) {
    std::vector<Word> sig;
    for (const Word& suffix : w) {
      Word full = *access[s];
      full.insert(full.end(), suffix.begin(), suffix.end());
      const Word out = uds.run(full);
      sig.emplace_back(out.begin() + static_cast<std::ptrdiff_t>(access[s]->size()), out.end());
    }
    signatures.insert(sig);
  }
  EXPECT_EQ(signatures.size(), uds.num_states());
}

TEST(MealyFormat, FixturesRoundTrip) {
  for (const char* name : {"uds_buggy.machine", "uds_fixed.machine", "ble_buggy.machine", "ble_fixed.machine"}) {
    const MealyMachine m = load_mealy(fixture(name));
    const std::string text = serialize_mealy(m);
    EXPECT_EQ(parse_mealy(text), m) << name;
    EXPECT_EQ(serialize_mealy(parse_mealy(text)), text) << name;
  }
}

TEST(MealyFormat, RandomNormalizedMachinesRoundTrip) {
  testing::Rng rng(14);
  for (int i = 0; i < 100; ++i) {
    const MealyMachine m = normalize(testing::random_mealy(rng, 1 + testing::pick(rng, 10), 3, 4), true);
    EXPECT_EQ(parse_mealy(serialize_mealy(m)), m);
  }
}

TEST(MealyFormat, MalformedText) {
  EXPECT_THROW(parse_mealy(""), ParseError);
  EXPECT_THROW(parse_mealy("autosec-mealy 2\n"), ParseError);
  EXPECT_THROW(parse_mealy("autosec-mealy 1\ninputs a\noutputs x\n"), ParseError);
  EXPECT_THROW(parse_mealy("autosec-mealy 1\ninputs a\noutputs x\ninitial s\ns a -> s x\n"), ParseError);
  EXPECT_THROW(parse_mealy("autosec-mealy 1\ninputs a\noutputs x\ninitial s\ns b -> s / x\n"), ParseError);
  EXPECT_THROW(parse_mealy("autosec-mealy 1\ninputs a\noutputs x\ninitial s\ns a -> s / y\n"), ParseError);
  EXPECT_THROW(parse_mealy("autosec-mealy 1\ninputs a\noutputs x\ninitial s\ns a -> s / x\ns a -> s / x\n"),
               ParseError);
  EXPECT_THROW(parse_mealy("autosec-mealy 1\ninputs a b\noutputs x\ninitial s\ns a -> s / x\n"), ValidationError);
  EXPECT_THROW(parse_mealy("autosec-mealy 1\ninputs\noutputs x\ninitial s\n"), Error);
  try {
    parse_mealy("autosec-mealy 1\ninputs a\noutputs x\ninitial s\n\ns a -> t / q\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where().line, 6);
  }
}

TEST(MealyFormat, DotExport) {
  const std::string dot = mealy_to_dot(parse_mealy(kToggle));
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("a / x"), std::string::npos);
  EXPECT_EQ(dot.back(), '\n');
}

}  // namespace
}  // namespace autosec
