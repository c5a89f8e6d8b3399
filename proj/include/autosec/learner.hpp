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
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "autosec/error.hpp"
#include "autosec/mealy.hpp"

namespace autosec {

using Frame = std::vector<std::uint8_t>;

/// A stateful system driven one concrete frame at a time.
class SulSession {
 public:
  virtual ~SulSession() = default;

  void reset() {
    ++resets_;
    do_reset();
  }
  Frame step(const Frame& input) {
    ++steps_;
    return do_step(input);
  }

  [[nodiscard]] std::size_t resets() const { return resets_; }
  [[nodiscard]] std::size_t steps() const { return steps_; }

 protected:
  virtual void do_reset() = 0;
  virtual Frame do_step(const Frame& input) = 0;

 private:
  std::size_t resets_ = 0;
  std::size_t steps_ = 0;
};

/// Translates abstract symbols to frames and back. State kept between the
/// steps of one word is cleared by reset().
class Mapper {
 public:
  virtual ~Mapper() = default;
  [[nodiscard]] virtual const std::vector<std::string>& inputs() const = 0;
  [[nodiscard]] virtual const std::vector<std::string>& outputs() const = 0;
  virtual void reset() = 0;
  virtual Frame concretize(const std::string& input) = 0;
  virtual std::string abstract_output(const Frame& output) = 0;
};

class NondeterminismDetected : public Error {
 public:
  NondeterminismDetected(Word word, Word first, Word second);
  [[nodiscard]] const Word& word() const { return word_; }
  [[nodiscard]] const Word& first() const { return first_; }
  [[nodiscard]] const Word& second() const { return second_; }

 private:
  Word word_, first_, second_;
};

class LimitExceeded : public Error {
 public:
  using Error::Error;
};

struct QueryLimits {
  std::size_t max_steps = 20'000'000;  // SUL steps across the whole run
  std::size_t max_rounds = 1'000;      // equivalence queries
};

struct QueryStats {
  std::size_t membership_queries = 0;  // table queries sent to the SUL
  std::size_t cache_hits = 0;
  std::size_t equivalence_queries = 0;
  std::size_t test_queries = 0;        // conformance test words sent to the SUL
  std::size_t steps = 0;
  std::size_t resets = 0;
};

enum class QueryKind { Membership, Test };

/// Runs abstract words against a SUL through a mapper, behind a prefix
/// cache. A cached prefix that answers differently raises
/// NondeterminismDetected.
class QueryRunner {
 public:
  QueryRunner(SulSession& sul, Mapper& mapper, QueryLimits limits = {});

  [[nodiscard]] const std::vector<std::string>& inputs() const { return mapper_.inputs(); }
  [[nodiscard]] const std::vector<std::string>& outputs() const { return outputs_; }

  /// Input and output symbols as indices into inputs() / outputs().
  std::vector<std::size_t> query(const std::vector<std::size_t>& word, QueryKind kind = QueryKind::Membership);
  Word query(const Word& word, QueryKind kind = QueryKind::Membership);

  QueryStats& stats() { return stats_; }
  [[nodiscard]] const QueryStats& stats() const { return stats_; }
  [[nodiscard]] const QueryLimits& limits() const { return limits_; }

 private:
  struct Node {
    std::map<std::size_t, std::size_t> next;  // input -> node
    std::size_t output = 0;
  };

  std::size_t intern(const std::string& output);
  Word to_symbols(const std::vector<std::size_t>& w, const std::vector<std::string>& alphabet) const;

  SulSession& sul_;
  Mapper& mapper_;
  QueryLimits limits_;
  QueryStats stats_;
  std::vector<std::string> outputs_;
  std::vector<Node> trie_{Node{}};
};

/// Answers equivalence queries; nullopt means no counterexample was found.
class EquivalenceOracle {
 public:
  virtual ~EquivalenceOracle() = default;
  virtual std::optional<Word> find_counterexample(const MealyMachine& hypothesis, QueryRunner& runner) = 0;
  [[nodiscard]] virtual std::string describe() const = 0;
};

/// Product BFS against a known machine.
class WhiteboxOracle : public EquivalenceOracle {
 public:
  explicit WhiteboxOracle(MealyMachine target) : target_(std::move(target)) {}
  std::optional<Word> find_counterexample(const MealyMachine& hypothesis, QueryRunner& runner) override;
  [[nodiscard]] std::string describe() const override { return "whitebox"; }

 private:
  MealyMachine target_;
};

/// Random words with uniformly drawn length in [min_len, max_len] and
/// uniformly drawn symbols. The generator advances across rounds.
class RandomWordsOracle : public EquivalenceOracle {
 public:
  RandomWordsOracle(std::size_t words, std::size_t min_len, std::size_t max_len, std::uint64_t seed);
  std::optional<Word> find_counterexample(const MealyMachine& hypothesis, QueryRunner& runner) override;
  [[nodiscard]] std::string describe() const override;

  /// One line per word sent: "<inputs> | <outputs>".
  [[nodiscard]] const std::vector<std::string>& transcript() const { return transcript_; }

 private:
  std::size_t words_, min_len_, max_len_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::vector<std::string> transcript_;
};

/// Transition cover x all middle words up to length k x characterization set.
class WMethodOracle : public EquivalenceOracle {
 public:
  explicit WMethodOracle(std::size_t extra_states) : k_(extra_states) {}
  std::optional<Word> find_counterexample(const MealyMachine& hypothesis, QueryRunner& runner) override;
  [[nodiscard]] std::string describe() const override { return "wmethod:" + std::to_string(k_); }

  /// The test words in execution order.
  static std::vector<Word> test_suite(const MealyMachine& hypothesis, std::size_t extra_states);

 private:
  std::size_t k_;
};

/// Uniform draw in [0, bound) by rejection; identical on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Observation-table L* for Mealy machines. Counterexamples add all their
/// prefixes to S.
class LStarLearner {
 public:
  explicit LStarLearner(QueryRunner& runner);

  /// Closes and makes the table consistent, then builds the hypothesis.
  MealyMachine hypothesis();
  void add_counterexample(const Word& word);

  [[nodiscard]] std::size_t prefix_count() const { return S_.size(); }
  [[nodiscard]] std::size_t suffix_count() const { return E_.size(); }
  /// |S ∪ S·A| x |E| for the current table.
  [[nodiscard]] std::size_t cell_bound() const;
  [[nodiscard]] bool has_prefix(const Word& word) const;

 private:
  using IWord = std::vector<std::size_t>;
  using Row = std::vector<IWord>;

  void fill();
  const Row& row(const IWord& w) const { return rows_.at(w); }
  bool close();
  bool make_consistent();
  void add_prefix(const IWord& w);

  QueryRunner& runner_;
  std::vector<IWord> S_;
  std::vector<IWord> E_;
  std::map<IWord, Row> rows_;  // S ∪ S·A
};

struct LearnResult {
  MealyMachine machine;
  QueryStats stats;
  std::size_t rounds = 0;
  std::vector<std::size_t> hypothesis_sizes;  // per equivalence query
  std::vector<Word> counterexamples;
  bool mq_bound_held = true;  // membership queries within the table-cell bound after every round
};

LearnResult learn(SulSession& sul, Mapper& mapper, EquivalenceOracle& oracle, const QueryLimits& limits = {});

}  // namespace autosec
