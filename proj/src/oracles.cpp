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

#include <functional>

#include "autosec/learner.hpp"

namespace autosec {

namespace {

std::optional<Word> first_mismatch(const Word& word, const Word& expected, const Word& observed) {
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (expected[k] != observed[k]) return Word(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(k) + 1);
  }
  return std::nullopt;
}

// Calls visit on every W-method test word in order until it returns true.
bool for_each_test(const MealyMachine& h, std::size_t k, const std::function<bool(const Word&)>& visit) {
  std::vector<Word> cover;
  for (const auto& access : access_words(h)) {
    if (!access) continue;
    cover.push_back(*access);
    for (const auto& a : h.inputs()) {
      Word w = *access;
      w.push_back(a);
      cover.push_back(std::move(w));
    }
  }
  std::vector<Word> middle{{}};
  for (std::size_t len = 1, begin = 0; len <= k; ++len) {
    const std::size_t end = middle.size();
    for (std::size_t j = begin; j < end; ++j) {
      for (const auto& a : h.inputs()) {
        Word w = middle[j];
        w.push_back(a);
        middle.push_back(std::move(w));
      }
    }
    begin = end;
  }
  const std::vector<Word> chars = characterization_set(h);
  for (const auto& p : cover) {
    for (const auto& m : middle) {
      for (const auto& w : chars) {
        Word test = p;
        test.insert(test.end(), m.begin(), m.end());
        test.insert(test.end(), w.begin(), w.end());
        if (visit(test)) return true;
      }
    }
  }
  return false;
}

}  // namespace

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw Error("uniform_below needs a positive bound");
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

std::optional<Word> WhiteboxOracle::find_counterexample(const MealyMachine& hypothesis, QueryRunner&) {
  DiffResult d = diff(hypothesis, target_);
  if (d.equivalent) return std::nullopt;
  return d.word;
}

RandomWordsOracle::RandomWordsOracle(std::size_t words, std::size_t min_len, std::size_t max_len,
                                     std::uint64_t seed)
    : words_(words), min_len_(min_len), max_len_(max_len), seed_(seed), rng_(seed) {
  if (min_len_ > max_len_) throw Error("random word oracle: minimum length exceeds maximum");
}

std::string RandomWordsOracle::describe() const {
  return "random:" + std::to_string(words_) + "," + std::to_string(min_len_) + "," + std::to_string(max_len_) +
         " seed " + std::to_string(seed_);
}

std::optional<Word> RandomWordsOracle::find_counterexample(const MealyMachine& hypothesis, QueryRunner& runner) {
  const auto& alphabet = hypothesis.inputs();
  for (std::size_t n = 0; n < words_; ++n) {
    const std::size_t len = min_len_ + uniform_below(rng_, max_len_ - min_len_ + 1);
    Word word;
    for (std::size_t k = 0; k < len; ++k) word.push_back(alphabet[uniform_below(rng_, alphabet.size())]);
    const Word observed = runner.query(word, QueryKind::Test);
    transcript_.push_back(join_word(word) + " | " + join_word(observed));
    if (auto ce = first_mismatch(word, hypothesis.run(word), observed)) return ce;
  }
  return std::nullopt;
}

std::vector<Word> WMethodOracle::test_suite(const MealyMachine& hypothesis, std::size_t extra_states) {
  std::vector<Word> out;
  for_each_test(hypothesis, extra_states, [&](const Word& w) {
    out.push_back(w);
    return false;
  });
  return out;
}

std::optional<Word> WMethodOracle::find_counterexample(const MealyMachine& hypothesis, QueryRunner& runner) {
  std::optional<Word> ce;
  for_each_test(hypothesis, k_, [&](const Word& w) {
    ce = first_mismatch(w, hypothesis.run(w), runner.query(w, QueryKind::Test));
    return ce.has_value();
  });
  return ce;
}

}  // namespace autosec
