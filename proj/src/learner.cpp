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

#include "autosec/learner.hpp"

#include <algorithm>
#include <set>

namespace autosec {

NondeterminismDetected::NondeterminismDetected(Word word, Word first, Word second)
    : Error("nondeterministic SUL: word [" + join_word(word, ", ") + "] answered [" + join_word(first, ", ") +
            "] and later [" + join_word(second, ", ") + "]"),
      word_(std::move(word)),
      first_(std::move(first)),
      second_(std::move(second)) {}

// ---------------------------------------------------------------------------

QueryRunner::QueryRunner(SulSession& sul, Mapper& mapper, QueryLimits limits)
    : sul_(sul), mapper_(mapper), limits_(limits) {
  if (mapper_.inputs().empty()) throw Error("mapper declares no input symbols");
  for (const auto& o : mapper_.outputs()) intern(o);
}

std::size_t QueryRunner::intern(const std::string& output) {
  auto it = std::find(outputs_.begin(), outputs_.end(), output);
  if (it != outputs_.end()) return static_cast<std::size_t>(it - outputs_.begin());
  outputs_.push_back(output);
  return outputs_.size() - 1;
}

Word QueryRunner::to_symbols(const std::vector<std::size_t>& w, const std::vector<std::string>& alphabet) const {
  Word out;
  out.reserve(w.size());
  for (std::size_t i : w) out.push_back(alphabet[i]);
  return out;
}

std::vector<std::size_t> QueryRunner::query(const std::vector<std::size_t>& word, QueryKind kind) {
  std::vector<std::size_t> out;
  out.reserve(word.size());
  std::size_t node = 0;
  for (std::size_t i : word) {
    auto it = trie_[node].next.find(i);
    if (it == trie_[node].next.end()) break;
    node = it->second;
    out.push_back(trie_[node].output);
  }
  if (out.size() == word.size()) {
    ++stats_.cache_hits;
    return out;
  }

  if (stats_.steps + word.size() > limits_.max_steps) {
    throw LimitExceeded("SUL step limit of " + std::to_string(limits_.max_steps) + " exceeded");
  }
  ++(kind == QueryKind::Membership ? stats_.membership_queries : stats_.test_queries);
  ++stats_.resets;
  sul_.reset();
  mapper_.reset();
  out.clear();
  node = 0;
  for (std::size_t k = 0; k < word.size(); ++k) {
    const std::size_t i = word[k];
    if (i >= mapper_.inputs().size()) throw Error("input index out of range");
    const Frame response = sul_.step(mapper_.concretize(mapper_.inputs()[i]));
    ++stats_.steps;
    const std::size_t o = intern(mapper_.abstract_output(response));
    out.push_back(o);
    auto it = trie_[node].next.find(i);
    if (it == trie_[node].next.end()) {
      trie_.push_back(Node{{}, o});
      trie_[node].next.emplace(i, trie_.size() - 1);
      node = trie_.size() - 1;
      continue;
    }
    node = it->second;
    if (trie_[node].output != o) {
      const std::vector<std::size_t> prefix(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(k) + 1);
      std::vector<std::size_t> cached;
      std::size_t n = 0;
      for (std::size_t j : prefix) {
        n = trie_[n].next.at(j);
        cached.push_back(trie_[n].output);
      }
      throw NondeterminismDetected(to_symbols(prefix, mapper_.inputs()), to_symbols(cached, outputs_),
                                   to_symbols(out, outputs_));
    }
  }
  return out;
}

Word QueryRunner::query(const Word& word, QueryKind kind) {
  std::vector<std::size_t> w;
  for (const auto& s : word) {
    auto it = std::find(mapper_.inputs().begin(), mapper_.inputs().end(), s);
    if (it == mapper_.inputs().end()) throw Error("unknown input symbol \"" + s + "\"");
    w.push_back(static_cast<std::size_t>(it - mapper_.inputs().begin()));
  }
  return to_symbols(query(w, kind), outputs_);
}

// ---------------------------------------------------------------------------

LStarLearner::LStarLearner(QueryRunner& runner) : runner_(runner) {
  for (std::size_t a = 0; a < runner_.inputs().size(); ++a) E_.push_back({a});
  add_prefix({});
}

void LStarLearner::add_prefix(const IWord& w) {
  if (std::find(S_.begin(), S_.end(), w) != S_.end()) return;
  S_.push_back(w);
  rows_.try_emplace(w);
  for (std::size_t a = 0; a < runner_.inputs().size(); ++a) {
    IWord wa = w;
    wa.push_back(a);
    rows_.try_emplace(wa);
  }
}

bool LStarLearner::has_prefix(const Word& word) const {
  IWord w;
  for (const auto& s : word) {
    auto it = std::find(runner_.inputs().begin(), runner_.inputs().end(), s);
    if (it == runner_.inputs().end()) return false;
    w.push_back(static_cast<std::size_t>(it - runner_.inputs().begin()));
  }
  return std::find(S_.begin(), S_.end(), w) != S_.end();
}

std::size_t LStarLearner::cell_bound() const { return rows_.size() * E_.size(); }

void LStarLearner::fill() {
  for (auto& [prefix, cells] : rows_) {
    for (std::size_t e = cells.size(); e < E_.size(); ++e) {
      IWord w = prefix;
      w.insert(w.end(), E_[e].begin(), E_[e].end());
      const auto out = runner_.query(w, QueryKind::Membership);
      cells.emplace_back(out.end() - static_cast<std::ptrdiff_t>(E_[e].size()), out.end());
    }
  }
}

bool LStarLearner::close() {
  std::set<Row> upper;
  for (const auto& s : S_) upper.insert(row(s));
  const std::size_t n = S_.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < runner_.inputs().size(); ++a) {
      IWord sa = S_[k];
      sa.push_back(a);
      if (upper.count(row(sa)) == 0) {
        add_prefix(sa);
        return false;
      }
    }
  }
  return true;
}

bool LStarLearner::make_consistent() {
  for (std::size_t x = 0; x < S_.size(); ++x) {
    for (std::size_t y = x + 1; y < S_.size(); ++y) {
      if (row(S_[x]) != row(S_[y])) continue;
      for (std::size_t a = 0; a < runner_.inputs().size(); ++a) {
        IWord xa = S_[x], ya = S_[y];
        xa.push_back(a);
        ya.push_back(a);
        const Row& rx = row(xa);
        const Row& ry = row(ya);
        for (std::size_t e = 0; e < E_.size(); ++e) {
          if (rx[e] == ry[e]) continue;
          IWord suffix{a};
          suffix.insert(suffix.end(), E_[e].begin(), E_[e].end());
          if (std::find(E_.begin(), E_.end(), suffix) == E_.end()) E_.push_back(std::move(suffix));
          return false;
        }
      }
    }
  }
  return true;
}

MealyMachine LStarLearner::hypothesis() {
  for (;;) {
    fill();
    if (!close()) continue;
    if (!make_consistent()) continue;
    break;
  }
  std::map<Row, std::size_t> state_of;
  std::vector<const IWord*> reps;
  for (const auto& s : S_) {
    if (state_of.emplace(row(s), reps.size()).second) reps.push_back(&s);
  }
  MealyMachine m(runner_.inputs(), runner_.outputs());
  for (std::size_t k = 0; k < reps.size(); ++k) m.add_state("s" + std::to_string(k));
  for (std::size_t k = 0; k < reps.size(); ++k) {
    for (std::size_t a = 0; a < runner_.inputs().size(); ++a) {
      IWord sa = *reps[k];
      sa.push_back(a);
      m.set_transition(k, a, state_of.at(row(sa)), row(*reps[k])[a].front());
    }
  }
  m.set_initial(0);
  return normalize(m, true);
}

void LStarLearner::add_counterexample(const Word& word) {
  IWord w;
  for (const auto& s : word) {
    auto it = std::find(runner_.inputs().begin(), runner_.inputs().end(), s);
    if (it == runner_.inputs().end()) throw Error("counterexample uses unknown input \"" + s + "\"");
    w.push_back(static_cast<std::size_t>(it - runner_.inputs().begin()));
  }
  for (std::size_t n = 1; n <= w.size(); ++n) add_prefix(IWord(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n)));
}

// ---------------------------------------------------------------------------

LearnResult learn(SulSession& sul, Mapper& mapper, EquivalenceOracle& oracle, const QueryLimits& limits) {
  QueryRunner runner(sul, mapper, limits);
  LStarLearner learner(runner);
  LearnResult result{MealyMachine(mapper.inputs(), {}), {}, 0, {}, {}, true};
  for (;;) {
    MealyMachine hyp = learner.hypothesis();
    if (runner.stats().membership_queries > learner.cell_bound()) result.mq_bound_held = false;
    ++result.rounds;
    result.hypothesis_sizes.push_back(hyp.num_states());
    if (result.rounds > limits.max_rounds) {
      throw LimitExceeded("equivalence query limit of " + std::to_string(limits.max_rounds) + " exceeded");
    }
    ++runner.stats().equivalence_queries;
    auto ce = oracle.find_counterexample(hyp, runner);
    if (!ce) {
      result.machine = std::move(hyp);
      result.stats = runner.stats();
      return result;
    }
    result.counterexamples.push_back(*ce);
    learner.add_counterexample(*ce);
  }
}

}  // namespace autosec
