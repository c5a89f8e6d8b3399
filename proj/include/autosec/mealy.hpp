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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace autosec {

using Word = std::vector<std::string>;

/// Deterministic finite-state transducer with one output symbol per input.
/// States are dense indices with display names; transitions are filled in
/// after construction and checked for completeness with check_complete().
class MealyMachine {
 public:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  /// Throws Error for an empty input alphabet or repeated symbols.
  MealyMachine(std::vector<std::string> inputs, std::vector<std::string> outputs);

  std::size_t add_state(std::string name);
  std::size_t add_output(const std::string& symbol);  // returns the existing index if present
  void set_initial(std::size_t state);
  void set_transition(std::size_t state, std::size_t input, std::size_t target, std::size_t output);

  [[nodiscard]] const std::vector<std::string>& inputs() const { return inputs_; }
  [[nodiscard]] const std::vector<std::string>& outputs() const { return outputs_; }
  [[nodiscard]] const std::vector<std::string>& state_names() const { return names_; }
  [[nodiscard]] std::size_t num_states() const { return names_.size(); }
  [[nodiscard]] std::size_t num_inputs() const { return inputs_.size(); }
  [[nodiscard]] std::size_t initial() const { return initial_; }

  [[nodiscard]] bool defined(std::size_t state, std::size_t input) const;
  [[nodiscard]] std::size_t target(std::size_t state, std::size_t input) const;
  [[nodiscard]] std::size_t output(std::size_t state, std::size_t input) const;
  [[nodiscard]] const std::string& output_symbol(std::size_t state, std::size_t input) const {
    return outputs_[output(state, input)];
  }

  [[nodiscard]] std::optional<std::size_t> input_index(std::string_view symbol) const;
  [[nodiscard]] std::optional<std::size_t> output_index(std::string_view symbol) const;
  [[nodiscard]] std::optional<std::size_t> state_index(std::string_view name) const;

  /// Throws ValidationError listing every missing transition.
  void check_complete() const;

  /// Output word from the initial state. Throws Error on an unknown symbol.
  [[nodiscard]] Word run(const Word& word) const;
  [[nodiscard]] std::size_t state_after(const Word& word) const;
  [[nodiscard]] std::vector<std::size_t> encode(const Word& word) const;

  bool operator==(const MealyMachine& other) const;

 private:
  struct Cell {
    std::size_t target = kNone;
    std::size_t output = kNone;
    bool operator==(const Cell&) const = default;
  };

  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::vector<std::string> names_;
  std::vector<std::vector<Cell>> table_;
  std::unordered_map<std::string, std::size_t> input_ix_;
  std::unordered_map<std::string, std::size_t> output_ix_;
  std::size_t initial_ = 0;
};

/// Drops unreachable states and renumbers the rest in breadth-first order
/// (inputs in alphabet order). With `rename`, states become s0, s1, ...
MealyMachine normalize(const MealyMachine& m, bool rename = false);

/// Partition-refinement minimization of the reachable part.
MealyMachine minimize(const MealyMachine& m);

struct DiffResult {
  bool equivalent = true;
  Word word;  // shortest distinguishing input word
  Word left;
  Word right;
};

/// Product BFS. Among minimum-length witnesses, the lexicographically
/// smallest by the first machine's input order. Throws Error when the
/// input alphabets differ as sets.
DiffResult diff(const MealyMachine& a, const MealyMachine& b);

/// Shortest, lexicographically first input word reaching each state
/// (nullopt for unreachable states).
std::vector<std::optional<Word>> access_words(const MealyMachine& m);

/// Single inputs plus a shortest distinguishing suffix for every pair of
/// inequivalent states.
std::vector<Word> characterization_set(const MealyMachine& m);

MealyMachine parse_mealy(std::string_view text);
MealyMachine load_mealy(const std::string& path);
std::string serialize_mealy(const MealyMachine& m);
std::string mealy_to_dot(const MealyMachine& m);

std::string join_word(const Word& w, std::string_view sep = " ");

}  // namespace autosec
