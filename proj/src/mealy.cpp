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

#include "autosec/mealy.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "autosec/error.hpp"
#include "autosec/model.hpp"

namespace autosec {

namespace {

bool valid_symbol(std::string_view s) {
  if (s.empty() || s == "->" || s == "/" || s == "*") return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '|' || c == '#';
  });
}

std::unordered_map<std::string, std::size_t> index_of(const std::vector<std::string>& symbols,
                                                      const char* what) {
  std::unordered_map<std::string, std::size_t> ix;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!valid_symbol(symbols[i])) throw Error(std::string("invalid ") + what + " symbol \"" + symbols[i] + "\"");
    if (!ix.emplace(symbols[i], i).second) throw Error(std::string("repeated ") + what + " symbol \"" + symbols[i] + "\"");
  }
  return ix;
}

// Maps each input index of `a` to the same symbol's index in `b`.
std::vector<std::size_t> align_inputs(const MealyMachine& a, const MealyMachine& b) {
  if (a.num_inputs() != b.num_inputs()) throw Error("input alphabets differ");
  std::vector<std::size_t> map(a.num_inputs());
  for (std::size_t i = 0; i < a.num_inputs(); ++i) {
    auto j = b.input_index(a.inputs()[i]);
    if (!j) throw Error("input alphabets differ: \"" + a.inputs()[i] + "\" missing");
    map[i] = *j;
  }
  return map;
}

// Shortest suffix on which states p and q of m disagree.
std::optional<Word> distinguishing_suffix(const MealyMachine& m, std::size_t p, std::size_t q) {
  const std::size_t n = m.num_states();
  std::vector<std::pair<std::size_t, std::size_t>> parent(n * n, {MealyMachine::kNone, 0});
  std::vector<bool> seen(n * n, false);
  std::deque<std::pair<std::size_t, std::size_t>> queue{{p, q}};
  seen[p * n + q] = true;
  auto trace = [&](std::size_t cell, std::size_t last) {
    Word w{m.inputs()[last]};
    while (parent[cell].first != MealyMachine::kNone) {
      w.push_back(m.inputs()[parent[cell].second]);
      cell = parent[cell].first;
    }
    std::reverse(w.begin(), w.end());
    return w;
  };
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < m.num_inputs(); ++i) {
      if (m.output(x, i) != m.output(y, i)) return trace(x * n + y, i);
    }
    for (std::size_t i = 0; i < m.num_inputs(); ++i) {
      const std::size_t nx = m.target(x, i), ny = m.target(y, i);
      const std::size_t cell = nx * n + ny;
      if (seen[cell]) continue;
      seen[cell] = true;
      parent[cell] = {x * n + y, i};
      queue.emplace_back(nx, ny);
    }
  }
  return std::nullopt;
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

MealyMachine::MealyMachine(std::vector<std::string> inputs, std::vector<std::string> outputs)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
  if (inputs_.empty()) throw Error("a Mealy machine needs at least one input symbol");
  input_ix_ = index_of(inputs_, "input");
  output_ix_ = index_of(outputs_, "output");
}

std::size_t MealyMachine::add_state(std::string name) {
  names_.push_back(std::move(name));
  table_.emplace_back(inputs_.size());
  return names_.size() - 1;
}

std::size_t MealyMachine::add_output(const std::string& symbol) {
  if (auto it = output_ix_.find(symbol); it != output_ix_.end()) return it->second;
  if (!valid_symbol(symbol)) throw Error("invalid output symbol \"" + symbol + "\"");
  outputs_.push_back(symbol);
  output_ix_.emplace(symbol, outputs_.size() - 1);
  return outputs_.size() - 1;
}

void MealyMachine::set_initial(std::size_t state) {
  if (state >= names_.size()) throw Error("initial state out of range");
  initial_ = state;
}

void MealyMachine::set_transition(std::size_t state, std::size_t input, std::size_t target, std::size_t output) {
  if (state >= names_.size() || target >= names_.size()) throw Error("state index out of range");
  if (input >= inputs_.size()) throw Error("input index out of range");
  if (output >= outputs_.size()) throw Error("output index out of range");
  table_[state][input] = {target, output};
}

bool MealyMachine::defined(std::size_t state, std::size_t input) const {
  return table_.at(state).at(input).target != kNone;
}

std::size_t MealyMachine::target(std::size_t state, std::size_t input) const {
  const Cell& c = table_[state][input];
  if (c.target == kNone) throw Error("missing transition " + names_[state] + " " + inputs_[input]);
  return c.target;
}

std::size_t MealyMachine::output(std::size_t state, std::size_t input) const {
  const Cell& c = table_[state][input];
  if (c.target == kNone) throw Error("missing transition " + names_[state] + " " + inputs_[input]);
  return c.output;
}

std::optional<std::size_t> MealyMachine::input_index(std::string_view symbol) const {
  auto it = input_ix_.find(std::string(symbol));
  if (it == input_ix_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> MealyMachine::output_index(std::string_view symbol) const {
  auto it = output_ix_.find(std::string(symbol));
  if (it == output_ix_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> MealyMachine::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

void MealyMachine::check_complete() const {
  std::vector<std::string> problems;
  if (names_.empty()) problems.push_back("machine has no states");
  for (std::size_t s = 0; s < names_.size(); ++s) {
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      if (table_[s][i].target == kNone) problems.push_back("missing transition " + names_[s] + " " + inputs_[i]);
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

std::vector<std::size_t> MealyMachine::encode(const Word& word) const {
  std::vector<std::size_t> out;
  out.reserve(word.size());
  for (const auto& s : word) {
    auto i = input_index(s);
    if (!i) throw Error("unknown input symbol \"" + s + "\"");
    out.push_back(*i);
  }
  return out;
}

Word MealyMachine::run(const Word& word) const {
  Word out;
  out.reserve(word.size());
  std::size_t s = initial_;
  for (std::size_t i : encode(word)) {
    out.push_back(outputs_[output(s, i)]);
    s = target(s, i);
  }
  return out;
}

std::size_t MealyMachine::state_after(const Word& word) const {
  std::size_t s = initial_;
  for (std::size_t i : encode(word)) s = target(s, i);
  return s;
}

bool MealyMachine::operator==(const MealyMachine& other) const {
  return inputs_ == other.inputs_ && outputs_ == other.outputs_ && names_ == other.names_ &&
         table_ == other.table_ && initial_ == other.initial_;
}

MealyMachine normalize(const MealyMachine& m, bool rename) {
  m.check_complete();
  std::vector<std::size_t> order{m.initial()};
  std::vector<std::size_t> renum(m.num_states(), MealyMachine::kNone);
  renum[m.initial()] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t i = 0; i < m.num_inputs(); ++i) {
      const std::size_t t = m.target(order[k], i);
      if (renum[t] == MealyMachine::kNone) {
        renum[t] = order.size();
        order.push_back(t);
      }
    }
  }
  MealyMachine out(m.inputs(), m.outputs());
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.add_state(rename ? "s" + std::to_string(k) : m.state_names()[order[k]]);
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t i = 0; i < m.num_inputs(); ++i) {
      out.set_transition(k, i, renum[m.target(order[k], i)], m.output(order[k], i));
    }
  }
  out.set_initial(0);
  return out;
}

MealyMachine minimize(const MealyMachine& input) {
  const MealyMachine m = normalize(input);
  const std::size_t n = m.num_states();
  std::vector<std::size_t> block(n, 0);
  std::size_t blocks = 0;
  {
    std::map<std::vector<std::size_t>, std::size_t> sig;
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> key;
      for (std::size_t i = 0; i < m.num_inputs(); ++i) key.push_back(m.output(s, i));
      block[s] = sig.emplace(key, sig.size()).first->second;
    }
    blocks = sig.size();
  }
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> sig;
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> key{block[s]};
      for (std::size_t i = 0; i < m.num_inputs(); ++i) key.push_back(block[m.target(s, i)]);
      next[s] = sig.emplace(key, sig.size()).first->second;
    }
    block = std::move(next);
    if (sig.size() == blocks) break;
    blocks = sig.size();
  }
  MealyMachine out(m.inputs(), m.outputs());
  std::vector<std::size_t> rep(blocks, MealyMachine::kNone);
  for (std::size_t s = 0; s < n; ++s) {
    if (rep[block[s]] == MealyMachine::kNone) rep[block[s]] = s;
  }
  for (std::size_t b = 0; b < blocks; ++b) out.add_state(m.state_names()[rep[b]]);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t i = 0; i < m.num_inputs(); ++i) {
      out.set_transition(b, i, block[m.target(rep[b], i)], m.output(rep[b], i));
    }
  }
  out.set_initial(block[m.initial()]);
  return normalize(out);
}

DiffResult diff(const MealyMachine& a, const MealyMachine& b) {
  a.check_complete();
  b.check_complete();
  const std::vector<std::size_t> map = align_inputs(a, b);
  const std::size_t nb = b.num_states();
  struct Node {
    std::size_t x, y, parent, input;
  };
  std::vector<Node> nodes{{a.initial(), b.initial(), MealyMachine::kNone, 0}};
  std::vector<bool> seen(a.num_states() * nb, false);
  seen[a.initial() * nb + b.initial()] = true;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const std::size_t x = nodes[k].x, y = nodes[k].y;
    for (std::size_t i = 0; i < a.num_inputs(); ++i) {
      if (a.output_symbol(x, i) == b.output_symbol(y, map[i])) continue;
      DiffResult r;
      r.equivalent = false;
      r.word.push_back(a.inputs()[i]);
      for (std::size_t c = k; nodes[c].parent != MealyMachine::kNone; c = nodes[c].parent) {
        r.word.push_back(a.inputs()[nodes[c].input]);
      }
      std::reverse(r.word.begin(), r.word.end());
      r.left = a.run(r.word);
      r.right = b.run(r.word);
      return r;
    }
    for (std::size_t i = 0; i < a.num_inputs(); ++i) {
      const std::size_t nx = a.target(x, i), ny = b.target(y, map[i]);
      if (seen[nx * nb + ny]) continue;
      seen[nx * nb + ny] = true;
      nodes.push_back({nx, ny, k, i});
    }
  }
  return {};
}

std::vector<std::optional<Word>> access_words(const MealyMachine& m) {
  std::vector<std::optional<Word>> out(m.num_states());
  out[m.initial()] = Word{};
  std::deque<std::size_t> queue{m.initial()};
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < m.num_inputs(); ++i) {
      const std::size_t t = m.target(s, i);
      if (out[t]) continue;
      Word w = *out[s];
      w.push_back(m.inputs()[i]);
      out[t] = std::move(w);
      queue.push_back(t);
    }
  }
  return out;
}

std::vector<Word> characterization_set(const MealyMachine& m) {
  std::set<Word> seen;
  std::vector<Word> out;
  for (const auto& in : m.inputs()) {
    seen.insert({in});
    out.push_back({in});
  }
  for (std::size_t p = 0; p < m.num_states(); ++p) {
    for (std::size_t q = p + 1; q < m.num_states(); ++q) {
      if (auto w = distinguishing_suffix(m, p, q); w && seen.insert(*w).second) out.push_back(std::move(*w));
    }
  }
  return out;
}

MealyMachine parse_mealy(std::string_view text) {
  std::vector<std::string> inputs, outputs;
  std::optional<std::string> initial;
  struct Row {
    std::string from, input, to, output;
    int line;
  };
  std::vector<Row> rows;
  bool header = false;
  int line_no = 0;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::vector<std::string> tok = split_ws(line);
    if (tok.empty()) continue;
    const SourceLocation where{line_no, 1};
    if (!header) {
      if (tok.size() != 2 || tok[0] != "autosec-mealy" || tok[1] != "1") {
        throw ParseError("expected header \"autosec-mealy 1\"", where);
      }
      header = true;
      continue;
    }
    if (tok[0] == "inputs") {
      inputs.assign(tok.begin() + 1, tok.end());
    } else if (tok[0] == "outputs") {
      outputs.assign(tok.begin() + 1, tok.end());
    } else if (tok[0] == "initial") {
      if (tok.size() != 2) throw ParseError("expected \"initial <state>\"", where);
      initial = tok[1];
    } else if (tok.size() == 6 && tok[2] == "->" && tok[4] == "/") {
      rows.push_back({tok[0], tok[1], tok[3], tok[5], line_no});
    } else {
      throw ParseError("expected \"<state> <input> -> <state> / <output>\"", where);
    }
  }
  if (!header) throw ParseError("empty machine file", {line_no + 1, 1});
  if (!initial) throw ParseError("missing \"initial\" line", {line_no, 1});

  MealyMachine m(inputs, outputs);
  std::map<std::string, std::size_t> states;
  auto state = [&](const std::string& name) {
    auto it = states.find(name);
    if (it != states.end()) return it->second;
    const std::size_t ix = m.add_state(name);
    states.emplace(name, ix);
    return ix;
  };
  state(*initial);
  for (const auto& r : rows) {
    const SourceLocation where{r.line, 1};
    auto in = m.input_index(r.input);
    if (!in) throw ParseError("unknown input \"" + r.input + "\"", where);
    auto out = m.output_index(r.output);
    if (!out) throw ParseError("unknown output \"" + r.output + "\"", where);
    const std::size_t from = state(r.from);
    if (m.defined(from, *in)) throw ParseError("duplicate transition " + r.from + " " + r.input, where);
    m.set_transition(from, *in, state(r.to), *out);
  }
  m.set_initial(states.at(*initial));
  m.check_complete();
  return m;
}

MealyMachine load_mealy(const std::string& path) { return parse_mealy(read_file(path)); }

std::string serialize_mealy(const MealyMachine& m) {
  m.check_complete();
  std::ostringstream os;
  os << "autosec-mealy 1\n";
  os << "inputs " << join_word(m.inputs()) << '\n';
  os << "outputs " << join_word(m.outputs()) << '\n';
  os << "initial " << m.state_names()[m.initial()] << '\n';
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    for (std::size_t i = 0; i < m.num_inputs(); ++i) {
      os << m.state_names()[s] << ' ' << m.inputs()[i] << " -> " << m.state_names()[m.target(s, i)] << " / "
         << m.output_symbol(s, i) << '\n';
    }
  }
  return os.str();
}

std::string mealy_to_dot(const MealyMachine& m) {
  auto q = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream os;
  os << "digraph mealy {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (std::size_t s = 0; s < m.num_states(); ++s) os << "  " << q(m.state_names()[s]) << " [shape=circle];\n";
  os << "  __start -> " << q(m.state_names()[m.initial()]) << ";\n";
  // One edge per (source, target) pair, labels stacked.
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    std::map<std::size_t, std::string> labels;
    for (std::size_t i = 0; i < m.num_inputs(); ++i) {
      std::string& l = labels[m.target(s, i)];
      if (!l.empty()) l += "\\n";
      l += m.inputs()[i] + " / " + m.output_symbol(s, i);
    }
    for (const auto& [t, l] : labels) {
      os << "  " << q(m.state_names()[s]) << " -> " << q(m.state_names()[t]) << " [label=\"" << l << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string join_word(const Word& w, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += sep;
    out += w[i];
  }
  return out;
}

}  // namespace autosec
