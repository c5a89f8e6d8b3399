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

#include "autosec/vv.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "autosec/error.hpp"
#include "autosec/model.hpp"

namespace autosec {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool matches(const std::string& pattern, const std::string& symbol) { return pattern == "*" || pattern == symbol; }

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(uniform_below(rng, std::uint64_t{1} << 53)) * 0x1p-53;
}

}  // namespace

SafetyProperty forbid_after(std::string id, std::string description, const Word& after, std::string input,
                            std::string output) {
  SafetyProperty p;
  p.id = std::move(id);
  p.description = std::move(description);
  p.initial = "p0";
  p.accepting = {"bad"};
  for (std::size_t k = 0; k < after.size(); ++k) {
    p.transitions.push_back({"p" + std::to_string(k), after[k], "*", "p" + std::to_string(k + 1)});
  }
  p.transitions.push_back({"p" + std::to_string(after.size()), std::move(input), std::move(output), "bad"});
  return p;
}

std::vector<SafetyProperty> builtin_properties() {
  std::vector<SafetyProperty> out;
  out.push_back(forbid_after("wrong-key-auth", "a wrong key is never accepted once a correct key was sent",
                             {"SecAcc(Key)"}, "SecAcc(Wrong)", "accept"));
  SafetyProperty prev;
  prev.id = "prev-key-auth";
  prev.description = "after an authenticated session returns to programming, the previous key is refused";
  prev.initial = "p0";
  prev.accepting = {"bad"};
  prev.transitions = {{"p0", "*", "accept", "p1"},
                      {"p1", "Prog", "ok", "p2"},
                      {"p2", "SecAcc(PrevKey)", "accept", "bad"},
                      {"p2", "*", "accept", "p1"}};
  out.push_back(std::move(prev));
  return out;
}

std::vector<SafetyProperty> parse_properties(std::string_view text) {
  std::vector<SafetyProperty> out;
  std::optional<SafetyProperty> current;
  bool header = false;
  int line_no = 0;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    const SourceLocation where{line_no, 1};
    std::string description;
    if (auto q1 = line.find('"'); q1 != std::string::npos) {
      const auto q2 = line.rfind('"');
      if (q2 == q1) throw ParseError("unterminated description", where);
      description = line.substr(q1 + 1, q2 - q1 - 1);
      line.erase(q1, q2 - q1 + 1);
    }
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "autosec-property" || tok[1] != "1") {
        throw ParseError("expected header \"autosec-property 1\"", where);
      }
      header = true;
      continue;
    }
    if (tok[0] == "property") {
      if (current) throw ParseError("missing \"end\" before new property", where);
      if (tok.size() != 2) throw ParseError("expected property <id> \"description\"", where);
      current = SafetyProperty{tok[1], description, "", {}, {}};
      continue;
    }
    if (!current) throw ParseError("statement outside a property block", where);
    if (tok[0] == "end") {
      if (current->initial.empty()) throw ParseError("property " + current->id + " has no initial state", where);
      out.push_back(std::move(*current));
      current.reset();
    } else if (tok[0] == "initial" && tok.size() == 2) {
      current->initial = tok[1];
    } else if (tok[0] == "accepting" && tok.size() >= 2) {
      current->accepting.insert(current->accepting.end(), tok.begin() + 1, tok.end());
    } else if (tok[0] == "after" || tok[0] == "forbid") {
      auto f = std::find(tok.begin(), tok.end(), "forbid");
      if (f == tok.end() || tok.end() - f != 4 || *(f + 2) != "/") {
        throw ParseError("expected after <inputs> forbid <input> / <output>", where);
      }
      if (!current->transitions.empty() || !current->initial.empty()) {
        throw ParseError("shorthand cannot be mixed with an explicit automaton", where);
      }
      const Word after(tok[0] == "after" ? tok.begin() + 1 : tok.begin(), f);
      SafetyProperty p = forbid_after(current->id, current->description, after, *(f + 1), *(f + 3));
      current->initial = p.initial;
      current->accepting = p.accepting;
      current->transitions = p.transitions;
    } else if (tok.size() == 6 && tok[2] == "/" && tok[4] == "->") {
      current->transitions.push_back({tok[0], tok[1], tok[3], tok[5]});
    } else {
      throw ParseError("expected \"<state> <input> / <output> -> <state>\"", where);
    }
  }
  if (!header) throw ParseError("empty property file", {line_no + 1, 1});
  if (current) throw ParseError("missing \"end\" for property " + current->id, {line_no, 1});
  return out;
}

std::vector<SafetyProperty> load_properties(const std::string& path) { return parse_properties(read_file(path)); }

std::string serialize_properties(const std::vector<SafetyProperty>& properties) {
  std::ostringstream os;
  os << "autosec-property 1\n";
  for (const auto& p : properties) {
    os << "\nproperty " << p.id << " \"" << p.description << "\"\n";
    os << "  initial " << p.initial << '\n';
    os << "  accepting " << join_word(p.accepting) << '\n';
    for (const auto& t : p.transitions) {
      os << "  " << t.from << ' ' << t.input << " / " << t.output << " -> " << t.to << '\n';
    }
    os << "end\n";
  }
  return os.str();
}

CheckResult check(const MealyMachine& machine, const SafetyProperty& property) {
  machine.check_complete();
  for (const auto& t : property.transitions) {
    if (t.input != "*" && !machine.input_index(t.input)) {
      throw Error("property " + property.id + ": input \"" + t.input + "\" not in the machine's alphabet");
    }
    if (t.output != "*" && !machine.output_index(t.output)) {
      throw Error("property " + property.id + ": output \"" + t.output + "\" not in the machine's alphabet");
    }
  }
  std::map<std::string, std::size_t> pstate;
  auto intern = [&](const std::string& s) { return pstate.emplace(s, pstate.size()).first->second; };
  const std::size_t p0 = intern(property.initial);
  for (const auto& t : property.transitions) {
    intern(t.from);
    intern(t.to);
  }
  std::vector<bool> accepting(pstate.size(), false);
  for (const auto& a : property.accepting) {
    if (auto it = pstate.find(a); it != pstate.end()) accepting[it->second] = true;
  }
  // Pattern step for each (pattern state, input, output).
  const std::size_t np = pstate.size();
  auto step = [&](std::size_t p, std::size_t i, std::size_t o) {
    for (const auto& t : property.transitions) {
      if (pstate.at(t.from) == p && matches(t.input, machine.inputs()[i]) && matches(t.output, machine.outputs()[o])) {
        return pstate.at(t.to);
      }
    }
    return p;
  };

  CheckResult result;
  if (accepting[p0]) {
    result.passed = false;
    return result;
  }
  struct Node {
    std::size_t m, p, parent, input;
  };
  std::vector<Node> nodes{{machine.initial(), p0, MealyMachine::kNone, 0}};
  std::vector<bool> seen(machine.num_states() * np, false);
  seen[machine.initial() * np + p0] = true;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    for (std::size_t i = 0; i < machine.num_inputs(); ++i) {
      const std::size_t m = nodes[k].m;
      const std::size_t np_state = step(nodes[k].p, i, machine.output(m, i));
      const std::size_t nm = machine.target(m, i);
      if (accepting[np_state]) {
        result.passed = false;
        result.inputs.push_back(machine.inputs()[i]);
        for (std::size_t c = k; nodes[c].parent != MealyMachine::kNone; c = nodes[c].parent) {
          result.inputs.push_back(machine.inputs()[nodes[c].input]);
        }
        std::reverse(result.inputs.begin(), result.inputs.end());
        result.outputs = machine.run(result.inputs);
        return result;
      }
      if (seen[nm * np + np_state]) continue;
      seen[nm * np + np_state] = true;
      nodes.push_back({nm, np_state, k, i});
    }
  }
  return result;
}

std::vector<Sink> find_sinks(const MealyMachine& machine, const std::vector<std::string>& escape_inputs) {
  std::vector<bool> escape(machine.num_inputs(), false);
  for (const auto& e : escape_inputs) {
    auto i = machine.input_index(e);
    if (!i) throw Error("escape input \"" + e + "\" not in the machine's alphabet");
    escape[*i] = true;
  }
  const auto access = access_words(machine);
  std::vector<Sink> out;
  for (std::size_t s = 0; s < machine.num_states(); ++s) {
    if (!access[s]) continue;
    bool sink = true;
    for (std::size_t i = 0; i < machine.num_inputs() && sink; ++i) {
      if (!escape[i] && machine.target(s, i) != s) sink = false;
    }
    if (sink) out.push_back({machine.state_names()[s], *access[s]});
  }
  return out;
}

TestSuite fuzz_from_model(const MealyMachine& machine, const FuzzOptions& options) {
  if (options.budget == 0) throw Error("fuzz budget must be at least 1");
  machine.check_complete();
  std::mt19937_64 rng(options.seed);
  const auto& alphabet = machine.inputs();
  auto symbol = [&] { return alphabet[uniform_below(rng, alphabet.size())]; };
  TestSuite suite;
  for (std::size_t n = 0; n < options.budget; ++n) {
    const std::size_t len = uniform_below(rng, options.max_len + 1);
    Word walk;
    for (std::size_t k = 0; k < len; ++k) walk.push_back(symbol());
    bool mutated = false;
    if (options.mutation_rate > 0.0) {
      Word changed;
      for (const auto& s : walk) {
        if (unit_draw(rng) < options.mutation_rate) {
          changed.push_back(symbol());
          mutated = true;
        }
        if (unit_draw(rng) < options.mutation_rate) {
          changed.push_back(symbol());
          mutated = true;
        } else {
          changed.push_back(s);
        }
      }
      walk = std::move(changed);
    }
    TestCase c{n + 1, walk, std::nullopt};
    if (!mutated) c.expected = machine.run(walk);
    suite.cases.push_back(std::move(c));
  }
  return suite;
}

std::string serialize_suite(const TestSuite& suite) {
  std::ostringstream os;
  os << "autosec-suite 1\n";
  for (const auto& c : suite.cases) {
    os << "case " << c.id << (c.expected ? " expect" : " free") << " | " << join_word(c.inputs) << " | "
       << (c.expected ? join_word(*c.expected) : std::string()) << '\n';
  }
  return os.str();
}

TestSuite parse_suite(std::string_view text) {
  TestSuite suite;
  bool header = false;
  int line_no = 0;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    const SourceLocation where{line_no, 1};
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (split_ws(line).empty()) continue;
    if (!header) {
      if (split_ws(line) != std::vector<std::string>{"autosec-suite", "1"}) {
        throw ParseError("expected header \"autosec-suite 1\"", where);
      }
      header = true;
      continue;
    }
    const auto bar1 = line.find('|');
    const auto bar2 = bar1 == std::string::npos ? std::string::npos : line.find('|', bar1 + 1);
    if (bar2 == std::string::npos) throw ParseError("expected case <n> expect|free | inputs | outputs", where);
    const auto head = split_ws(line.substr(0, bar1));
    if (head.size() != 3 || head[0] != "case" || (head[2] != "expect" && head[2] != "free")) {
      throw ParseError("expected case <n> expect|free", where);
    }
    TestCase c;
    try {
      c.id = std::stoul(head[1]);
    } catch (const std::exception&) {
      throw ParseError("invalid case number \"" + head[1] + "\"", where);
    }
    c.inputs = split_ws(line.substr(bar1 + 1, bar2 - bar1 - 1));
    const Word outputs = split_ws(line.substr(bar2 + 1));
    if (head[2] == "expect") {
      if (outputs.size() != c.inputs.size()) throw ParseError("expected outputs must match the inputs in length", where);
      c.expected = outputs;
    } else if (!outputs.empty()) {
      throw ParseError("a free case carries no outputs", where);
    }
    suite.cases.push_back(std::move(c));
  }
  if (!header) throw ParseError("empty suite file", {line_no + 1, 1});
  return suite;
}

TestSuite load_suite(const std::string& path) { return parse_suite(read_file(path)); }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const CaseResult& r) { return !r.passed; }));
}

std::vector<Word> VerifyReport::counterexamples() const {
  std::vector<Word> out;
  for (const auto& r : results) {
    if (r.passed || !r.expected || !r.error.empty()) continue;
    for (std::size_t k = 0; k < r.observed.size(); ++k) {
      if (r.observed[k] != (*r.expected)[k]) {
        out.emplace_back(r.inputs.begin(), r.inputs.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        break;
      }
    }
  }
  return out;
}

VerifyReport verify_suite(const TestSuite& suite, SulSession& sul, Mapper& mapper) {
  VerifyReport report;
  for (const auto& c : suite.cases) {
    CaseResult r;
    r.id = c.id;
    r.inputs = c.inputs;
    r.expected = c.expected;
    try {
      for (const auto& s : c.inputs) {
        if (std::find(mapper.inputs().begin(), mapper.inputs().end(), s) == mapper.inputs().end()) {
          throw Error("input \"" + s + "\" not in the SUL alphabet");
        }
      }
      sul.reset();
      mapper.reset();
      for (const auto& s : c.inputs) r.observed.push_back(mapper.abstract_output(sul.step(mapper.concretize(s))));
      r.passed = !c.expected || r.observed == *c.expected;
    } catch (const Error& e) {
      r.passed = false;
      r.error = e.what();
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace autosec
