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

// autosec command-line front end.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "autosec/attack.hpp"
#include "autosec/error.hpp"
#include "autosec/learner.hpp"
#include "autosec/mealy.hpp"
#include "autosec/model.hpp"
#include "autosec/repair.hpp"
#include "autosec/report.hpp"
#include "autosec/rules.hpp"
#include "autosec/suls.hpp"
#include "autosec/threat.hpp"
#include "autosec/vv.hpp"

namespace {

using namespace autosec;
using nlohmann::json;

constexpr int kClean = 0;
constexpr int kError = 1;
constexpr int kFindings = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("AUTOSEC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string("AUTOSEC_SEED is not a number: ") + env);
    }
  }
  return 1;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string text_header(const json& header) {
  std::ostringstream os;
  os << "# " << header["tool"].get<std::string>() << ' ' << header["version"].get<std::string>() << ' '
     << header["command"].get<std::string>() << '\n';
  for (const auto& i : header["inputs"]) {
    os << "# input " << i["role"].get<std::string>() << ' ' << i["path"].get<std::string>() << ' '
       << i["fnv1a64"].get<std::string>() << '\n';
  }
  os << "# seed " << (header["seed"].is_null() ? std::string("-") : std::to_string(header["seed"].get<std::uint64_t>()))
     << '\n';
  return os.str();
}

struct Workspace {
  SystemModel model;
  std::vector<ThreatRule> rules;
  std::vector<InputDigest> digests;
};

Workspace load_workspace(const std::string& model_path, const std::vector<std::string>& rule_paths) {
  Workspace w;
  w.model = load_model(model_path);
  w.digests.push_back(digest_file("model", model_path));
  for (const auto& p : rule_paths) {
    auto rules = load_rules(p);
    w.rules.insert(w.rules.end(), rules.begin(), rules.end());
    w.digests.push_back(digest_file("rules", p));
  }
  bind_rules(w.rules, w.model);
  return w;
}

std::unique_ptr<EquivalenceOracle> make_oracle(const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (kind == "wmethod") return std::make_unique<WMethodOracle>(args.empty() ? 2 : std::stoul(args));
    if (kind == "random") {
      std::vector<std::size_t> v;
      std::stringstream ss(args);
      std::string part;
      while (std::getline(ss, part, ',')) v.push_back(std::stoul(part));
      if (v.size() != 3) throw Error("expected random:<words>,<min>,<max>");
      return std::make_unique<RandomWordsOracle>(v[0], v[1], v[2], seed);
    }
  } catch (const std::logic_error&) {
    throw Error("malformed oracle \"" + spec + "\"");
  }
  throw Error("unknown oracle \"" + spec + "\" (expected wmethod:<k> or random:<words>,<min>,<max>)");
}

std::vector<std::string> split_commas(const std::vector<std::string>& values) {
  std::vector<std::string> out;
  for (const auto& v : values) {
    std::stringstream ss(v);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"autosec: threat analysis and protocol-learning toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // analyze
  std::string model_path, format, mode, out_path, asset;
  std::vector<std::string> rule_paths;
  auto* analyze_cmd = app.add_subcommand("analyze", "Match threat rules against a system model");
  analyze_cmd->add_option("--model", model_path, "System model file")->required();
  analyze_cmd->add_option("--rules", rule_paths, "Rule file (repeatable)")->required();
  analyze_cmd->add_option("--mode", mode, "standalone or chained")->check(CLI::IsMember({"standalone", "chained"}));
  analyze_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  analyze_cmd->add_option("--out", out_path, "Write the report here instead of stdout");

  auto* tree = app.add_subcommand("tree", "Build the attack tree of an asset");
  tree->add_option("--model", model_path, "System model file")->required();
  tree->add_option("--rules", rule_paths, "Rule file (repeatable)")->required();
  tree->add_option("--asset", asset, "Asset id")->required();
  tree->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
  tree->add_option("--out", out_path, "Output file");

  std::string repair_mode = "exact", repaired_model_path;
  std::size_t budget = 100'000;
  auto* repair_cmd = app.add_subcommand("repair", "Suggest minimal attribute raises that remove all threats");
  repair_cmd->add_option("--model", model_path, "System model file")->required();
  repair_cmd->add_option("--rules", rule_paths, "Rule file (repeatable)")->required();
  repair_cmd->add_option("--mode", repair_mode, "exact or greedy")->check(CLI::IsMember({"exact", "greedy"}));
  repair_cmd->add_option("--budget", budget, "Search node budget before greedy fallback");
  repair_cmd->add_option("--repaired-model", repaired_model_path, "Write the repaired model here");
  repair_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  repair_cmd->add_option("--out", out_path, "Output file");

  std::string sul_spec, oracle_spec = "wmethod:2", stats_path, dot_path;
  std::optional<std::uint64_t> seed_opt;
  std::size_t max_steps = QueryLimits{}.max_steps;
  auto* learn_cmd = app.add_subcommand("learn", "Learn a Mealy machine from a system under learning");
  learn_cmd->add_option("--sul", sul_spec, "uds-buggy|uds-fixed|ble-buggy|ble-fixed|file:<machine>")->required();
  learn_cmd->add_option("--oracle", oracle_spec, "wmethod:<k> or random:<words>,<min>,<max>");
  learn_cmd->add_option("--seed", seed_opt, "Seed for randomized oracles (default $AUTOSEC_SEED or 1)");
  learn_cmd->add_option("--out", out_path, "Write the learned machine here");
  learn_cmd->add_option("--dot", dot_path, "Write a Graphviz rendering here");
  learn_cmd->add_option("--stats", stats_path, "Write statistics JSON here (default stdout)");
  learn_cmd->add_option("--max-steps", max_steps, "SUL step limit");

  std::string machine_path, other_path, properties_path;
  std::vector<std::string> property_names;
  auto* check_cmd = app.add_subcommand("check", "Check safety properties on a machine");
  check_cmd->add_option("machine", machine_path, "Machine file")->required();
  check_cmd->add_option("--property", property_names, "Property id or property file (repeatable)");
  check_cmd->add_option("--properties", properties_path, "Property file to look ids up in");
  check_cmd->add_option("--out", out_path, "Output file");

  auto* diff_cmd = app.add_subcommand("diff", "Shortest input word on which two machines differ");
  diff_cmd->add_option("left", machine_path, "Machine file")->required();
  diff_cmd->add_option("right", other_path, "Machine file")->required();

  std::vector<std::string> escapes;
  auto* sinks_cmd = app.add_subcommand("sinks", "Find sink (deadlock) states");
  sinks_cmd->add_option("machine", machine_path, "Machine file")->required();
  sinks_cmd->add_option("--escape", escapes, "Inputs allowed to leave a sink (repeatable or comma list)");

  FuzzOptions fuzz_opts;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Generate a test suite from a machine");
  fuzz_cmd->add_option("machine", machine_path, "Machine file")->required();
  fuzz_cmd->add_option("--budget", fuzz_opts.budget, "Number of cases")->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--max-len", fuzz_opts.max_len, "Maximum word length");
  fuzz_cmd->add_option("--mutation-rate", fuzz_opts.mutation_rate, "Per-symbol mutation probability")
      ->check(CLI::Range(0.0, 1.0));
  fuzz_cmd->add_option("--seed", seed_opt, "Seed (default $AUTOSEC_SEED or 1)");
  fuzz_cmd->add_option("--out", out_path, "Write the suite here (default stdout)");

  std::string suite_path, cex_path;
  auto* verify_cmd = app.add_subcommand("verify", "Run a test suite against a system under learning");
  verify_cmd->add_option("suite", suite_path, "Suite file")->required();
  verify_cmd->add_option("--sul", sul_spec, "uds-buggy|uds-fixed|ble-buggy|ble-fixed|file:<machine>")->required();
  verify_cmd->add_option("--out", out_path, "Output file");
  verify_cmd->add_option("--counterexamples", cex_path, "Write failing words here, one per line");

  auto* simulate_cmd = app.add_subcommand("simulate", "Serve a test double over hex frames on stdin/stdout");
  simulate_cmd->add_option("--sul", sul_spec, "uds-buggy|uds-fixed|ble-buggy|ble-fixed|file:<machine>")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kClean : kError;
  }

  try {
    if (*analyze_cmd) {
      Workspace w = load_workspace(model_path, rule_paths);
      const AnalysisMode m = mode == "chained" ? AnalysisMode::Chained : AnalysisMode::Standalone;
      const ThreatReport report = analyze(w.model, w.rules, m);
      const json header = report_header("analyze", w.digests);
      if (format == "json") {
        write_output(out_path, dump({{"header", header}, {"report", threat_report_json(report)}}));
      } else {
        write_output(out_path, text_header(header) + threat_report_text(report));
      }
      return report.empty() ? kClean : kFindings;
    }

    if (*tree) {
      Workspace w = load_workspace(model_path, rule_paths);
      const AttackTree t = build_attack_tree(w.model, w.rules, asset);
      if (format == "json") {
        const json header = report_header("tree", w.digests);
        write_output(out_path, dump({{"header", header},
                                     {"tree", attack_tree_json(t)},
                                     {"vv_plan", vv_plan_json(derive_vv_plan(w.model, {t}))}}));
      } else {
        write_output(out_path, tree_to_dot(t));
      }
      return t.root.feasible ? kFindings : kClean;
    }

    if (*repair_cmd) {
      Workspace w = load_workspace(model_path, rule_paths);
      RepairOptions opts;
      opts.mode = repair_mode == "greedy" ? RepairMode::Greedy : RepairMode::Exact;
      opts.node_budget = budget;
      const RepairPlan plan = repair(w.model, w.rules, opts);
      if (!repaired_model_path.empty()) write_output(repaired_model_path, serialize_model(apply_repair(w.model, plan)));
      const json header = report_header("repair", w.digests);
      if (format == "json") {
        write_output(out_path, dump({{"header", header}, {"repair", repair_plan_json(plan)}}));
      } else {
        std::ostringstream os;
        os << text_header(header) << "cost " << plan.cost << (plan.optimal ? " (optimal)" : "")
           << (plan.fell_back ? " (greedy fallback)" : "") << '\n';
        for (const auto& a : plan.actions) {
          os << "  " << a.element << ": \"" << a.attribute << "\" " << a.from << " -> " << a.to << '\n';
        }
        write_output(out_path, os.str());
      }
      return plan.actions.empty() ? kClean : kFindings;
    }

    if (*learn_cmd) {
      const std::uint64_t seed = seed_opt.value_or(default_seed());
      SulBundle b = make_sul(sul_spec);
      auto oracle = make_oracle(oracle_spec, seed);
      QueryLimits limits;
      limits.max_steps = max_steps;
      const LearnResult r = learn(*b.sul, *b.mapper, *oracle, limits);
      std::vector<InputDigest> inputs;
      if (sul_spec.rfind("file:", 0) == 0) inputs.push_back(digest_file("sul", sul_spec.substr(5)));
      json stats{{"header", report_header("learn", inputs, seed)},
                 {"sul", sul_spec},
                 {"oracle", oracle->describe()},
                 {"states", r.machine.num_states()},
                 {"rounds", r.rounds},
                 {"hypothesis_sizes", r.hypothesis_sizes},
                 {"counterexamples", r.counterexamples},
                 {"queries", query_stats_json(r.stats)}};
      if (!out_path.empty()) write_output(out_path, serialize_mealy(r.machine));
      if (!dot_path.empty()) write_output(dot_path, mealy_to_dot(r.machine));
      write_output(stats_path, dump(stats));
      return kClean;
    }

    if (*check_cmd) {
      const MealyMachine m = load_mealy(machine_path);
      std::vector<InputDigest> inputs{digest_file("machine", machine_path)};
      std::vector<SafetyProperty> pool = builtin_properties();
      if (!properties_path.empty()) {
        pool = load_properties(properties_path);
        inputs.push_back(digest_file("properties", properties_path));
      }
      std::vector<SafetyProperty> selected;
      if (property_names.empty()) selected = pool;
      for (const auto& name : property_names) {
        auto it = std::find_if(pool.begin(), pool.end(), [&](const SafetyProperty& p) { return p.id == name; });
        if (it != pool.end()) {
          selected.push_back(*it);
          continue;
        }
        if (std::ifstream(name).good()) {
          auto loaded = load_properties(name);
          inputs.push_back(digest_file("properties", name));
          selected.insert(selected.end(), loaded.begin(), loaded.end());
          continue;
        }
        throw Error("unknown property \"" + name + "\"");
      }
      json results = json::array();
      bool violated = false;
      for (const auto& p : selected) {
        const CheckResult r = check(m, p);
        violated = violated || !r.passed;
        results.push_back(check_result_json(p, r));
      }
      write_output(out_path, dump({{"header", report_header("check", inputs)}, {"results", results}}));
      return violated ? kFindings : kClean;
    }

    if (*diff_cmd) {
      const DiffResult d = diff(load_mealy(machine_path), load_mealy(other_path));
      json j{{"header", report_header("diff", {digest_file("left", machine_path), digest_file("right", other_path)})},
             {"equivalent", d.equivalent}};
      if (!d.equivalent) j["witness"] = {{"inputs", d.word}, {"left", d.left}, {"right", d.right}};
      std::cout << dump(j);
      return d.equivalent ? kClean : kFindings;
    }

    if (*sinks_cmd) {
      const auto sinks = find_sinks(load_mealy(machine_path), split_commas(escapes));
      std::cout << dump({{"header", report_header("sinks", {digest_file("machine", machine_path)})},
                         {"escape", split_commas(escapes)},
                         {"sinks", sinks_json(sinks)}});
      return sinks.empty() ? kClean : kFindings;
    }

    if (*fuzz_cmd) {
      fuzz_opts.seed = seed_opt.value_or(default_seed());
      const TestSuite suite = fuzz_from_model(load_mealy(machine_path), fuzz_opts);
      const json header = report_header("fuzz", {digest_file("machine", machine_path)}, fuzz_opts.seed);
      write_output(out_path, text_header(header) + serialize_suite(suite));
      return kClean;
    }

    if (*verify_cmd) {
      const TestSuite suite = load_suite(suite_path);
      SulBundle b = make_sul(sul_spec);
      const VerifyReport report = verify_suite(suite, *b.sul, *b.mapper);
      std::vector<InputDigest> inputs{digest_file("suite", suite_path)};
      if (sul_spec.rfind("file:", 0) == 0) inputs.push_back(digest_file("sul", sul_spec.substr(5)));
      if (!cex_path.empty()) {
        std::string text;
        for (const auto& w : report.counterexamples()) text += join_word(w) + "\n";
        write_output(cex_path, text);
      }
      write_output(out_path, dump({{"header", report_header("verify", inputs)},
                                   {"sul", sul_spec},
                                   {"report", verify_report_json(report)}}));
      return report.failures() == 0 ? kClean : kFindings;
    }

    if (*simulate_cmd) {
      SulBundle b = make_sul(sul_spec);
      serve_frames(*b.sul, std::cin, std::cout);
      return kClean;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
