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

#include "autosec/report.hpp"

#include <cstdio>
#include <sstream>

#include "autosec/model.hpp"

namespace autosec {

using nlohmann::json;

std::string fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

InputDigest digest_file(const std::string& role, const std::string& path) {
  return {role, path, fnv1a64(read_file(path))};
}

json report_header(const std::string& command, const std::vector<InputDigest>& inputs,
                   std::optional<std::uint64_t> seed) {
  json h;
  h["tool"] = "autosec";
  h["version"] = std::string(kToolVersion);
  h["command"] = command;
  h["inputs"] = json::array();
  for (const auto& i : inputs) h["inputs"].push_back({{"role", i.role}, {"path", i.path}, {"fnv1a64", i.digest}});
  h["seed"] = seed ? json(*seed) : json(nullptr);
  return h;
}

namespace {

json requirements_json(const std::vector<Requirement>& reqs) {
  json a = json::array();
  for (const auto& r : reqs) {
    a.push_back({{"subject", r.subject}, {"capability", r.capability}, {"op", std::string(to_string(r.op))},
                 {"level", r.level}});
  }
  return a;
}

json goal_json(const GoalNode& g) {
  json j{{"subject", g.subject},
         {"capability", g.capability},
         {"level", g.level},
         {"exact", g.exact},
         {"feasible", g.feasible}};
  j["rules"] = json::array();
  for (const auto& r : g.children) {
    json rj{{"rule", r.rule_id}, {"match", r.match_key}};
    rj["leaves"] = json::array();
    for (const auto& l : r.leaves) {
      rj["leaves"].push_back({{"element", l.element}, {"condition", l.condition}, {"actual", l.actual}});
    }
    rj["requires"] = json::array();
    for (const auto& c : r.children) rj["requires"].push_back(goal_json(c));
    j["rules"].push_back(std::move(rj));
  }
  return j;
}

}  // namespace

json threat_report_json(const ThreatReport& report) {
  json j;
  j["mode"] = report.mode == AnalysisMode::Standalone ? "standalone" : "chained";
  j["match_count"] = report.match_count();
  j["findings"] = json::array();
  for (const auto& f : report.findings) {
    json fj{{"rule", f.rule_id}, {"title", f.title}, {"severity", std::string(to_string(f.severity))}};
    fj["matches"] = json::array();
    for (const auto& m : f.matches) {
      json mj{{"kind", m.kind == MatchKind::Element ? "element" : "flow"}, {"path", m.path}};
      mj["assumptions"] = requirements_json(m.assumptions);
      mj["discharged"] = requirements_json(m.discharged);
      mj["grants"] = json::array();
      for (const auto& g : m.granted) {
        mj["grants"].push_back({{"subject", g.subject}, {"capability", g.capability}, {"level", g.level}});
      }
      fj["matches"].push_back(std::move(mj));
    }
    j["findings"].push_back(std::move(fj));
  }
  return j;
}

std::string threat_report_text(const ThreatReport& report) {
  std::ostringstream os;
  os << report.match_count() << " threat match(es), "
     << (report.mode == AnalysisMode::Standalone ? "standalone" : "chained") << " mode\n";
  for (const auto& f : report.findings) {
    os << "\n[" << to_string(f.severity) << "] " << f.rule_id << ": " << f.title << '\n';
    for (const auto& m : f.matches) {
      os << "  ";
      for (std::size_t i = 0; i < m.path.size(); ++i) os << (i ? " -> " : "") << m.path[i];
      for (const auto& r : m.assumptions) {
        os << "  (assumes " << r.subject << ' ' << r.capability << ' ' << to_string(r.op) << ' ' << r.level << ')';
      }
      os << '\n';
    }
  }
  return os.str();
}

json attack_tree_json(const AttackTree& tree) { return {{"asset", tree.asset}, {"root", goal_json(tree.root)}}; }

json vv_plan_json(const VVPlan& plan) {
  json a = json::array();
  std::size_t rank = 0;
  for (const auto& e : plan.entries) {
    a.push_back({{"rank", ++rank},
                 {"component", e.component},
                 {"attack_paths", e.attack_paths},
                 {"depth_from_entry", e.depth_from_entry},
                 {"entry_point", e.entry_point},
                 {"capabilities", e.capabilities},
                 {"rules", e.rules}});
  }
  return a;
}

json repair_plan_json(const RepairPlan& plan) {
  json j{{"cost", plan.cost}, {"optimal", plan.optimal}, {"fell_back", plan.fell_back}, {"nodes", plan.nodes}};
  j["actions"] = json::array();
  for (const auto& a : plan.actions) {
    j["actions"].push_back(
        {{"element", a.element}, {"attribute", a.attribute}, {"from", a.from}, {"to", a.to}, {"cost", a.cost}});
  }
  return j;
}

json query_stats_json(const QueryStats& s) {
  return {{"membership_queries", s.membership_queries},
          {"cache_hits", s.cache_hits},
          {"equivalence_queries", s.equivalence_queries},
          {"test_queries", s.test_queries},
          {"steps", s.steps},
          {"resets", s.resets}};
}

json check_result_json(const SafetyProperty& property, const CheckResult& result) {
  json j{{"property", property.id}, {"description", property.description}, {"passed", result.passed}};
  if (!result.passed) j["witness"] = {{"inputs", result.inputs}, {"outputs", result.outputs}};
  return j;
}

json sinks_json(const std::vector<Sink>& sinks) {
  json a = json::array();
  for (const auto& s : sinks) a.push_back({{"state", s.state}, {"access", s.access}});
  return a;
}

json verify_report_json(const VerifyReport& report) {
  json j{{"cases", report.results.size()}, {"failures", report.failures()}};
  j["results"] = json::array();
  for (const auto& r : report.results) {
    json rj{{"id", r.id}, {"passed", r.passed}, {"inputs", r.inputs}, {"observed", r.observed}};
    rj["expected"] = r.expected ? json(*r.expected) : json(nullptr);
    if (!r.error.empty()) rj["error"] = r.error;
    j["results"].push_back(std::move(rj));
  }
  j["counterexamples"] = report.counterexamples();
  return j;
}

}  // namespace autosec
