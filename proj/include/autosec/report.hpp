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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autosec/attack.hpp"
#include "autosec/learner.hpp"
#include "autosec/repair.hpp"
#include "autosec/threat.hpp"
#include "autosec/vv.hpp"
#include "json.hpp"

namespace autosec {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// FNV-1a 64-bit, 16 lowercase hex digits.
std::string fnv1a64(std::string_view data);

struct InputDigest {
  std::string role;
  std::string path;
  std::string digest;
};

InputDigest digest_file(const std::string& role, const std::string& path);

/// {"tool": ..., "version": ..., "command": ..., "inputs": [...], "seed": ...}
nlohmann::json report_header(const std::string& command, const std::vector<InputDigest>& inputs,
                             std::optional<std::uint64_t> seed = std::nullopt);

nlohmann::json threat_report_json(const ThreatReport& report);
std::string threat_report_text(const ThreatReport& report);
nlohmann::json attack_tree_json(const AttackTree& tree);
nlohmann::json vv_plan_json(const VVPlan& plan);
nlohmann::json repair_plan_json(const RepairPlan& plan);
nlohmann::json query_stats_json(const QueryStats& stats);
nlohmann::json check_result_json(const SafetyProperty& property, const CheckResult& result);
nlohmann::json sinks_json(const std::vector<Sink>& sinks);
nlohmann::json verify_report_json(const VerifyReport& report);

}  // namespace autosec
