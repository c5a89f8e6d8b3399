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

#include <algorithm>
#include <atomic>
#include <cstdint>

#include <omp.h>

#include "autosec/error.hpp"
#include "autosec/threat.hpp"

namespace autosec {

namespace {

// Per-element pattern outcomes, computed once per flow query.
struct FlowIndex {
  std::vector<std::vector<std::size_t>> successors;  // sorted, deduplicated
  std::vector<std::optional<PatternBinding>> source;
  std::vector<std::optional<PatternBinding>> target;
  std::vector<std::vector<std::uint8_t>> includes;  // [pattern][element]
  std::vector<std::uint8_t> excluded;
  std::size_t max_len = 0;
};

FlowIndex build_index(const SystemModel& model, const FlowPattern& pattern, const FlowOptions& options) {
  const std::size_t n = model.elements.size();
  FlowIndex idx;
  idx.successors.resize(n);
  for (const auto& c : model.connectors) {
    auto from = model.element_index(c.source);
    auto to = model.element_index(c.target);
    if (from && to && *from != *to) idx.successors[*from].push_back(*to);
  }
  for (auto& s : idx.successors) {
    std::sort(s.begin(), s.end(), [&](std::size_t a, std::size_t b) {
      return model.elements[a].id < model.elements[b].id;
    });
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  idx.source.resize(n);
  idx.target.resize(n);
  idx.excluded.assign(n, 0);
  idx.includes.assign(pattern.includes.size(), std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const Element& e = model.elements[i];
    idx.source[i] = bind_pattern(model, e, pattern.source);
    idx.target[i] = bind_pattern(model, e, pattern.target);
    for (const auto& ex : pattern.excludes) {
      if (bind_pattern(model, e, ex)) idx.excluded[i] = 1;
    }
    for (std::size_t k = 0; k < pattern.includes.size(); ++k) {
      idx.includes[k][i] = bind_pattern(model, e, pattern.includes[k]) ? 1 : 0;
    }
  }
  idx.max_len = options.max_len == 0 ? n : options.max_len;
  return idx;
}

// Depth-first enumeration of simple paths from one source. Excluded
// elements are never entered, since any path through them is rejected.
class PathWalker {
 public:
  PathWalker(const FlowIndex& idx, std::atomic<std::size_t>& explored, std::size_t budget)
      : idx_(idx), explored_(explored), budget_(budget), on_path_(idx.successors.size(), 0),
        include_hits_(idx.includes.size(), 0) {}

  // Returns false when the shared budget ran out.
  bool walk(std::size_t source, std::vector<std::vector<std::size_t>>& found) {
    found_ = &found;
    path_.clear();
    return enter(source);
  }

 private:
  bool enter(std::size_t v) {
    if (explored_.fetch_add(1, std::memory_order_relaxed) >= budget_) return false;
    path_.push_back(v);
    on_path_[v] = 1;
    if (path_.size() > 1) {
      for (std::size_t k = 0; k < include_hits_.size(); ++k) include_hits_[k] += idx_.includes[k][v];
    }
    bool ok = true;
    if (path_.size() >= 2 && idx_.target[v] && covers_includes(v)) found_->push_back(path_);
    if (path_.size() < idx_.max_len) {
      for (std::size_t w : idx_.successors[v]) {
        if (on_path_[w] || idx_.excluded[w]) continue;
        if (!enter(w)) {
          ok = false;
          break;
        }
      }
    }
    if (path_.size() > 1) {
      for (std::size_t k = 0; k < include_hits_.size(); ++k) include_hits_[k] -= idx_.includes[k][v];
    }
    on_path_[v] = 0;
    path_.pop_back();
    return ok;
  }

  // Includes must be hit strictly between the endpoints.
  bool covers_includes(std::size_t end) const {
    for (std::size_t k = 0; k < include_hits_.size(); ++k) {
      if (include_hits_[k] - idx_.includes[k][end] == 0) return false;
    }
    return true;
  }

  const FlowIndex& idx_;
  std::atomic<std::size_t>& explored_;
  std::size_t budget_;
  std::vector<std::uint8_t> on_path_;
  std::vector<std::size_t> include_hits_;
  std::vector<std::size_t> path_;
  std::vector<std::vector<std::size_t>>* found_ = nullptr;
};

std::vector<std::size_t> source_candidates(const FlowIndex& idx) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < idx.source.size(); ++i) {
    if (idx.source[i] && !idx.excluded[i]) out.push_back(i);
  }
  return out;
}

std::vector<ThreatMatch> assemble(const SystemModel& model, const FlowIndex& idx,
                                  const std::vector<std::vector<std::vector<std::size_t>>>& per_source) {
  std::vector<ThreatMatch> out;
  for (const auto& paths : per_source) {
    for (const auto& p : paths) {
      ThreatMatch m;
      m.kind = MatchKind::Flow;
      for (std::size_t v : p) m.path.push_back(model.elements[v].id);
      const auto& src = *idx.source[p.front()];
      const auto& dst = *idx.target[p.back()];
      m.assumptions = src.requirements;
      m.assumptions.insert(m.assumptions.end(), dst.requirements.begin(), dst.requirements.end());
      m.granted = src.grants;
      m.granted.insert(m.granted.end(), dst.grants.begin(), dst.grants.end());
      out.push_back(std::move(m));
    }
  }
  std::sort(out.begin(), out.end(), [](const ThreatMatch& a, const ThreatMatch& b) { return a.path < b.path; });
  return out;
}

[[noreturn]] void budget_exhausted(std::size_t budget) {
  throw BudgetExceeded("flow path budget of " + std::to_string(budget) +
                       " explored paths exceeded; partial results refused");
}

}  // namespace

std::vector<ThreatMatch> match_flow_serial(const SystemModel& model, const FlowPattern& pattern,
                                           const FlowOptions& options) {
  if (options.max_len == 1) throw Error("max_len must be at least 2");
  const FlowIndex idx = build_index(model, pattern, options);
  const auto sources = source_candidates(idx);
  std::atomic<std::size_t> explored{0};
  PathWalker walker(idx, explored, options.budget);
  std::vector<std::vector<std::vector<std::size_t>>> per_source(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (!walker.walk(sources[i], per_source[i])) budget_exhausted(options.budget);
  }
  return assemble(model, idx, per_source);
}

std::vector<ThreatMatch> match_flow_parallel(const SystemModel& model, const FlowPattern& pattern,
                                             const FlowOptions& options) {
  if (options.max_len == 1) throw Error("max_len must be at least 2");
  const FlowIndex idx = build_index(model, pattern, options);
  const auto sources = source_candidates(idx);
  std::atomic<std::size_t> explored{0};
  std::atomic<bool> exhausted{false};
  std::vector<std::vector<std::vector<std::size_t>>> per_source(sources.size());
  const auto count = static_cast<std::int64_t>(sources.size());

#pragma omp parallel
  {
    PathWalker walker(idx, explored, options.budget);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
      if (exhausted.load(std::memory_order_relaxed)) continue;
      if (!walker.walk(sources[static_cast<std::size_t>(i)], per_source[static_cast<std::size_t>(i)])) {
        exhausted.store(true, std::memory_order_relaxed);
      }
    }
  }
  if (exhausted.load()) budget_exhausted(options.budget);
  return assemble(model, idx, per_source);
}

}  // namespace autosec
