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

// Serial versus OpenMP flow matching on random dense models.

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "autosec/threat.hpp"

namespace {

using namespace autosec;

SystemModel random_model(std::size_t elements, std::size_t connectors, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SystemModel m;
  const char* types[] = {"ECU", "Interface", "BUS Communication"};
  for (std::size_t i = 0; i < elements; ++i) {
    Element e;
    e.id = "e" + std::to_string(i);
    e.name = e.id;
    e.element_type = types[rng() % 3];
    e.attributes["Authentication"] = rng() % 2 ? "Yes" : "No";
    m.elements.push_back(std::move(e));
  }
  for (std::size_t c = 0; c < connectors; ++c) {
    const std::size_t s = rng() % elements;
    std::size_t t = rng() % elements;
    if (t == s) t = (t + 1) % elements;
    m.connectors.push_back({"c" + std::to_string(c), m.elements[s].id, m.elements[t].id, Medium::Wired, {}});
  }
  m.link_assets();
  return m;
}

FlowPattern pattern() {
  FlowPattern p;
  p.source.element_type = "Interface";
  p.target.element_type = "ECU";
  ElementPattern bus;
  bus.element_type = "BUS Communication";
  p.includes.push_back(bus);
  return p;
}

void BM_FlowSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SystemModel m = random_model(n, 3 * n, 42);
  const FlowPattern p = pattern();
  for (auto _ : state) benchmark::DoNotOptimize(match_flow_serial(m, p));
}

void BM_FlowParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SystemModel m = random_model(n, 3 * n, 42);
  const FlowPattern p = pattern();
  for (auto _ : state) benchmark::DoNotOptimize(match_flow_parallel(m, p));
}

BENCHMARK(BM_FlowSerial)->Arg(10)->Arg(14)->Arg(18);
BENCHMARK(BM_FlowParallel)->Arg(10)->Arg(14)->Arg(18);

}  // namespace

BENCHMARK_MAIN();
