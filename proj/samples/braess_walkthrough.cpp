// Copyright 2026 The conga Authors
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

// Builds the Braess network in code, solves it and scans for edges whose
// removal lowers the equilibrium latency.

#include <cstdio>

#include "conga/conga.hpp"

int main() {
  using conga::LatencyFunction;
  const conga::InfoGraph g = conga::make_info_graph(
      {},
      {{"A", "B", "AB", LatencyFunction::affine(0, 1)},
       {"A", "C", "AC", LatencyFunction::constant(1)},
       {"B", "C", "BC", LatencyFunction::constant(0)},
       {"B", "D", "BD", LatencyFunction::constant(1)},
       {"C", "D", "CD", LatencyFunction::affine(0, 1)}},
      "A", "D");
  const conga::NonatomicGame game(g, 1.0);

  const auto eq = conga::solve_wardrop(game);
  const auto opt = conga::solve_social_optimum(game);
  std::printf("equilibrium latency %.4f, system cost %.4f\n", eq.min_path_latency,
              eq.system_cost);
  std::printf("optimum system cost %.4f\n", opt.system_cost);
  for (const auto& pf : conga::flow_decomposition(game, opt.flow)) {
    if (pf.amount < 1e-6) continue;
    std::printf("  optimum routes %.4f on %s\n", pf.amount,
                conga::path_to_string(g, pf.path).c_str());
  }

  for (const auto& entry : conga::braess_scan(game).entries) {
    if (entry.paradox) {
      std::printf("removing %s lowers latency to %.4f\n", entry.label.c_str(),
                  entry.removed_latency);
    }
  }
  return 0;
}
