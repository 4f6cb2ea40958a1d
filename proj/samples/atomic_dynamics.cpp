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

// Best-response dynamics for a few players on a game file, checked against
// exhaustive enumeration.

#include <cstdio>
#include <exception>

#include "conga/conga.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <game-file>\n", argv[0]);
    return 2;
  }
  try {
    const auto doc = conga::load_game_file(argv[1]);
    const conga::AtomicGame game(doc.graph, doc.scenario.players.value_or(2));
    const auto r = conga::solve_nash(game);
    std::printf("%zu players settle after %zu moves\n", game.num_players(), r.steps);
    for (std::size_t p = 0; p < game.num_players(); ++p) {
      std::printf("  player %zu: %s cost %.4f\n", p,
                  conga::path_to_string(doc.graph, r.profile.assignments[p]).c_str(),
                  r.player_costs[p]);
    }
    std::printf("potential trace:");
    for (double v : r.potential_trace) std::printf(" %.4f", v);
    std::printf("\n");

    const auto all = conga::exhaustive_nash_oracle(game, 1'000'000);
    std::printf("%zu pure equilibria exist up to relabeling players\n", all.size());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
