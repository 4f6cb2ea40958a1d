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

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conga/error.hpp"
#include "conga/graph.hpp"

namespace conga {

/// Finite-player congestion game: every player routes one indivisible unit
/// of work along a source-sink path. Each edge is one resource.
class AtomicGame {
 public:
  AtomicGame(InfoGraph graph, std::size_t num_players)
      : graph_(std::move(graph)), num_players_(num_players) {
    require_valid(graph_);
    if (num_players_ < 1) {
      throw Error(ErrorCode::kInvalidGame, "an atomic game needs >= 1 player");
    }
  }

  const InfoGraph& graph() const { return graph_; }
  std::size_t num_players() const { return num_players_; }

 private:
  InfoGraph graph_;
  std::size_t num_players_;
};

/// One path per player, indexed by player.
struct StrategyProfile {
  std::vector<Path> assignments;

  bool operator==(const StrategyProfile&) const = default;
};

/// Number of players using each edge, indexed by edge.
struct LoadVector {
  std::vector<std::size_t> loads;

  std::size_t operator[](EdgeIndex e) const { return loads[e]; }
  bool operator==(const LoadVector&) const = default;
};

inline LoadVector edge_loads(const AtomicGame& game,
                             const StrategyProfile& profile) {
  const InfoGraph& g = game.graph();
  if (profile.assignments.size() != game.num_players()) {
    throw Error(ErrorCode::kInvalidGame,
                "profile has " + std::to_string(profile.assignments.size()) +
                    " paths for " + std::to_string(game.num_players()) +
                    " players");
  }
  LoadVector result{std::vector<std::size_t>(g.num_edges(), 0)};
  for (std::size_t p = 0; p < profile.assignments.size(); ++p) {
    const Path& path = profile.assignments[p];
    if (!is_valid_path(g, path)) {
      throw Error(ErrorCode::kInvalidGame,
                  "player " + std::to_string(p) + " has an invalid path");
    }
    for (EdgeIndex e : path.edges) ++result.loads[e];
  }
  return result;
}

inline double player_cost(const AtomicGame& game, const LoadVector& loads,
                          const Path& path) {
  double total = 0.0;
  for (EdgeIndex e : path.edges) {
    total += game.graph().edge(e).latency(static_cast<double>(loads[e]));
  }
  return total;
}

inline double player_cost(const AtomicGame& game,
                          const StrategyProfile& profile, std::size_t player) {
  return player_cost(game, edge_loads(game, profile),
                     profile.assignments.at(player));
}

inline std::vector<double> player_costs(const AtomicGame& game,
                                        const StrategyProfile& profile) {
  const LoadVector loads = edge_loads(game, profile);
  std::vector<double> costs;
  costs.reserve(profile.assignments.size());
  for (const Path& p : profile.assignments) {
    costs.push_back(player_cost(game, loads, p));
  }
  return costs;
}

/// Completion time of the slowest process.
inline double makespan(const AtomicGame& game, const StrategyProfile& profile) {
  const auto costs = player_costs(game, profile);
  return *std::max_element(costs.begin(), costs.end());
}

/// Sum of player costs, equal to sum over edges of load * f(load).
inline double total_cost(const AtomicGame& game,
                         const StrategyProfile& profile) {
  double total = 0.0;
  for (double c : player_costs(game, profile)) total += c;
  return total;
}

/// Rosenthal potential: sum over edges of f(1) + ... + f(load).
inline double rosenthal_potential(const AtomicGame& game,
                                  const StrategyProfile& profile) {
  const LoadVector loads = edge_loads(game, profile);
  double total = 0.0;
  for (EdgeIndex e = 0; e < loads.loads.size(); ++e) {
    const auto& f = game.graph().edge(e).latency;
    for (std::size_t i = 1; i <= loads[e]; ++i) {
      total += f(static_cast<double>(i));
    }
  }
  return total;
}

/// Cheapest path for `player` with everyone else held fixed. Ties follow
/// shortest_path (lexicographically smallest path).
inline RoutedPath best_response(const AtomicGame& game,
                                const StrategyProfile& profile,
                                std::size_t player) {
  const InfoGraph& g = game.graph();
  LoadVector loads = edge_loads(game, profile);
  for (EdgeIndex e : profile.assignments.at(player).edges) --loads.loads[e];
  std::vector<double> costs(g.num_edges());
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    costs[e] = g.edge(e).latency(static_cast<double>(loads[e] + 1));
  }
  return shortest_path(g, costs);
}

struct Deviation {
  std::size_t player = 0;
  Path path;
  double current_cost = 0.0;
  double deviation_cost = 0.0;

  double improvement() const { return current_cost - deviation_cost; }
};

struct NashCheck {
  bool equilibrium = true;
  /// First player (by index) with an improving deviation, when not Nash.
  std::optional<Deviation> witness;

  explicit operator bool() const { return equilibrium; }
};

inline NashCheck is_nash(const AtomicGame& game,
                         const StrategyProfile& profile, double tolerance) {
  const LoadVector loads = edge_loads(game, profile);
  for (std::size_t p = 0; p < profile.assignments.size(); ++p) {
    const double current = player_cost(game, loads, profile.assignments[p]);
    RoutedPath br = best_response(game, profile, p);
    if (current > br.cost + tolerance) {
      return {false, Deviation{p, std::move(br.path), current, br.cost}};
    }
  }
  return {};
}

struct NashConfig {
  std::size_t max_steps = 100000;
  /// A move is taken only if it lowers the mover's cost by more than this.
  double tolerance = 1e-9;
};

struct NashReport {
  StrategyProfile profile;
  std::vector<double> player_costs;
  double total_cost = 0.0;
  double makespan = 0.0;
  double potential = 0.0;
  /// Potential of the initial profile followed by its value after each move.
  std::vector<double> potential_trace;
  std::size_t steps = 0;

  bool operator==(const NashReport&) const = default;
};

class StepLimitExceeded : public Error {
 public:
  StepLimitExceeded(std::size_t steps, std::vector<double> potential_trace)
      : Error(ErrorCode::kStepLimitExceeded,
              "best-response dynamics did not settle within " +
                  std::to_string(steps) + " moves"),
        potential_trace_(std::move(potential_trace)) {}

  const std::vector<double>& potential_trace() const {
    return potential_trace_;
  }

 private:
  std::vector<double> potential_trace_;
};

/// Round-robin best-response dynamics from the all-on-first-path profile.
/// Each strict improvement lowers the Rosenthal potential by exactly the
/// mover's gain, so the dynamics terminate in exact arithmetic. With
/// floating-point latencies and tolerance 0 a near-tie can still cycle,
/// which surfaces as StepLimitExceeded.
inline NashReport solve_nash(const AtomicGame& game,
                             const NashConfig& config = {}) {
  const InfoGraph& g = game.graph();
  const std::vector<double> zero(g.num_edges(), 0.0);
  StrategyProfile profile{std::vector<Path>(game.num_players(),
                                            shortest_path(g, zero).path)};
  NashReport report;
  report.potential_trace.push_back(rosenthal_potential(game, profile));
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t p = 0; p < game.num_players(); ++p) {
      const double current = player_cost(game, profile, p);
      RoutedPath br = best_response(game, profile, p);
      if (current - br.cost > config.tolerance) {
        if (report.steps == config.max_steps) {
          throw StepLimitExceeded(config.max_steps,
                                  std::move(report.potential_trace));
        }
        profile.assignments[p] = std::move(br.path);
        report.potential_trace.push_back(rosenthal_potential(game, profile));
        ++report.steps;
        moved = true;
      }
    }
  }
  report.player_costs = player_costs(game, profile);
  for (double c : report.player_costs) report.total_cost += c;
  report.makespan = *std::max_element(report.player_costs.begin(),
                                      report.player_costs.end());
  report.potential = report.potential_trace.back();
  report.profile = std::move(profile);
  return report;
}

/// Sorts a profile's paths lexicographically; equilibria of a game with
/// identical players are closed under relabeling, so this is a canonical
/// representative.
inline StrategyProfile canonicalize(const InfoGraph& g,
                                    StrategyProfile profile) {
  std::sort(profile.assignments.begin(), profile.assignments.end(),
            [&g](const Path& a, const Path& b) { return path_less(g, a, b); });
  return profile;
}

/// Calls `visit` once per profile up to relabeling of players (multisets of
/// paths, in lexicographic order). Throws kProfileExplosion when
/// |paths|^players exceeds `cap`.
inline void for_each_canonical_profile(
    const AtomicGame& game, const std::vector<Path>& paths, std::uint64_t cap,
    const std::function<void(const StrategyProfile&)>& visit) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    if (paths.size() != 0 && total > cap / paths.size()) {
      throw Error(ErrorCode::kProfileExplosion,
                  "more than " + std::to_string(cap) + " strategy profiles");
    }
    total *= paths.size();
  }
  if (total > cap) {
    throw Error(ErrorCode::kProfileExplosion,
                "more than " + std::to_string(cap) + " strategy profiles");
  }
  const std::size_t n = game.num_players();
  std::vector<std::size_t> choice(n, 0);
  StrategyProfile profile{std::vector<Path>(n, paths.front())};
  while (true) {
    for (std::size_t p = 0; p < n; ++p) profile.assignments[p] = paths[choice[p]];
    visit(profile);
    // Next nondecreasing index tuple.
    std::size_t p = n;
    while (p > 0 && choice[p - 1] == paths.size() - 1) --p;
    if (p == 0) return;
    const std::size_t v = choice[p - 1] + 1;
    for (std::size_t q = p - 1; q < n; ++q) choice[q] = v;
  }
}

/// Every pure Nash equilibrium (tolerance 0), one canonical profile per
/// relabeling class, sorted. Independent of the dynamics in solve_nash.
inline std::vector<StrategyProfile> exhaustive_nash_oracle(
    const AtomicGame& game, std::uint64_t cap, std::size_t path_cap = 10000) {
  const auto paths = enumerate_paths(game.graph(), path_cap);
  std::vector<StrategyProfile> equilibria;
  for_each_canonical_profile(game, paths, cap,
                             [&](const StrategyProfile& profile) {
                               if (is_nash(game, profile, 0.0)) {
                                 equilibria.push_back(profile);
                               }
                             });
  return equilibria;
}

}  // namespace conga
