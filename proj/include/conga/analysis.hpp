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
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conga/atomic.hpp"
#include "conga/error.hpp"
#include "conga/graph.hpp"
#include "conga/nonatomic.hpp"

namespace conga {

enum class Regime { kAtomic, kNonatomic };

constexpr std::string_view to_string(Regime r) {
  return r == Regime::kAtomic ? "atomic" : "nonatomic";
}

struct PoAReport {
  Regime regime = Regime::kNonatomic;
  double equilibrium_cost = 0.0;
  double optimum_cost = 0.0;
  /// equilibrium_cost / optimum_cost, or 1 when both are 0.
  double ratio = 1.0;
  /// Slowest-process time at each solution (max used path latency in the
  /// nonatomic regime). Reported alongside; not the headline ratio.
  double equilibrium_makespan = 0.0;
  double optimum_makespan = 0.0;
  double makespan_ratio = 1.0;
  /// False when a Frank-Wolfe solve stopped at its iteration limit.
  bool converged = true;

  bool operator==(const PoAReport&) const = default;
};

struct PoAConfig {
  FrankWolfeConfig frank_wolfe;
  NashConfig nash;
  std::uint64_t profile_cap = 1'000'000;
  std::size_t path_cap = 10000;
};

namespace detail {

inline double cost_ratio(double equilibrium, double optimum) {
  if (optimum > 0.0) return equilibrium / optimum;
  if (equilibrium > 0.0) {
    throw Error(ErrorCode::kOptimumIsZero,
                "optimum cost is 0 but equilibrium cost is " +
                    std::to_string(equilibrium));
  }
  return 1.0;
}

}  // namespace detail

/// System cost at the Wardrop flow over system cost at the social optimum.
inline PoAReport price_of_anarchy(const NonatomicGame& game,
                                  const PoAConfig& config = {}) {
  const WardropReport eq = solve_wardrop(game, config.frank_wolfe);
  const WardropReport opt = solve_social_optimum(game, config.frank_wolfe);
  PoAReport r;
  r.regime = Regime::kNonatomic;
  r.equilibrium_cost = eq.system_cost;
  r.optimum_cost = opt.system_cost;
  r.ratio = detail::cost_ratio(r.equilibrium_cost, r.optimum_cost);
  r.equilibrium_makespan = eq.max_used_path_latency;
  r.optimum_makespan = opt.max_used_path_latency;
  r.makespan_ratio = r.optimum_makespan > 0.0
                         ? r.equilibrium_makespan / r.optimum_makespan
                         : 1.0;
  r.converged = eq.converged && opt.converged;
  return r;
}

/// Total player cost at the best-response equilibrium over the minimum total
/// cost across all profiles (exhaustive, so only for small instances).
inline PoAReport price_of_anarchy(const AtomicGame& game,
                                  const PoAConfig& config = {}) {
  const NashReport eq = solve_nash(game, config.nash);
  const auto paths = enumerate_paths(game.graph(), config.path_cap);
  double best_total = std::numeric_limits<double>::infinity();
  double best_makespan = std::numeric_limits<double>::infinity();
  for_each_canonical_profile(
      game, paths, config.profile_cap, [&](const StrategyProfile& profile) {
        const auto costs = player_costs(game, profile);
        double total = 0.0;
        for (double c : costs) total += c;
        best_total = std::min(best_total, total);
        best_makespan =
            std::min(best_makespan, *std::max_element(costs.begin(), costs.end()));
      });
  PoAReport r;
  r.regime = Regime::kAtomic;
  r.equilibrium_cost = eq.total_cost;
  r.optimum_cost = best_total;
  r.ratio = detail::cost_ratio(r.equilibrium_cost, r.optimum_cost);
  r.equilibrium_makespan = eq.makespan;
  r.optimum_makespan = best_makespan;
  r.makespan_ratio =
      best_makespan > 0.0 ? r.equilibrium_makespan / best_makespan : 1.0;
  return r;
}

struct BraessEntry {
  std::string label;
  /// Removing the edge leaves no source-sink path; the numbers below are 0.
  bool disconnected = false;
  double removed_latency = 0.0;
  double removed_system_cost = 0.0;
  /// baseline_latency - removed_latency; positive means the edge hurts.
  double improvement = 0.0;
  bool paradox = false;
  bool converged = true;

  bool operator==(const BraessEntry&) const = default;
};

struct BraessReport {
  double baseline_latency = 0.0;
  double baseline_system_cost = 0.0;
  bool baseline_converged = true;
  std::vector<BraessEntry> entries;

  bool operator==(const BraessReport&) const = default;
};

struct BraessConfig {
  FrankWolfeConfig frank_wolfe;
  /// Minimum improvement that counts as a paradox.
  double paradox_threshold = 1e-6;
  bool parallel = true;
};

/// Removes each edge in turn and re-solves the Wardrop equilibrium on what
/// remains. Entries are ordered by improvement (descending, then label);
/// disconnecting edges come last, by label.
inline BraessReport braess_scan(const NonatomicGame& game,
                                const BraessConfig& config = {}) {
  const InfoGraph& g = game.graph();
  const WardropReport baseline = solve_wardrop(game, config.frank_wolfe);

  auto solve_without = [&](EdgeIndex e) {
    BraessEntry entry;
    entry.label = g.edge(e).label;
    const auto reduced = without_edge(g, entry.label);
    if (!reduced) {
      entry.disconnected = true;
      return entry;
    }
    const WardropReport r =
        solve_wardrop(NonatomicGame(*reduced, game.demand()), config.frank_wolfe);
    entry.removed_latency = r.min_path_latency;
    entry.removed_system_cost = r.system_cost;
    entry.improvement = baseline.min_path_latency - r.min_path_latency;
    entry.paradox = entry.improvement > config.paradox_threshold;
    entry.converged = r.converged;
    return entry;
  };

  BraessReport report;
  report.baseline_latency = baseline.min_path_latency;
  report.baseline_system_cost = baseline.system_cost;
  report.baseline_converged = baseline.converged;
  if (config.parallel) {
    std::vector<std::future<BraessEntry>> pending;
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
      pending.push_back(std::async(std::launch::async, solve_without, e));
    }
    for (auto& f : pending) report.entries.push_back(f.get());
  } else {
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
      report.entries.push_back(solve_without(e));
    }
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const BraessEntry& a, const BraessEntry& b) {
                     if (a.disconnected != b.disconnected) return b.disconnected;
                     if (!a.disconnected && a.improvement != b.improvement) {
                       return a.improvement > b.improvement;
                     }
                     return a.label < b.label;
                   });
  return report;
}

/// Performance multiplier per computing node; unlisted nodes run at 1.
struct NodeProfile {
  std::string name;
  std::map<NodeId, double> speed;

  double speed_of(const NodeId& id) const {
    auto it = speed.find(id);
    return it == speed.end() ? 1.0 : it->second;
  }
  bool operator==(const NodeProfile&) const = default;
};

/// Which endpoint of an edge hosts the work it carries.
enum class SpeedAt { kHead, kTail };

constexpr std::string_view to_string(SpeedAt at) {
  return at == SpeedAt::kHead ? "head" : "tail";
}

/// Divides each edge's latency coefficients by the speed of its head (or
/// tail) node. All-ones is the identity.
inline InfoGraph apply_node_profile(const InfoGraph& g, const NodeProfile& p,
                                    SpeedAt at = SpeedAt::kHead) {
  for (const auto& [id, s] : p.speed) {
    if (!g.find_node(id)) {
      throw Error(ErrorCode::kUnknownNode, "node profile names unknown node " + id);
    }
    if (!std::isfinite(s) || s <= 0.0) {
      throw Error(ErrorCode::kInvalidSpeed,
                  "node " + id + " has speed " + std::to_string(s));
    }
  }
  std::vector<LatencyFunction> latencies;
  latencies.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    const double s = p.speed_of(at == SpeedAt::kHead ? e.to : e.from);
    std::vector<double> c(e.latency.coefficients().begin(),
                          e.latency.coefficients().end());
    for (double& v : c) v /= s;
    latencies.emplace_back(std::move(c));
  }
  return g.with_latencies(std::move(latencies));
}

struct ScenarioRow {
  std::string name;
  double equilibrium_latency = 0.0;
  double system_cost = 0.0;
  EdgeFlow flow;
  bool converged = false;
  /// Non-empty when the variant could not be solved.
  std::string error;

  bool operator==(const ScenarioRow&) const = default;
};

struct ScenarioComparison {
  std::vector<ScenarioRow> rows;

  bool operator==(const ScenarioComparison&) const = default;
};

struct ScenarioConfig {
  FrankWolfeConfig frank_wolfe;
  SpeedAt speed_at = SpeedAt::kHead;
  bool parallel = true;
};

/// Wardrop equilibrium of the base game under each node profile, one row per
/// variant in input order.
inline ScenarioComparison compare_scenarios(
    const NonatomicGame& base, const std::vector<NodeProfile>& variants,
    const ScenarioConfig& config = {}) {
  auto solve = [&](const NodeProfile& profile) {
    ScenarioRow row;
    row.name = profile.name;
    try {
      const NonatomicGame game(
          apply_node_profile(base.graph(), profile, config.speed_at),
          base.demand());
      const WardropReport r = solve_wardrop(game, config.frank_wolfe);
      row.equilibrium_latency = r.min_path_latency;
      row.system_cost = r.system_cost;
      row.flow = r.flow;
      row.converged = r.converged;
    } catch (const Error& e) {
      row.error = e.what();
    }
    return row;
  };
  ScenarioComparison out;
  if (config.parallel) {
    std::vector<std::future<ScenarioRow>> pending;
    for (const auto& v : variants) {
      pending.push_back(std::async(std::launch::async, solve, std::cref(v)));
    }
    for (auto& f : pending) out.rows.push_back(f.get());
  } else {
    for (const auto& v : variants) out.rows.push_back(solve(v));
  }
  return out;
}

}  // namespace conga
