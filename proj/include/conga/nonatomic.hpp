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
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conga/error.hpp"
#include "conga/graph.hpp"

namespace conga {

/// Infinite-player limit: a divisible demand routed from source to sink.
class NonatomicGame {
 public:
  NonatomicGame(InfoGraph graph, double demand)
      : graph_(std::move(graph)), demand_(demand) {
    require_valid(graph_);
    if (!std::isfinite(demand_) || demand_ <= 0.0) {
      throw Error(ErrorCode::kInvalidGame, "demand must be finite and > 0");
    }
  }

  const InfoGraph& graph() const { return graph_; }
  double demand() const { return demand_; }

 private:
  InfoGraph graph_;
  double demand_;
};

/// Flow per edge, indexed by edge.
struct EdgeFlow {
  std::vector<double> flow;

  double operator[](EdgeIndex e) const { return flow[e]; }
  bool operator==(const EdgeFlow&) const = default;
};

/// Absolute tolerance used for conservation and decomposition checks.
inline double flow_tolerance(const NonatomicGame& game) {
  return 1e-9 * std::max(1.0, game.demand());
}

/// Throws kConservationViolated unless `flow` is nonnegative and routes
/// exactly the game's demand from source to sink.
inline void check_conservation(const NonatomicGame& game, const EdgeFlow& flow) {
  const InfoGraph& g = game.graph();
  if (flow.flow.size() != g.num_edges()) {
    throw Error(ErrorCode::kConservationViolated,
                "flow has " + std::to_string(flow.flow.size()) +
                    " entries for " + std::to_string(g.num_edges()) + " edges");
  }
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    if (!(flow[e] >= 0.0) || !std::isfinite(flow[e])) {
      throw Error(ErrorCode::kConservationViolated,
                  "edge " + g.edge(e).label + " carries flow " +
                      std::to_string(flow[e]));
    }
  }
  const double tol = flow_tolerance(game);
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    double net = 0.0;  // outflow - inflow
    for (EdgeIndex e : g.out_edges(v)) net += flow[e];
    for (EdgeIndex e : g.in_edges(v)) net -= flow[e];
    double expected = 0.0;
    if (v == g.source_index()) expected = game.demand();
    if (v == g.sink_index()) expected = -game.demand();
    if (std::abs(net - expected) > tol) {
      throw Error(ErrorCode::kConservationViolated,
                  "node " + g.nodes()[v] + " has net outflow " +
                      std::to_string(net) + ", expected " +
                      std::to_string(expected));
    }
  }
}

/// Sum over edges of the integral of f_e on [0, x_e]. Its minimizers over
/// feasible flows are the Wardrop equilibria.
inline double beckmann_objective(const NonatomicGame& game,
                                 const EdgeFlow& flow) {
  check_conservation(game, flow);
  double total = 0.0;
  for (EdgeIndex e = 0; e < flow.flow.size(); ++e) {
    total += game.graph().edge(e).latency.integral(flow[e]);
  }
  return total;
}

/// Sum over edges of x_e f_e(x_e).
inline double system_cost(const NonatomicGame& game, const EdgeFlow& flow) {
  check_conservation(game, flow);
  double total = 0.0;
  for (EdgeIndex e = 0; e < flow.flow.size(); ++e) {
    total += flow[e] * game.graph().edge(e).latency(flow[e]);
  }
  return total;
}

/// f_e(x_e) for every edge.
inline std::vector<double> edge_latencies(const NonatomicGame& game,
                                          const EdgeFlow& flow) {
  std::vector<double> out(flow.flow.size());
  for (EdgeIndex e = 0; e < out.size(); ++e) {
    out[e] = game.graph().edge(e).latency(flow[e]);
  }
  return out;
}

inline double path_latency(const NonatomicGame& game, const EdgeFlow& flow,
                           const Path& path) {
  double total = 0.0;
  for (EdgeIndex e : path.edges) total += game.graph().edge(e).latency(flow[e]);
  return total;
}

struct PathFlow {
  Path path;
  double amount = 0.0;

  bool operator==(const PathFlow&) const = default;
};

/// Greedy peeling into path flows: trace a path from the source along the
/// smallest-label edge with positive residual, subtract its bottleneck, and
/// repeat. Each round zeroes at least one edge. Throws
/// kDecompositionResidual if flow is left over.
inline std::vector<PathFlow> flow_decomposition(const NonatomicGame& game,
                                                const EdgeFlow& flow) {
  const InfoGraph& g = game.graph();
  if (flow.flow.size() != g.num_edges()) {
    throw Error(ErrorCode::kDecompositionResidual, "flow size mismatch");
  }
  const double tol = flow_tolerance(game);
  const double positive = 1e-12 * std::max(1.0, game.demand());
  std::vector<double> residual = flow.flow;
  std::vector<PathFlow> result;
  for (std::size_t round = 0; round <= g.num_edges(); ++round) {
    Path path;
    NodeIndex at = g.source_index();
    while (at != g.sink_index()) {
      std::optional<EdgeIndex> pick;
      for (EdgeIndex e : g.out_edges(at)) {
        if (residual[e] > positive) {
          pick = e;
          break;
        }
      }
      if (!pick) break;
      path.edges.push_back(*pick);
      at = g.head(*pick);
    }
    if (path.edges.empty()) break;
    auto bottleneck = std::min_element(
        path.edges.begin(), path.edges.end(),
        [&](EdgeIndex a, EdgeIndex b) { return residual[a] < residual[b]; });
    const double amount = residual[*bottleneck];
    if (at != g.sink_index()) {
      // Dead end: only rounding noise can strand flow here.
      if (amount > tol) {
        throw Error(ErrorCode::kDecompositionResidual,
                    "flow stranded at node " + g.nodes()[at]);
      }
      residual[*bottleneck] = 0.0;
      continue;
    }
    for (EdgeIndex e : path.edges) residual[e] = std::max(0.0, residual[e] - amount);
    residual[*bottleneck] = 0.0;
    result.push_back({std::move(path), amount});
  }
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    if (residual[e] > tol) {
      throw Error(ErrorCode::kDecompositionResidual,
                  "edge " + g.edge(e).label + " keeps residual flow " +
                      std::to_string(residual[e]));
    }
  }
  double routed = 0.0;
  for (const auto& pf : result) routed += pf.amount;
  if (std::abs(routed - game.demand()) > tol) {
    throw Error(ErrorCode::kDecompositionResidual,
                "decomposed paths carry " + std::to_string(routed) +
                    " instead of demand " + std::to_string(game.demand()));
  }
  return result;
}

struct WardropViolation {
  Path path;
  double flow = 0.0;
  double latency = 0.0;
  double shortest = 0.0;

  double excess() const { return latency - shortest; }
};

struct WardropCheck {
  bool equilibrium = true;
  std::optional<WardropViolation> witness;

  explicit operator bool() const { return equilibrium; }
};

/// True iff every path carrying more than `epsilon` flow (in the peeled
/// decomposition) is within `epsilon` of the shortest path latency.
inline WardropCheck verify_wardrop(const NonatomicGame& game,
                                   const EdgeFlow& flow, double epsilon) {
  check_conservation(game, flow);
  const double shortest =
      shortest_path(game.graph(), edge_latencies(game, flow)).cost;
  for (auto& pf : flow_decomposition(game, flow)) {
    if (pf.amount <= epsilon) continue;
    const double latency = path_latency(game, flow, pf.path);
    if (latency > shortest + epsilon) {
      return {false, WardropViolation{std::move(pf.path), pf.amount, latency,
                                      shortest}};
    }
  }
  return {};
}

enum class StepRule {
  /// gamma_k = 2 / (k + 2).
  kHarmonic,
  /// Exact minimization along the segment toward the all-or-nothing flow.
  kLineSearch,
  /// Line search, plus away steps from the worst active path when that
  /// direction is steeper.
  kAwayStep,
};

constexpr std::string_view to_string(StepRule rule) {
  switch (rule) {
    case StepRule::kHarmonic: return "harmonic";
    case StepRule::kLineSearch: return "line-search";
    case StepRule::kAwayStep: return "away-step";
  }
  return "unknown";
}

inline std::optional<StepRule> parse_step_rule(std::string_view text) {
  for (auto rule : {StepRule::kHarmonic, StepRule::kLineSearch,
                    StepRule::kAwayStep}) {
    if (to_string(rule) == text) return rule;
  }
  return std::nullopt;
}

struct FrankWolfeConfig {
  std::size_t max_iters = 10000;
  double gap_tol = 1e-8;
  StepRule step_rule = StepRule::kAwayStep;
  /// Decomposed paths above this fraction of demand count as used.
  double used_path_threshold = 1e-9;

  bool operator==(const FrankWolfeConfig&) const = default;
};

enum class Objective { kBeckmann, kSystemCost };

constexpr std::string_view to_string(Objective o) {
  return o == Objective::kBeckmann ? "beckmann" : "system_cost";
}

struct WardropReport {
  Objective objective_kind = Objective::kBeckmann;
  EdgeFlow flow;
  /// Value of the minimized objective at `flow`.
  double objective = 0.0;
  double system_cost = 0.0;
  /// Shortest path latency f_e(x_e) at `flow`.
  double min_path_latency = 0.0;
  double max_used_path_latency = 0.0;
  double relative_gap = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Objective at the initial all-or-nothing flow and after every step.
  std::vector<double> objective_trace;

  bool operator==(const WardropReport&) const = default;
};

namespace detail {

inline double objective_gradient(Objective kind, const LatencyFunction& f,
                                 double x) {
  return kind == Objective::kBeckmann ? f.eval(x) : f.marginal(x);
}

inline double objective_term(Objective kind, const LatencyFunction& f,
                             double x) {
  return kind == Objective::kBeckmann ? f.integral(x) : x * f.eval(x);
}

inline long double precise_objective_term(Objective kind, const LatencyFunction& f,
                                          long double lx) {
  const auto& c = f.coefficients();
  long double acc = 0.0L;
  for (std::size_t i = c.size(); i-- > 0;) {
    const long double ci = c[i];
    acc = acc * lx + (kind == Objective::kBeckmann ? ci / static_cast<long double>(i + 1) : ci);
  }
  return acc * lx;
}

struct ActivePath {
  Path path;
  long double weight;
};

/// Minimizes the objective over feasible flows, keeping the iterate as a
/// convex combination of all-or-nothing path flows. The combination makes
/// flows exactly conservative and gives away steps their vertices.
inline WardropReport frank_wolfe(const NonatomicGame& game,
                                 const FrankWolfeConfig& config,
                                 Objective kind) {
  const InfoGraph& g = game.graph();
  const double demand = game.demand();
  const std::size_t m = g.num_edges();

  auto gradient = [&](const std::vector<double>& x) {
    std::vector<double> c(m);
    for (EdgeIndex e = 0; e < m; ++e) {
      c[e] = objective_gradient(kind, g.edge(e).latency, x[e]);
    }
    return c;
  };
  // The iterate is carried in extended precision: near the optimum a step
  // improves the objective by about one double ulp, which rounding of the
  // flows would otherwise swamp.
  auto value = [&](const std::vector<long double>& x) {
    long double total = 0.0L;
    for (EdgeIndex e = 0; e < m; ++e) {
      total += precise_objective_term(kind, g.edge(e).latency, x[e]);
    }
    return total;
  };
  auto flows_of = [&](const std::vector<ActivePath>& active) {
    std::vector<long double> x(m, 0.0L);
    for (const auto& a : active) {
      for (EdgeIndex e : a.path.edges) x[e] += demand * a.weight;
    }
    return x;
  };
  auto rounded = [](const std::vector<long double>& xl) {
    return std::vector<double>(xl.begin(), xl.end());
  };
  // d/dgamma of the objective at x + gamma * d; nondecreasing in gamma.
  auto slope = [&](const std::vector<double>& x, const std::vector<double>& d,
                   double gamma) {
    double total = 0.0;
    for (EdgeIndex e = 0; e < m; ++e) {
      if (d[e] == 0.0) continue;
      const double at = std::max(0.0, x[e] + gamma * d[e]);
      total += d[e] * objective_gradient(kind, g.edge(e).latency, at);
    }
    return total;
  };
  auto line_search = [&](const std::vector<double>& x,
                         const std::vector<double>& d, double gamma_max) {
    if (slope(x, d, gamma_max) <= 0.0) return gamma_max;
    double lo = 0.0;
    double hi = gamma_max;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double s = slope(x, d, mid);
      if (s == 0.0) return mid;
      (s < 0.0 ? lo : hi) = mid;
    }
    return lo;
  };

  std::vector<ActivePath> active;
  active.push_back(
      {shortest_path(g, gradient(std::vector<double>(m, 0.0))).path, 1.0});
  std::vector<long double> xl = flows_of(active);
  std::vector<double> x = rounded(xl);

  WardropReport report;
  report.objective_kind = kind;
  long double current_value = value(xl);
  report.objective_trace.push_back(static_cast<double>(current_value));

  bool retry_toward = false;
  for (std::size_t k = 1;; ++k) {
    const std::vector<double> c = gradient(x);
    RoutedPath target = shortest_path(g, c);
    double weighted = 0.0;
    for (EdgeIndex e = 0; e < m; ++e) weighted += c[e] * x[e];
    const double gap = std::max(0.0, weighted - demand * target.cost);
    report.relative_gap = weighted > 0.0 ? gap / weighted : 0.0;
    report.iterations = k;
    if (report.relative_gap <= config.gap_tol) {
      report.converged = true;
      break;
    }
    if (k >= config.max_iters) break;

    std::vector<double> d(m);
    for (EdgeIndex e = 0; e < m; ++e) d[e] = -x[e];
    for (EdgeIndex e : target.path.edges) d[e] += demand;

    // Worst active path, for a possible away step.
    std::size_t away = 0;
    double away_cost = -1.0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const double cost = path_cost(active[i].path, c);
      if (cost > away_cost) {
        away_cost = cost;
        away = i;
      }
    }
    const double away_gap = demand * away_cost - weighted;
    const bool take_away = config.step_rule == StepRule::kAwayStep &&
                           active.size() > 1 && away_gap > gap && !retry_toward;

    const std::vector<ActivePath> previous = active;
    if (take_away) {
      const long double w = active[away].weight;
      const double gamma_max = static_cast<double>(w / (1.0L - w));
      for (EdgeIndex e = 0; e < m; ++e) d[e] = x[e];
      for (EdgeIndex e : active[away].path.edges) d[e] -= demand;
      const double gamma = line_search(x, d, gamma_max);
      for (auto& a : active) a.weight *= 1.0 + gamma;
      if (gamma >= gamma_max) {
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(away));
      } else {
        active[away].weight -= gamma;
      }
    } else {
      const double gamma = config.step_rule == StepRule::kHarmonic
                               ? 2.0 / (static_cast<double>(k) + 2.0)
                               : line_search(x, d, 1.0);
      for (auto& a : active) a.weight *= 1.0 - gamma;
      auto it = std::find_if(active.begin(), active.end(), [&](const auto& a) {
        return a.path == target.path;
      });
      if (it == active.end()) {
        active.push_back({std::move(target.path), gamma});
      } else {
        it->weight += gamma;
      }
    }
    std::erase_if(active, [](const ActivePath& a) { return !(a.weight > 0.0); });
    long double total = 0.0L;
    for (const auto& a : active) total += a.weight;
    for (auto& a : active) a.weight /= total;
    std::vector<long double> next = flows_of(active);
    const long double next_value = value(next);
    if (config.step_rule != StepRule::kHarmonic && next_value > current_value) {
      // The step is below the resolution of the flows; nothing further can
      // be gained along the chosen direction.
      active = previous;
      if (!take_away) break;
      retry_toward = true;
      continue;
    }
    retry_toward = false;
    xl = std::move(next);
    x = rounded(xl);
    current_value = next_value;
    report.objective_trace.push_back(static_cast<double>(current_value));
  }

  report.flow = EdgeFlow{std::move(x)};
  report.objective = report.objective_trace.back();
  report.system_cost = system_cost(game, report.flow);
  const auto latencies = edge_latencies(game, report.flow);
  report.min_path_latency = shortest_path(g, latencies).cost;
  report.max_used_path_latency = report.min_path_latency;
  for (const auto& pf : flow_decomposition(game, report.flow)) {
    if (pf.amount > config.used_path_threshold * demand) {
      report.max_used_path_latency = std::max(
          report.max_used_path_latency, path_cost(pf.path, latencies));
    }
  }
  return report;
}

}  // namespace detail

/// Wardrop equilibrium as the minimizer of the Beckmann objective.
/// A non-converged run still returns its last iterate with converged = false.
inline WardropReport solve_wardrop(const NonatomicGame& game,
                                   const FrankWolfeConfig& config = {}) {
  return detail::frank_wolfe(game, config, Objective::kBeckmann);
}

/// Social optimum: minimizer of the system cost, with marginal latencies as
/// the direction-finding edge costs.
inline WardropReport solve_social_optimum(const NonatomicGame& game,
                                          const FrankWolfeConfig& config = {}) {
  return detail::frank_wolfe(game, config, Objective::kSystemCost);
}

}  // namespace conga
