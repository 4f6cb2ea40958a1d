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

// Command-line front end. Kept in a header so tests can drive it in-process;
// tools/conga.cpp is a thin main() around run().

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "conga/analysis.hpp"
#include "conga/atomic.hpp"
#include "conga/error.hpp"
#include "conga/export.hpp"
#include "conga/game_file.hpp"
#include "conga/graph.hpp"
#include "conga/nonatomic.hpp"
#include "conga/report.hpp"

namespace conga::cli {

enum ExitCode : int {
  kSuccess = 0,
  kModelError = 1,
  kNotConverged = 2,
  kInputError = 3,
};

struct Options {
  std::string command;
  std::string file;
  double tolerance = 1e-8;
  std::size_t max_iters = 10000;
  std::string format = "text";
  std::string output;
  std::string step_rule = std::string(to_string(StepRule::kAwayStep));
  std::string speed_at = "head";
  std::size_t path_cap = 100000;
  std::string regime = "nonatomic";
  std::string with_flow;
};

namespace detail {

inline std::string f4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

/// Thrown for problems with a game file's scenario block.
struct ScenarioMissing : Error {
  explicit ScenarioMissing(const std::string& what)
      : Error(ErrorCode::kSchemaError, what) {}
};

class Runner {
 public:
  Runner(const Options& options, std::ostream& err)
      : opt_(options), err_(err) {
    fw_.gap_tol = opt_.tolerance;
    fw_.max_iters = opt_.max_iters;
    fw_.step_rule = *parse_step_rule(opt_.step_rule);
    nash_.tolerance = opt_.tolerance;
    nash_.max_steps = opt_.max_iters;
    speed_at_ = opt_.speed_at == "tail" ? SpeedAt::kTail : SpeedAt::kHead;
  }

  /// Runs the command, writing the rendered result to `text`.
  int execute(std::string& text) {
    doc_.emplace(load_game_file(opt_.file));
    graph_.emplace(apply_node_profile(doc_->graph, doc_->scenario.speeds, speed_at_));
    machine_ = opt_.format == "machine";
    const std::string& c = opt_.command;
    if (c == "validate") return validate(text);
    if (c == "paths") return paths(text);
    if (c == "nash") return nash(text);
    if (c == "wardrop") return wardrop(text, Objective::kBeckmann);
    if (c == "optimum") return wardrop(text, Objective::kSystemCost);
    if (c == "poa") return poa(text);
    if (c == "braess") return braess(text);
    if (c == "scenarios") return scenarios(text);
    if (c == "export") return export_graph(text);
    throw std::logic_error("unhandled command " + c);
  }

 private:
  double demand() const {
    if (!doc_->scenario.demand) {
      throw ScenarioMissing("game file declares no demand");
    }
    return *doc_->scenario.demand;
  }
  std::size_t players() const {
    if (!doc_->scenario.players) {
      throw ScenarioMissing("game file declares no players");
    }
    return *doc_->scenario.players;
  }

  Json config() const {
    Json j = {
        {"tolerance", opt_.tolerance},
        {"max_iters", opt_.max_iters},
        {"step_rule", opt_.step_rule},
        {"speed_at", opt_.speed_at},
        {"path_cap", opt_.path_cap},
        {"frank_wolfe", to_json(fw_)},
        {"nash", to_json(nash_)},
    };
    if (doc_->scenario.demand) j["demand"] = *doc_->scenario.demand;
    if (doc_->scenario.players) j["players"] = *doc_->scenario.players;
    if (opt_.command == "poa") j["regime"] = opt_.regime;
    return j;
  }

  std::string envelope(const Json& report) const {
    return render_report_file({opt_.command, config(), report});
  }

  int non_converged(const char* what, std::size_t iterations) {
    err_ << "warning: " << what << " did not converge within " << iterations
         << " iterations\n";
    return kNotConverged;
  }

  int validate(std::string& text) {
    const InfoGraph& g = *graph_;
    const auto count = count_paths(g);
    if (machine_) {
      text = envelope({{"valid", true},
                       {"nodes", g.num_nodes()},
                       {"edges", g.num_edges()},
                       {"paths", count}});
    } else {
      text = "OK: " + std::to_string(g.num_nodes()) + " nodes, " +
             std::to_string(g.num_edges()) + " edges, " +
             std::to_string(count) + " source-sink paths\n";
    }
    return kSuccess;
  }

  int paths(std::string& text) {
    const InfoGraph& g = *graph_;
    const auto all = enumerate_paths(g, opt_.path_cap);
    if (machine_) {
      Json list = Json::array();
      for (const auto& p : all) {
        list.push_back({{"edges", path_to_json(g, p)}, {"nodes", path_to_string(g, p)}});
      }
      text = envelope({{"count", all.size()}, {"paths", list}});
      return kSuccess;
    }
    std::ostringstream out;
    out << all.size() << " source-sink paths\n";
    for (const auto& p : all) out << "  " << describe(p) << '\n';
    text = out.str();
    return kSuccess;
  }

  std::string describe(const Path& p) const {
    std::string labels;
    for (const auto& l : path_labels(*graph_, p)) labels += (labels.empty() ? "" : " ") + l;
    return path_to_string(*graph_, p) + " [" + labels + "]";
  }

  int nash(std::string& text) {
    const AtomicGame game(*graph_, players());
    const NashReport r = solve_nash(game, nash_);
    if (machine_) {
      text = envelope(to_json(r, *graph_));
      return kSuccess;
    }
    std::ostringstream out;
    out << "Nash equilibrium (" << game.num_players() << " players, "
        << r.steps << " best-response moves)\n";
    for (std::size_t p = 0; p < r.profile.assignments.size(); ++p) {
      out << "  player " << p << ": " << describe(r.profile.assignments[p])
          << "  cost " << f4(r.player_costs[p]) << '\n';
    }
    const LoadVector loads = edge_loads(game, r.profile);
    out << "  edge loads:\n";
    for (EdgeIndex e = 0; e < graph_->num_edges(); ++e) {
      out << "    " << graph_->edge(e).label << "  " << loads[e] << '\n';
    }
    out << "  total cost: " << f4(r.total_cost) << '\n';
    out << "  makespan:   " << f4(r.makespan) << '\n';
    out << "  potential:  " << f4(r.potential) << '\n';
    text = out.str();
    return kSuccess;
  }

  int wardrop(std::string& text, Objective kind) {
    const NonatomicGame game(*graph_, demand());
    const WardropReport r = kind == Objective::kBeckmann
                                ? solve_wardrop(game, fw_)
                                : solve_social_optimum(game, fw_);
    if (machine_) {
      text = envelope(to_json(r, *graph_));
    } else {
      std::ostringstream out;
      out << (kind == Objective::kBeckmann ? "Wardrop equilibrium" : "Social optimum")
          << " (demand " << f4(game.demand()) << ")\n";
      out << "  converged: " << (r.converged ? "yes" : "no") << " after "
          << r.iterations << " iterations (relative gap " << sci(r.relative_gap)
          << ")\n";
      out << "  min path latency:      " << f4(r.min_path_latency) << '\n';
      out << "  max used path latency: " << f4(r.max_used_path_latency) << '\n';
      out << "  system cost:           " << f4(r.system_cost) << '\n';
      out << "  edge flows:\n";
      const auto lat = edge_latencies(game, r.flow);
      for (EdgeIndex e = 0; e < graph_->num_edges(); ++e) {
        out << "    " << graph_->edge(e).label << "  " << f4(r.flow[e])
            << "  latency " << f4(lat[e]) << '\n';
      }
      out << "  path flows:\n";
      for (const auto& pf : flow_decomposition(game, r.flow)) {
        out << "    " << describe(pf.path) << "  " << f4(pf.amount) << "  latency "
            << f4(path_latency(game, r.flow, pf.path)) << '\n';
      }
      text = out.str();
    }
    return r.converged ? kSuccess : non_converged("Frank-Wolfe", r.iterations);
  }

  int poa(std::string& text) {
    PoAConfig config;
    config.frank_wolfe = fw_;
    config.nash = nash_;
    config.path_cap = opt_.path_cap;
    const PoAReport r = opt_.regime == "atomic"
                            ? price_of_anarchy(AtomicGame(*graph_, players()), config)
                            : price_of_anarchy(NonatomicGame(*graph_, demand()), config);
    if (machine_) {
      text = envelope(to_json(r));
    } else {
      std::ostringstream out;
      out << "Price of anarchy (" << to_string(r.regime) << ")\n";
      out << "  equilibrium cost: " << f4(r.equilibrium_cost) << '\n';
      out << "  optimum cost:     " << f4(r.optimum_cost) << '\n';
      out << "  ratio:            " << f4(r.ratio) << '\n';
      out << "  makespan ratio:   " << f4(r.makespan_ratio) << " ("
          << f4(r.equilibrium_makespan) << " / " << f4(r.optimum_makespan) << ")\n";
      text = out.str();
    }
    return r.converged ? kSuccess : non_converged("Frank-Wolfe", fw_.max_iters);
  }

  int braess(std::string& text) {
    BraessConfig config;
    config.frank_wolfe = fw_;
    const BraessReport r = braess_scan(NonatomicGame(*graph_, demand()), config);
    bool converged = r.baseline_converged;
    for (const auto& e : r.entries) converged = converged && e.converged;
    if (machine_) {
      text = envelope(to_json(r));
    } else {
      std::ostringstream out;
      out << "Braess scan (baseline equilibrium latency " << f4(r.baseline_latency)
          << ")\n";
      for (const auto& e : r.entries) {
        out << "  remove " << e.label << ": ";
        if (e.disconnected) {
          out << "disconnects source from sink\n";
          continue;
        }
        out << "latency " << f4(e.removed_latency) << ", improvement "
            << f4(e.improvement) << (e.paradox ? "  <- paradox" : "") << '\n';
      }
      text = out.str();
    }
    return converged ? kSuccess : non_converged("Frank-Wolfe", fw_.max_iters);
  }

  int scenarios(std::string& text) {
    std::vector<NodeProfile> variants{NodeProfile{"uniform", {}}};
    if (!doc_->scenario.speeds.speed.empty()) variants.push_back(doc_->scenario.speeds);
    for (const auto& v : doc_->scenario.variants) variants.push_back(v);
    ScenarioConfig config;
    config.frank_wolfe = fw_;
    config.speed_at = speed_at_;
    const ScenarioComparison c =
        compare_scenarios(NonatomicGame(doc_->graph, demand()), variants, config);
    bool converged = true;
    for (const auto& row : c.rows) converged = converged && row.converged;
    if (machine_) {
      text = envelope(to_json(c, doc_->graph));
    } else {
      std::ostringstream out;
      out << "Scenario comparison (" << c.rows.size() << " variants)\n";
      for (const auto& row : c.rows) {
        out << "  " << row.name << ": ";
        if (!row.error.empty()) {
          out << "error: " << row.error << '\n';
          continue;
        }
        out << "latency " << f4(row.equilibrium_latency) << ", system cost "
            << f4(row.system_cost) << ", flow";
        for (EdgeIndex e = 0; e < row.flow.flow.size(); ++e) {
          out << ' ' << doc_->graph.edge(e).label << '=' << f4(row.flow[e]);
        }
        out << '\n';
      }
      text = out.str();
    }
    return converged ? kSuccess : non_converged("Frank-Wolfe", fw_.max_iters);
  }

  int export_graph(std::string& text) {
    std::map<std::string, double> annotation;
    int code = kSuccess;
    if (opt_.with_flow == "wardrop") {
      const WardropReport r = solve_wardrop(NonatomicGame(*graph_, demand()), fw_);
      for (EdgeIndex e = 0; e < graph_->num_edges(); ++e) {
        annotation[graph_->edge(e).label] = r.flow[e];
      }
      if (!r.converged) code = non_converged("Frank-Wolfe", r.iterations);
    } else if (opt_.with_flow == "nash") {
      const AtomicGame game(*graph_, players());
      const NashReport r = solve_nash(game, nash_);
      const LoadVector loads = edge_loads(game, r.profile);
      for (EdgeIndex e = 0; e < graph_->num_edges(); ++e) {
        annotation[graph_->edge(e).label] = static_cast<double>(loads[e]);
      }
    }
    text = export_annotated_graph(*graph_, annotation);
    return code;
  }

  const Options& opt_;
  std::ostream& err_;
  FrankWolfeConfig fw_;
  NashConfig nash_;
  SpeedAt speed_at_ = SpeedAt::kHead;
  bool machine_ = false;
  std::optional<GameDocument> doc_;
  std::optional<InfoGraph> graph_;
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kStepLimitExceeded:
      return kNotConverged;
    case ErrorCode::kIoError:
    case ErrorCode::kSyntaxError:
    case ErrorCode::kSchemaError:
      return kInputError;
    default:
      return kModelError;
  }
}

}  // namespace detail

/// Entry point. `args` excludes the program name. Output goes to `out` (or
/// the --output file), diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  Options opt;
  CLI::App app{"Congestion-game analysis of parallel algorithm graphs", "conga"};
  app.require_subcommand(1);
  app.add_option("--tolerance", opt.tolerance,
                 "Frank-Wolfe relative gap / Nash improvement threshold")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-iters", opt.max_iters,
                 "Frank-Wolfe iterations / best-response moves")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "machine"}));
  app.add_option("--output", opt.output, "Write output to this path");
  app.add_option("--step-rule", opt.step_rule, "Frank-Wolfe step rule")
      ->check(CLI::IsMember({"harmonic", "line-search", "away-step"}));
  app.add_option("--speed-at", opt.speed_at,
                 "Node whose speed scales an edge's latency")
      ->check(CLI::IsMember({"head", "tail"}));
  app.add_option("--path-cap", opt.path_cap, "Maximum paths to enumerate")
      ->check(CLI::PositiveNumber);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "Check a game file's information graph"},
      {"paths", "List every source-sink path"},
      {"nash", "Pure Nash equilibrium of the atomic game"},
      {"wardrop", "Wardrop equilibrium of the nonatomic game"},
      {"optimum", "Social optimum of the nonatomic game"},
      {"poa", "Price of anarchy"},
      {"braess", "Braess-paradox edge removal scan"},
      {"scenarios", "Compare node speed profiles"},
      {"export", "Graphviz DOT export"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("file", opt.file, "Game file")->required();
    sub->callback([&opt, name = name] { opt.command = name; });
    if (name == "poa") {
      sub->add_option("--regime", opt.regime, "atomic or nonatomic")
          ->check(CLI::IsMember({"atomic", "nonatomic"}));
    }
    if (name == "export") {
      sub->add_option("--with-flow", opt.with_flow, "Annotate with a solution")
          ->check(CLI::IsMember({"wardrop", "nash"}));
    }
  }

  std::vector<const char*> argv{"conga"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  std::string text;
  int code = kSuccess;
  try {
    detail::Runner runner(opt, err);
    code = runner.execute(text);
  } catch (const ParseError& e) {
    err << "error: " << opt.file << ": " << e.what() << '\n';
    return e.code() == ErrorCode::kValidationError ? kModelError : kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return detail::exit_code_for(e.code());
  }

  if (opt.output.empty()) {
    out << text;
  } else {
    std::ofstream file(opt.output, std::ios::binary);
    file << text;
    if (!file) {
      err << "error: cannot write " << opt.output << '\n';
      return kInputError;
    }
  }
  return code;
}

}  // namespace conga::cli
