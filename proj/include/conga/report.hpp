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

// Machine-readable reports. Every report is a JSON document wrapped in an
// envelope carrying the schema version, tool version, command and a full
// echo of the solver configuration. Reals are written with 17 significant
// digits so that parsing recovers the exact doubles; object keys are sorted,
// so identical reports render to identical bytes.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "conga/analysis.hpp"
#include "conga/atomic.hpp"
#include "conga/error.hpp"
#include "conga/graph.hpp"
#include "conga/nonatomic.hpp"

namespace conga {

using Json = nlohmann::json;

inline constexpr std::string_view kReportSchema = "conga-report/1";
inline constexpr std::string_view kToolName = "conga";
inline constexpr std::string_view kToolVersion = "1.0.0";

namespace detail {

inline void write_real(std::ostream& out, double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kSchemaError, "cannot render non-finite number");
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string_view text(buf);
  out << text;
  // Keep reals recognisable as reals when they happen to be integral.
  if (text.find_first_of(".eE") == std::string_view::npos) out << ".0";
}

inline void write_json(std::ostream& out, const Json& j, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close(2 * static_cast<std::size_t>(depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad << Json(key).dump() << ": ";
        write_json(out, value, depth + 1);
      }
      out << '\n' << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out << ",\n";
        out << pad;
        write_json(out, j[i], depth + 1);
      }
      out << '\n' << close << ']';
      return;
    }
    case Json::value_t::number_float:
      write_real(out, j.get<double>());
      return;
    default:
      out << j.dump();
      return;
  }
}

// nlohmann reports missing keys and type mismatches as json::exception;
// surface them through the library's error type.
template <typename F>
auto decoding(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaError,
                std::string(what) + ": " + e.what());
  }
}

inline EdgeIndex edge_by_label(const InfoGraph& g, const std::string& label) {
  const auto e = g.find_edge(label);
  if (!e) throw Error(ErrorCode::kSchemaError, "unknown edge " + label);
  return *e;
}

}  // namespace detail

/// Deterministic pretty-printed JSON text.
inline std::string dump_json(const Json& j) {
  std::ostringstream out;
  detail::write_json(out, j, 0);
  out << '\n';
  return out.str();
}

inline Json path_to_json(const InfoGraph& g, const Path& p) {
  return Json(path_labels(g, p));
}

inline Path path_from_json(const Json& j, const InfoGraph& g) {
  Path p;
  for (const auto& label : j) {
    p.edges.push_back(detail::edge_by_label(g, label.get<std::string>()));
  }
  if (!is_valid_path(g, p)) {
    throw Error(ErrorCode::kSchemaError, "not a source-sink path: " + j.dump());
  }
  return p;
}

/// Edge flow as an object keyed by edge label. An empty flow renders as {}.
inline Json flow_to_json(const InfoGraph& g, const EdgeFlow& f) {
  Json j = Json::object();
  for (EdgeIndex e = 0; e < f.flow.size(); ++e) j[g.edge(e).label] = f[e];
  return j;
}

inline EdgeFlow flow_from_json(const Json& j, const InfoGraph& g) {
  if (j.empty()) return {};
  if (j.size() != g.num_edges()) {
    throw Error(ErrorCode::kSchemaError, "flow must list every edge once");
  }
  EdgeFlow f{std::vector<double>(g.num_edges(), 0.0)};
  for (const auto& [label, value] : j.items()) {
    f.flow[detail::edge_by_label(g, label)] = value.get<double>();
  }
  return f;
}

inline Json to_json(const WardropReport& r, const InfoGraph& g) {
  return {
      {"objective_kind", to_string(r.objective_kind)},
      {"flow", flow_to_json(g, r.flow)},
      {"objective", r.objective},
      {"system_cost", r.system_cost},
      {"min_path_latency", r.min_path_latency},
      {"max_used_path_latency", r.max_used_path_latency},
      {"relative_gap", r.relative_gap},
      {"iterations", r.iterations},
      {"converged", r.converged},
      {"objective_trace", r.objective_trace},
  };
}

inline WardropReport wardrop_report_from_json(const Json& j,
                                              const InfoGraph& g) {
  return detail::decoding("wardrop report", [&] {
    WardropReport r;
    const auto kind = j.at("objective_kind").get<std::string>();
    if (kind == to_string(Objective::kBeckmann)) {
      r.objective_kind = Objective::kBeckmann;
    } else if (kind == to_string(Objective::kSystemCost)) {
      r.objective_kind = Objective::kSystemCost;
    } else {
      throw Error(ErrorCode::kSchemaError, "unknown objective_kind " + kind);
    }
    r.flow = flow_from_json(j.at("flow"), g);
    r.objective = j.at("objective").get<double>();
    r.system_cost = j.at("system_cost").get<double>();
    r.min_path_latency = j.at("min_path_latency").get<double>();
    r.max_used_path_latency = j.at("max_used_path_latency").get<double>();
    r.relative_gap = j.at("relative_gap").get<double>();
    r.iterations = j.at("iterations").get<std::size_t>();
    r.converged = j.at("converged").get<bool>();
    r.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    return r;
  });
}

inline Json to_json(const NashReport& r, const InfoGraph& g) {
  Json profile = Json::array();
  for (const auto& p : r.profile.assignments) profile.push_back(path_to_json(g, p));
  Json loads = Json::object();
  for (const auto& e : g.edges()) loads[e.label] = 0;
  for (const auto& p : r.profile.assignments) {
    for (EdgeIndex e : p.edges) {
      loads[g.edge(e).label] = loads[g.edge(e).label].get<std::size_t>() + 1;
    }
  }
  return {
      {"profile", profile},
      {"loads", loads},
      {"player_costs", r.player_costs},
      {"total_cost", r.total_cost},
      {"makespan", r.makespan},
      {"potential", r.potential},
      {"potential_trace", r.potential_trace},
      {"steps", r.steps},
  };
}

/// `loads` is derived from the profile and ignored here.
inline NashReport nash_report_from_json(const Json& j, const InfoGraph& g) {
  return detail::decoding("nash report", [&] {
    NashReport r;
    for (const auto& p : j.at("profile")) {
      r.profile.assignments.push_back(path_from_json(p, g));
    }
    r.player_costs = j.at("player_costs").get<std::vector<double>>();
    r.total_cost = j.at("total_cost").get<double>();
    r.makespan = j.at("makespan").get<double>();
    r.potential = j.at("potential").get<double>();
    r.potential_trace = j.at("potential_trace").get<std::vector<double>>();
    r.steps = j.at("steps").get<std::size_t>();
    return r;
  });
}

inline Json to_json(const PoAReport& r) {
  return {
      {"regime", to_string(r.regime)},
      {"equilibrium_cost", r.equilibrium_cost},
      {"optimum_cost", r.optimum_cost},
      {"ratio", r.ratio},
      {"equilibrium_makespan", r.equilibrium_makespan},
      {"optimum_makespan", r.optimum_makespan},
      {"makespan_ratio", r.makespan_ratio},
      {"converged", r.converged},
  };
}

inline PoAReport poa_report_from_json(const Json& j) {
  return detail::decoding("price-of-anarchy report", [&] {
    PoAReport r;
    const auto regime = j.at("regime").get<std::string>();
    if (regime == to_string(Regime::kAtomic)) {
      r.regime = Regime::kAtomic;
    } else if (regime == to_string(Regime::kNonatomic)) {
      r.regime = Regime::kNonatomic;
    } else {
      throw Error(ErrorCode::kSchemaError, "unknown regime " + regime);
    }
    r.equilibrium_cost = j.at("equilibrium_cost").get<double>();
    r.optimum_cost = j.at("optimum_cost").get<double>();
    r.ratio = j.at("ratio").get<double>();
    r.equilibrium_makespan = j.at("equilibrium_makespan").get<double>();
    r.optimum_makespan = j.at("optimum_makespan").get<double>();
    r.makespan_ratio = j.at("makespan_ratio").get<double>();
    r.converged = j.at("converged").get<bool>();
    return r;
  });
}

inline Json to_json(const BraessReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json row = {
        {"edge", e.label},
        {"disconnected", e.disconnected},
        {"paradox", e.paradox},
        {"converged", e.converged},
    };
    if (e.disconnected) {
      row["removed_latency"] = nullptr;
      row["removed_system_cost"] = nullptr;
      row["improvement"] = nullptr;
    } else {
      row["removed_latency"] = e.removed_latency;
      row["removed_system_cost"] = e.removed_system_cost;
      row["improvement"] = e.improvement;
    }
    entries.push_back(std::move(row));
  }
  return {
      {"baseline_latency", r.baseline_latency},
      {"baseline_system_cost", r.baseline_system_cost},
      {"baseline_converged", r.baseline_converged},
      {"entries", entries},
  };
}

inline BraessReport braess_report_from_json(const Json& j) {
  return detail::decoding("braess report", [&] {
    BraessReport r;
    r.baseline_latency = j.at("baseline_latency").get<double>();
    r.baseline_system_cost = j.at("baseline_system_cost").get<double>();
    r.baseline_converged = j.at("baseline_converged").get<bool>();
    for (const auto& row : j.at("entries")) {
      BraessEntry e;
      e.label = row.at("edge").get<std::string>();
      e.disconnected = row.at("disconnected").get<bool>();
      e.paradox = row.at("paradox").get<bool>();
      e.converged = row.at("converged").get<bool>();
      if (!e.disconnected) {
        e.removed_latency = row.at("removed_latency").get<double>();
        e.removed_system_cost = row.at("removed_system_cost").get<double>();
        e.improvement = row.at("improvement").get<double>();
      }
      r.entries.push_back(std::move(e));
    }
    return r;
  });
}

inline Json to_json(const ScenarioComparison& c, const InfoGraph& g) {
  Json rows = Json::array();
  for (const auto& row : c.rows) {
    rows.push_back({
        {"name", row.name},
        {"equilibrium_latency", row.equilibrium_latency},
        {"system_cost", row.system_cost},
        {"flow", flow_to_json(g, row.flow)},
        {"converged", row.converged},
        {"error", row.error},
    });
  }
  return {{"rows", rows}};
}

inline ScenarioComparison scenario_comparison_from_json(const Json& j,
                                                        const InfoGraph& g) {
  return detail::decoding("scenario comparison", [&] {
    ScenarioComparison c;
    for (const auto& row : j.at("rows")) {
      ScenarioRow r;
      r.name = row.at("name").get<std::string>();
      r.equilibrium_latency = row.at("equilibrium_latency").get<double>();
      r.system_cost = row.at("system_cost").get<double>();
      r.flow = flow_from_json(row.at("flow"), g);
      r.converged = row.at("converged").get<bool>();
      r.error = row.at("error").get<std::string>();
      c.rows.push_back(std::move(r));
    }
    return c;
  });
}

inline Json to_json(const FrankWolfeConfig& c) {
  return {
      {"max_iters", c.max_iters},
      {"gap_tol", c.gap_tol},
      {"step_rule", to_string(c.step_rule)},
      {"used_path_threshold", c.used_path_threshold},
  };
}

inline Json to_json(const NashConfig& c) {
  return {{"max_steps", c.max_steps}, {"tolerance", c.tolerance}};
}

struct ReportFile {
  std::string command;
  Json config;
  Json report;

  bool operator==(const ReportFile&) const = default;
};

inline std::string render_report_file(const ReportFile& file) {
  return dump_json({
      {"schema", kReportSchema},
      {"tool", kToolName},
      {"version", kToolVersion},
      {"command", file.command},
      {"config", file.config},
      {"report", file.report},
  });
}

/// Throws kSyntaxError for malformed JSON and kSchemaError for a wrong
/// schema string or missing envelope fields.
inline ReportFile parse_report_file(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSyntaxError, e.what());
  }
  return detail::decoding("report file", [&] {
    if (j.at("schema").get<std::string>() != kReportSchema) {
      throw Error(ErrorCode::kSchemaError,
                  "unsupported report schema " + j.at("schema").dump());
    }
    return ReportFile{j.at("command").get<std::string>(), j.at("config"),
                      j.at("report")};
  });
}

}  // namespace conga
