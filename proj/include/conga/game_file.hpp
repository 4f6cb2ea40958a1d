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

// Game files: a line-oriented text format carrying the information graph and
// the scenario to solve.
//
//   conga/1                      schema header, first significant line
//   source A
//   sink D
//   node B speed 2               optional; declares a node and its speed
//   edge AB A B 0 1              label, from, to, coefficients c0 c1 ...
//   demand 1                     nonatomic scenario
//   players 2                    atomic scenario
//   variant fastB B=2 C=1        extra node profile for `scenarios`
//
// '#' starts a comment. Nodes referenced by edges need no `node` line.

#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "conga/analysis.hpp"
#include "conga/error.hpp"
#include "conga/graph.hpp"

namespace conga {

inline constexpr std::string_view kGameSchema = "conga/1";

struct Scenario {
  std::optional<double> demand;
  std::optional<std::size_t> players;
  /// Speeds from `node ... speed` lines.
  NodeProfile speeds{"file", {}};
  std::vector<NodeProfile> variants;

  bool operator==(const Scenario&) const = default;
};

struct GameDocument {
  InfoGraph graph;
  Scenario scenario;

  bool operator==(const GameDocument&) const = default;
};

/// Parse failure with its location. Line 0 means the document as a whole.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::string field,
             const std::string& message)
      : Error(code, "line " + std::to_string(line) + ": " + field + ": " +
                        message),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Shortest decimal text that reads back as the same double.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  for (int precision = 1; precision < 17; ++precision) {
    char shorter[32];
    std::snprintf(shorter, sizeof shorter, "%.*g", precision, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

namespace detail {

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

class GameParser {
 public:
  explicit GameParser(std::string_view text) : text_(text) {}

  GameDocument parse() {
    std::size_t line_no = 0;
    bool header = false;
    std::size_t begin = 0;
    while (begin <= text_.size()) {
      std::size_t end = text_.find('\n', begin);
      if (end == std::string_view::npos) end = text_.size();
      ++line_no;
      std::string_view line = text_.substr(begin, end - begin);
      begin = end + 1;
      if (auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      const auto tokens = split(line);
      if (tokens.empty()) continue;
      line_ = line_no;
      if (!header) {
        if (tokens.size() != 1 || tokens[0].rfind("conga/", 0) != 0) {
          fail(ErrorCode::kSchemaError, "schema",
               "expected schema header '" + std::string(kGameSchema) + "'");
        }
        if (tokens[0] != kGameSchema) {
          fail(ErrorCode::kSchemaError, "schema",
               "unsupported schema " + std::string(tokens[0]));
        }
        header = true;
        continue;
      }
      directive(tokens);
    }
    if (!header) {
      line_ = 0;
      fail(ErrorCode::kSyntaxError, "document", "no content");
    }
    line_ = 0;
    if (!source_) fail(ErrorCode::kSchemaError, "source", "missing");
    if (!sink_) fail(ErrorCode::kSchemaError, "sink", "missing");

    GameDocument doc{InfoGraph(nodes_, edges_, *source_, *sink_), scenario_};
    if (auto r = validate_graph(doc.graph); !r.ok()) {
      auto it = subject_line_.find(r.subject);
      line_ = it == subject_line_.end() ? 0 : it->second;
      fail(ErrorCode::kValidationError, std::string(to_string(r.issue)),
           r.message);
    }
    for (const auto& [variant, line] : variant_lines_) {
      for (const auto& [id, s] : doc.scenario.variants[variant].speed) {
        if (!doc.graph.find_node(id)) {
          line_ = line;
          fail(ErrorCode::kSchemaError, "variant", "unknown node " + id);
        }
      }
    }
    return doc;
  }

 private:
  static std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) out.push_back(line.substr(i, j - i));
      i = j;
    }
    return out;
  }

  [[noreturn]] void fail(ErrorCode code, const std::string& field,
                         const std::string& message) const {
    throw ParseError(code, line_, field, message);
  }

  std::string identifier(std::string_view token, const std::string& field) const {
    if (!is_identifier(token)) {
      fail(ErrorCode::kSyntaxError, field,
           "'" + std::string(token) + "' is not a valid identifier");
    }
    return std::string(token);
  }

  double real(std::string_view token, const std::string& field) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      fail(ErrorCode::kSyntaxError, field,
           "'" + std::string(token) + "' is not a number");
    }
    return v;
  }

  double speed(std::string_view token, const std::string& field) const {
    const double s = real(token, field);
    if (!std::isfinite(s) || s <= 0.0) {
      fail(ErrorCode::kSchemaError, field, "speed must be finite and > 0");
    }
    return s;
  }

  void arity(const std::vector<std::string_view>& t, std::size_t n) const {
    if (t.size() != n) {
      fail(ErrorCode::kSyntaxError, std::string(t[0]),
           "expected " + std::to_string(n - 1) + " value(s), got " +
               std::to_string(t.size() - 1));
    }
  }

  void remember(const std::string& subject) {
    subject_line_.try_emplace(subject, line_);
  }

  void directive(const std::vector<std::string_view>& t) {
    const std::string_view key = t[0];
    if (key == "source" || key == "sink") {
      arity(t, 2);
      auto& slot = key == "source" ? source_ : sink_;
      if (slot) fail(ErrorCode::kSchemaError, std::string(key), "declared twice");
      slot = identifier(t[1], std::string(key));
      remember(*slot);
    } else if (key == "node") {
      if (t.size() != 2 && t.size() != 4) arity(t, 2);
      std::string id = identifier(t[1], "node");
      if (t.size() == 4) {
        if (t[2] != "speed") {
          fail(ErrorCode::kSchemaError, "node " + id,
               "unknown attribute '" + std::string(t[2]) + "'");
        }
        scenario_.speeds.speed[id] = speed(t[3], "node " + id);
      }
      subject_line_[id] = line_;
      nodes_.push_back(std::move(id));
    } else if (key == "edge") {
      if (t.size() < 5) {
        fail(ErrorCode::kSyntaxError, "edge",
             "expected: edge <label> <from> <to> <c0> [c1 ...]");
      }
      Edge e;
      e.label = identifier(t[1], "edge");
      e.from = identifier(t[2], "edge " + e.label);
      e.to = identifier(t[3], "edge " + e.label);
      std::vector<double> coefficients;
      for (std::size_t i = 4; i < t.size(); ++i) {
        const double c = real(t[i], "edge " + e.label);
        if (!std::isfinite(c) || c < 0.0) {
          fail(ErrorCode::kSchemaError, "edge " + e.label,
               "coefficient c" + std::to_string(i - 4) + " = " +
                   std::string(t[i]) + " must be finite and >= 0");
        }
        coefficients.push_back(c);
      }
      e.latency = LatencyFunction(std::move(coefficients));
      remember(e.label);
      remember(e.from);
      remember(e.to);
      edges_.push_back(std::move(e));
    } else if (key == "demand") {
      arity(t, 2);
      if (scenario_.demand) fail(ErrorCode::kSchemaError, "demand", "declared twice");
      const double d = real(t[1], "demand");
      if (!std::isfinite(d) || d <= 0.0) {
        fail(ErrorCode::kSchemaError, "demand", "must be finite and > 0");
      }
      scenario_.demand = d;
    } else if (key == "players") {
      arity(t, 2);
      if (scenario_.players) fail(ErrorCode::kSchemaError, "players", "declared twice");
      std::size_t n = 0;
      const auto [ptr, ec] = std::from_chars(t[1].data(), t[1].data() + t[1].size(), n);
      if (ec != std::errc() || ptr != t[1].data() + t[1].size()) {
        fail(ErrorCode::kSyntaxError, "players",
             "'" + std::string(t[1]) + "' is not a nonnegative integer");
      }
      if (n < 1) fail(ErrorCode::kSchemaError, "players", "must be >= 1");
      scenario_.players = n;
    } else if (key == "variant") {
      if (t.size() < 2) arity(t, 2);
      NodeProfile profile;
      profile.name = identifier(t[1], "variant");
      for (std::size_t i = 2; i < t.size(); ++i) {
        const auto eq = t[i].find('=');
        if (eq == std::string_view::npos) {
          fail(ErrorCode::kSyntaxError, "variant " + profile.name,
               "expected <node>=<speed>, got '" + std::string(t[i]) + "'");
        }
        std::string id = identifier(t[i].substr(0, eq), "variant " + profile.name);
        profile.speed[id] = speed(t[i].substr(eq + 1), "variant " + profile.name);
      }
      for (const auto& v : scenario_.variants) {
        if (v.name == profile.name) {
          fail(ErrorCode::kSchemaError, "variant", "duplicate name " + profile.name);
        }
      }
      variant_lines_.emplace_back(scenario_.variants.size(), line_);
      scenario_.variants.push_back(std::move(profile));
    } else {
      fail(ErrorCode::kSchemaError, std::string(key), "unknown field");
    }
  }

  std::string_view text_;
  std::size_t line_ = 0;
  std::optional<std::string> source_;
  std::optional<std::string> sink_;
  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
  Scenario scenario_;
  std::map<std::string, std::size_t> subject_line_;
  std::vector<std::pair<std::size_t, std::size_t>> variant_lines_;
};

}  // namespace detail

/// Parses and validates a game file. Throws ParseError (kSyntaxError,
/// kSchemaError or kValidationError) with the offending line.
inline GameDocument parse_game_file(std::string_view text) {
  return detail::GameParser(text).parse();
}

/// Canonical text for a document; parse_game_file reads it back unchanged.
inline std::string render_game_file(const GameDocument& doc) {
  const InfoGraph& g = doc.graph;
  std::ostringstream out;
  out << kGameSchema << '\n';
  out << "source " << g.source() << '\n';
  out << "sink " << g.sink() << '\n';
  for (const auto& id : g.nodes()) {
    out << "node " << id;
    if (auto it = doc.scenario.speeds.speed.find(id);
        it != doc.scenario.speeds.speed.end()) {
      out << " speed " << format_real(it->second);
    }
    out << '\n';
  }
  for (const auto& e : g.edges()) {
    out << "edge " << e.label << ' ' << e.from << ' ' << e.to;
    for (double c : e.latency.coefficients()) out << ' ' << format_real(c);
    out << '\n';
  }
  if (doc.scenario.demand) out << "demand " << format_real(*doc.scenario.demand) << '\n';
  if (doc.scenario.players) out << "players " << *doc.scenario.players << '\n';
  for (const auto& v : doc.scenario.variants) {
    out << "variant " << v.name;
    for (const auto& [id, s] : v.speed) out << ' ' << id << '=' << format_real(s);
    out << '\n';
  }
  return out.str();
}

/// Reads and parses a game file from disk; kIoError if it cannot be read.
inline GameDocument load_game_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_game_file(buffer.str());
}

}  // namespace conga
