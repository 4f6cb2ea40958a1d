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

#include <cstdio>
#include <map>
#include <sstream>
#include <string>

#include "conga/error.hpp"
#include "conga/graph.hpp"

namespace conga {

struct ExportStyle {
  /// rankdir=LR when true, TB otherwise.
  bool left_to_right = true;
  /// Append f_e(flow) to annotated edges.
  bool show_latency = true;
};

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string dot_quote(const std::string& s) {
  return '"' + dot_escape(s) + '"';
}

inline std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace detail

/// Graphviz DOT rendering of `g`. Edges named in `annotation` carry their
/// flow (and latency at that flow) to 4 decimals; an empty annotation gives
/// the plain topology. Output depends only on the inputs.
inline std::string export_annotated_graph(
    const InfoGraph& g, const std::map<std::string, double>& annotation = {},
    const ExportStyle& style = {}) {
  for (const auto& [label, value] : annotation) {
    if (!g.find_edge(label)) {
      throw Error(ErrorCode::kUnknownEdgeAnnotation,
                  "annotation for unknown edge " + label);
    }
  }
  using detail::dot_quote;
  std::ostringstream out;
  out << "digraph conga {\n";
  out << "  rankdir=" << (style.left_to_right ? "LR" : "TB") << ";\n";
  for (const auto& id : g.nodes()) {
    out << "  " << dot_quote(id);
    if (id == g.source()) {
      out << " [shape=doublecircle, xlabel=\"source\"]";
    } else if (id == g.sink()) {
      out << " [shape=doublecircle, xlabel=\"sink\"]";
    } else {
      out << " [shape=circle]";
    }
    out << ";\n";
  }
  for (const auto& e : g.edges()) {
    std::string label = detail::dot_escape(e.label);
    if (auto it = annotation.find(e.label); it != annotation.end()) {
      label += "\\nflow=" + detail::fixed4(it->second);
      if (style.show_latency) {
        label += "\\nlatency=" + detail::fixed4(e.latency(it->second));
      }
    }
    // Already escaped; the \n sequences are DOT line breaks.
    out << "  " << dot_quote(e.from) << " -> " << dot_quote(e.to)
        << " [label=\"" << label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace conga
