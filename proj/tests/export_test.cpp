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

#include "conga/export.hpp"

#include "gtest/gtest.h"
#include "testing/oracles.hpp"

namespace conga {
namespace {

using testing::poly;

TEST(ExportTest, PlainTopology) {
  const auto g = testing::parallel_pair(poly({1}), poly({0, 1}));
  EXPECT_EQ(export_annotated_graph(g),
            "digraph conga {\n"
            "  rankdir=LR;\n"
            "  \"s\" [shape=doublecircle, xlabel=\"source\"];\n"
            "  \"t\" [shape=doublecircle, xlabel=\"sink\"];\n"
            "  \"s\" -> \"t\" [label=\"e1\"];\n"
            "  \"s\" -> \"t\" [label=\"e2\"];\n"
            "}\n");
}

TEST(ExportTest, AnnotatesFlowAndLatency) {
  const auto g = testing::braess_graph();
  const std::string dot = export_annotated_graph(g, {{"AB", 1.0}, {"CD", 0.25}});
  EXPECT_NE(dot.find("\"A\" -> \"B\" [label=\"AB\\nflow=1.0000\\nlatency=1.0000\"];"),
            std::string::npos);
  EXPECT_NE(dot.find("[label=\"CD\\nflow=0.2500\\nlatency=0.2500\"]"), std::string::npos);
  EXPECT_NE(dot.find("\"B\" -> \"C\" [label=\"BC\"];"), std::string::npos);
  EXPECT_NE(dot.find("\"B\" [shape=circle];"), std::string::npos);

  ExportStyle style;
  style.show_latency = false;
  style.left_to_right = false;
  const std::string bare = export_annotated_graph(g, {{"AB", 1.0}}, style);
  EXPECT_NE(bare.find("rankdir=TB;"), std::string::npos);
  EXPECT_EQ(bare.find("latency="), std::string::npos);
}

TEST(ExportTest, Deterministic) {
  const auto g = testing::braess_graph();
  EXPECT_EQ(export_annotated_graph(g, {{"BC", 0.5}}), export_annotated_graph(g, {{"BC", 0.5}}));
}

TEST(ExportTest, UnknownAnnotation) {
  try {
    export_annotated_graph(testing::braess_graph(), {{"XY", 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownEdgeAnnotation);
  }
}

TEST(ExportTest, EscapesQuotes) {
  EXPECT_EQ(detail::dot_quote("a\"b\\c"), "\"a\\\"b\\\\c\"");
}

}  // namespace
}  // namespace conga
