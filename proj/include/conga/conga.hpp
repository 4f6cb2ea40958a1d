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

#include "conga/analysis.hpp"
#include "conga/atomic.hpp"
#include "conga/error.hpp"
#include "conga/export.hpp"
#include "conga/game_file.hpp"
#include "conga/graph.hpp"
#include "conga/latency.hpp"
#include "conga/nonatomic.hpp"
#include "conga/report.hpp"
