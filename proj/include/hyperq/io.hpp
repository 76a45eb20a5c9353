// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "hyperq/trace.hpp"

namespace hyperq {

// JSON trace-set format:
//   {"ap": ["p","q"], "traces": [{"stem": [["p","q"],[]], "loop": [["p"]]}]}
// JSON transition-system format:
//   {"ap": [...], "vertices": ["A","B"], "edges": [["A","B"],["B","A"]],
//    "initial": ["A"], "labels": {"A": ["p"], "B": []}}

TraceSet trace_set_from_json_text(const std::string& text);
TraceSet load_trace_set(const std::string& path);
std::string trace_set_to_json_text(const TraceSet& ts);

TransitionSystem system_from_json_text(const std::string& text);
TransitionSystem load_system(const std::string& path);

}  // namespace hyperq
