#pragma once

// Problem/protocol JSON documents and the CSV conventions shared by the CLI.
//
// Document schema:
//   { "gamma": 10, "horizon": 49.5, "bound_mode": "unbounded" | "symmetric_unit",
//     "segments": [ {"type": "impulse", "weight": -1},
//                   {"type": "singular", "duration": 49.5},
//                   {"type": "bang", "u": 1, "duration": 0.78} ] }
// "horizon" may be omitted or null for free-time problems.

#include <string>
#include <string_view>

#include "fcool/core_model.hpp"

namespace fcool {

struct Document {
  CoolingProblem problem;
  Protocol protocol;
};

std::string write_document(const CoolingProblem& problem, const Protocol& protocol);
/// Throws ErrorCode::Parse on malformed JSON or schema violations.
Document parse_document(std::string_view json);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

/// Columns t, x1, x2, u, running_J.
std::string trajectory_csv(const Trajectory& trajectory);

}  // namespace fcool
