#pragma once

#include <iosfwd>
#include <string>

#include "dispersion/runtime.hpp"

namespace dispersion {

/// The whole result as one JSON object. The per-round trace is left out;
/// write it with `write_trace_jsonl`.
std::string result_to_json(const SimulationResult& result, int indent = -1);

/// One JSON object per round: round, counts, settled, subrounds.
void write_trace_jsonl(std::ostream& out, const SimulationResult& result);
std::string trace_to_jsonl(const SimulationResult& result);

}  // namespace dispersion
