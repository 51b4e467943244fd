#include "dispersion/result_io.hpp"

#include <ostream>
#include <sstream>

#include "json.hpp"

namespace dispersion {
namespace {

using nlohmann::json;

template <class T>
json optional_json(const std::optional<T>& value) {
  return value ? json(*value) : json(nullptr);
}

json round_json(const RoundRecord& r) {
  return json{{"round", r.round},
              {"counts", r.counts},
              {"settled", r.settled},
              {"subrounds", r.subrounds}};
}

}  // namespace

std::string result_to_json(const SimulationResult& result, int indent) {
  json j;
  j["status"] = std::string(to_string(result.status));
  j["dispersed_round"] = optional_json(result.dispersed_round);
  j["all_terminated_round"] = optional_json(result.all_terminated_round);
  j["rounds_executed"] = result.rounds_executed;
  j["max_peak_bits"] = result.max_peak_bits;
  j["bit_limit"] = result.bit_limit;
  j["peak_bits"] = result.peak_bits;
  j["max_subrounds"] = result.max_subrounds;
  j["initial_nodes"] = result.initial_nodes;
  j["final_counts"] = result.final_counts;

  json settles = json::array();
  for (const SettleEvent& e : result.settle_events) {
    settles.push_back({{"round", e.round},
                       {"node", e.node},
                       {"from", e.from_node == kNoNode ? json(nullptr) : json(e.from_node)},
                       {"robot", e.robot}});
  }
  j["settle_events"] = std::move(settles);

  json terms = json::array();
  for (const TerminateEvent& e : result.terminate_events) {
    terms.push_back({{"round", e.round}, {"node", e.node}, {"robot", e.robot}});
  }
  j["terminate_events"] = std::move(terms);

  if (result.audit_failure) {
    const AuditFailure& f = *result.audit_failure;
    json fields = json::array();
    for (const FieldBits& fb : f.fields) fields.push_back({{"name", fb.name}, {"bits", fb.width}});
    j["audit_failure"] = {{"round", f.round}, {"robot", f.robot}, {"role", f.role},
                          {"bits", f.bits},   {"limit", f.limit}, {"fields", std::move(fields)}};
  }
  if (!result.message.empty()) j["message"] = result.message;
  return j.dump(indent);
}

void write_trace_jsonl(std::ostream& out, const SimulationResult& result) {
  for (const RoundRecord& r : result.trace) out << round_json(r).dump() << '\n';
}

std::string trace_to_jsonl(const SimulationResult& result) {
  std::ostringstream out;
  write_trace_jsonl(out, result);
  return out.str();
}

}  // namespace dispersion
