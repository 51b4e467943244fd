#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dispersion/algorithms.hpp"
#include "dispersion/bits.hpp"
#include "dispersion/graph_gen.hpp"
#include "dispersion/port_graph.hpp"

namespace dispersion {

/// All robots start on one node.
struct RootedPlacement {
  NodeId root = 0;
};
/// Each robot starts on a uniformly random node drawn from the run seed.
struct ArbitraryPlacement {};
/// Robot i starts on nodes[i].
struct ExplicitPlacement {
  std::vector<NodeId> nodes;
};
using Placement = std::variant<RootedPlacement, ArbitraryPlacement, ExplicitPlacement>;

struct HiddenPort {
  NodeId node = 0;
  Port port = 0;
};

/// A robot at a node of degree above 2^bits sees only 2^bits ports, chosen
/// by nature each round; the hidden port is never among them.
struct PortRestriction {
  unsigned bits = 1;
  std::optional<HiddenPort> hidden;
};

struct ExperimentConfig {
  GraphSpec graph;
  std::size_t k = 1;
  Placement placement = RootedPlacement{};
  AlgorithmTag algorithm = AlgorithmTag::rooted_ring;
  std::uint64_t seed = 0;
  std::size_t max_rounds = 1'000'000;
  unsigned c_mem = 8;
  bool audit = true;
  std::optional<PortRestriction> restriction;
  bool record_trace = false;
  /// Random-walk settle counters are allowed while k <= Delta^c * n.
  unsigned counter_exponent = 2;
  /// Per-node, per-round sub-round cap; default 64 * ceil(log2(k + 2)).
  std::optional<std::size_t> subround_cap;
};

enum class RunStatus { completed, timeout, audit_failure, aborted };

std::string_view to_string(RunStatus status);

struct SettleEvent {
  std::size_t round = 0;
  NodeId node = kNoNode;
  NodeId from_node = kNoNode;  // where the robot came from; kNoNode at its start node
  std::size_t robot = 0;

  bool operator==(const SettleEvent&) const = default;
};

struct TerminateEvent {
  std::size_t round = 0;
  NodeId node = kNoNode;
  std::size_t robot = 0;

  bool operator==(const TerminateEvent&) const = default;
};

struct AuditFailure {
  std::size_t round = 0;
  std::size_t robot = 0;
  std::string role;
  std::size_t bits = 0;
  std::size_t limit = 0;
  std::vector<FieldBits> fields;
};

struct RoundRecord {
  std::size_t round = 0;
  std::vector<std::uint32_t> counts;
  std::vector<std::uint32_t> settled;
  std::size_t subrounds = 0;

  bool operator==(const RoundRecord&) const = default;
};

/// End-of-run state of one robot in the canonical encoding.
struct RobotSnapshot {
  NodeId node = kNoNode;
  bool settled = false;
  bool terminated = false;
  std::string role;
  std::string bits;
  std::vector<FieldBits> fields;

  /// Value of the named field (first match); throws std::out_of_range.
  std::uint64_t field(std::string_view name) const;
  /// Raw bits of the named field.
  std::string field_bits(std::string_view name) const;
};

struct SimulationResult {
  RunStatus status = RunStatus::completed;
  std::optional<std::size_t> dispersed_round;
  std::optional<std::size_t> all_terminated_round;
  std::size_t rounds_executed = 0;
  std::vector<std::size_t> peak_bits;  // per robot
  std::size_t max_peak_bits = 0;
  std::size_t bit_limit = 0;  // c_mem * budget
  std::size_t max_subrounds = 0;
  std::vector<NodeId> initial_nodes;
  std::vector<SettleEvent> settle_events;
  std::vector<TerminateEvent> terminate_events;
  std::vector<std::uint32_t> final_counts;
  std::optional<AuditFailure> audit_failure;
  std::string message;
  std::vector<RoundRecord> trace;            // filled when record_trace is set
  std::vector<RobotSnapshot> final_robots;  // likewise
};

/// ceil(k / n).
std::size_t dispersion_cap(std::size_t k, std::size_t n);

/// True iff every node holds at most ceil(k/n) robots.
bool is_dispersed(std::span<const std::uint32_t> counts, std::size_t k);
bool is_dispersed(const PortGraph& g, std::span<const NodeId> placement, std::size_t k);

/// Throws std::invalid_argument describing the first problem found.
void validate_config(const PortGraph& g, const ExperimentConfig& config);

/// Builds the graph from `config.graph` and runs.
SimulationResult run_simulation(const ExperimentConfig& config);
/// Runs on a given graph; `config.graph` is ignored.
SimulationResult run_simulation(const PortGraph& g, const ExperimentConfig& config);

/// Robots in the order they first settled (or claimed a node).
std::vector<std::size_t> settle_order(const SimulationResult& result);
/// Nodes in the order they first received a settler.
std::vector<NodeId> settled_node_order(const SimulationResult& result);

}  // namespace dispersion
