#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "dispersion/port_graph.hpp"

namespace dispersion {

enum class GraphFamily {
  ring,
  path,
  star,
  tree,
  grid,
  complete,
  random_connected,
};

std::string_view to_string(GraphFamily family);
std::optional<GraphFamily> parse_graph_family(std::string_view text);

struct GraphSpec {
  GraphFamily family = GraphFamily::ring;
  std::size_t n = 1;
  std::size_t m = 0;     // random_connected only
  std::size_t rows = 0;  // grid; 0 picks the squarest factorization of n
  std::size_t cols = 0;
  std::uint64_t seed = 0;
  // Port permutation stream; defaults to one derived from `seed`. Changing
  // it renumbers ports without touching the edge set.
  std::optional<std::uint64_t> port_seed;
  bool permute_ports = true;
};

/// Throws std::invalid_argument with a diagnostic for an unusable spec.
void validate_spec(const GraphSpec& spec);

/// Deterministic for a fixed spec. Port numbers at every node are shuffled
/// unless `permute_ports` is false.
PortGraph build_graph(const GraphSpec& spec);

/// Ports are assigned in edge order, then shuffled per node when
/// `port_seed` is set. Edges must be simple; no validation is done here.
PortGraph graph_from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                           std::optional<std::uint64_t> port_seed);

/// Edge count a spec will produce (harness convenience).
std::size_t expected_edge_count(const GraphSpec& spec);

}  // namespace dispersion
