#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dispersion {

using NodeId = std::uint32_t;
using Port = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

/// Far side of a port: the neighbor reached through it and the neighbor's
/// port that leads back.
struct PortEnd {
  NodeId node = kNoNode;
  Port port = 0;

  bool operator==(const PortEnd&) const = default;
};

/// Anonymous undirected graph with a local port numbering at every node.
///
/// Node ids exist for the simulator and for tests; robot logic never sees
/// them. Construction does not validate; run `validate_graph` on anything
/// that did not come out of `build_graph`.
class PortGraph {
 public:
  PortGraph() = default;
  explicit PortGraph(std::vector<std::vector<PortEnd>> adjacency);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }

  const PortEnd& follow(NodeId v, Port p) const { return adjacency_[v][p]; }
  std::span<const PortEnd> ports(NodeId v) const { return adjacency_[v]; }

  const std::vector<std::vector<PortEnd>>& adjacency() const noexcept {
    return adjacency_;
  }

  bool operator==(const PortGraph& other) const {
    return adjacency_ == other.adjacency_;
  }

 private:
  std::vector<std::vector<PortEnd>> adjacency_;
  std::size_t edge_count_ = 0;
};

std::size_t max_degree(const PortGraph& g);

/// BFS hop distances from `source`; unreachable nodes get kUnreached.
std::vector<std::size_t> bfs_distances(const PortGraph& g, NodeId source);

/// Largest BFS eccentricity. Throws std::invalid_argument on a disconnected
/// graph. Harness-side only.
std::size_t diameter(const PortGraph& g);

/// Edges as (min, max) node pairs, sorted.
std::vector<std::pair<NodeId, NodeId>> edge_set(const PortGraph& g);

enum class ViolationKind {
  symmetry,
  contiguity,
  connectivity,
  self_loop,
  parallel_edge,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  NodeId node = kNoNode;
  Port port = 0;
  std::string detail;
};

/// Empty iff the graph is connected, simple, and its port map is a
/// contiguous symmetric involution.
std::vector<Violation> validate_graph(const PortGraph& g);

}  // namespace dispersion
