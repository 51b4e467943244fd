#pragma once

// Independent reference computations used as test oracles. Nothing here
// calls into the simulator's algorithm code.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dispersion/port_graph.hpp"

namespace oracle {

using dispersion::NodeId;
using dispersion::Port;
using dispersion::PortGraph;

/// All-pairs shortest paths by Floyd-Warshall; returns the diameter.
std::size_t diameter_floyd(const PortGraph& g);

/// Nodes reachable from `source` by iterative DFS over the adjacency.
std::size_t reachable_count(const PortGraph& g, NodeId source);

/// Port-ordered DFS preorder from `root`, recursive: at the root ports are
/// tried 0, 1, ...; elsewhere starting after the parent port and wrapping
/// around. Returns the first `limit` nodes.
std::vector<NodeId> dfs_preorder(const PortGraph& g, NodeId root, std::size_t limit);

/// Parent of each node in that DFS tree (kNoNode for the root and for nodes
/// outside the first `limit`).
std::vector<NodeId> dfs_parents(const PortGraph& g, NodeId root, std::size_t limit);

struct RootedTiming {
  std::size_t phase_one_moves = 0;  // moves until the k-th node is reached
  std::size_t probe_moves = 0;      // moves spent on edges into settled nodes
  std::size_t final_depth = 0;
  std::size_t terminated_round = 0;
};

/// Global single-walker model of the rooted DFS algorithms with k <= n:
/// phase one walks the DFS until the k-th node, the explorer climbs back to
/// the root, then repeats the walk (every edge for trees and the distance
/// variant, tree edges only with forward masks), terminating one round
/// after arriving home.
RootedTiming rooted_dfs_timing(const PortGraph& g, NodeId root, std::size_t k, bool tree_edges_only);

/// (n-1) * H(n-1): expected cover time of the complete graph K_n.
double complete_graph_cover_time(std::size_t n);

/// n(n-1)/2: expected cover time of the n-cycle.
double cycle_cover_time(std::size_t n);

/// Canonical string of an unlabeled tree (centre-rooted AHU encoding).
std::string tree_shape(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges);

/// Number of unlabeled trees on n nodes, n = 1..8.
std::size_t unlabeled_tree_count(std::size_t n);

}  // namespace oracle
