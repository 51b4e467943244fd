#include "dispersion/port_graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dispersion {

PortGraph::PortGraph(std::vector<std::vector<PortEnd>> adjacency)
    : adjacency_(std::move(adjacency)) {
  std::size_t entries = 0;
  for (const auto& ports : adjacency_) entries += ports.size();
  edge_count_ = entries / 2;
}

std::size_t max_degree(const PortGraph& g) {
  std::size_t best = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) best = std::max(best, g.degree(v));
  return best;
}

std::vector<std::size_t> bfs_distances(const PortGraph& g, NodeId source) {
  std::vector<std::size_t> dist(g.node_count(), kUnreached);
  if (source >= g.node_count()) return dist;
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (const PortEnd& end : g.ports(v)) {
      if (end.node >= g.node_count() || dist[end.node] != kUnreached) continue;
      dist[end.node] = dist[v] + 1;
      queue.push_back(end.node);
    }
  }
  return dist;
}

std::size_t diameter(const PortGraph& g) {
  std::size_t best = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (std::size_t d : bfs_distances(g, v)) {
      if (d == kUnreached) throw std::invalid_argument("diameter: graph is disconnected");
      best = std::max(best, d);
    }
  }
  return best;
}

std::vector<std::pair<NodeId, NodeId>> edge_set(const PortGraph& g) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(g.edge_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (const PortEnd& end : g.ports(v)) {
      if (v < end.node) edges.emplace_back(v, end.node);
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::symmetry: return "symmetry";
    case ViolationKind::contiguity: return "contiguity";
    case ViolationKind::connectivity: return "connectivity";
    case ViolationKind::self_loop: return "self_loop";
    case ViolationKind::parallel_edge: return "parallel_edge";
  }
  return "unknown";
}

std::vector<Violation> validate_graph(const PortGraph& g) {
  std::vector<Violation> report;
  const std::size_t n = g.node_count();
  auto add = [&report](ViolationKind kind, NodeId v, Port p, std::string detail) {
    report.push_back(Violation{kind, v, p, std::move(detail)});
  };

  for (NodeId v = 0; v < n; ++v) {
    std::set<NodeId> neighbors;
    const auto ports = g.ports(v);
    for (Port p = 0; p < ports.size(); ++p) {
      const PortEnd& end = ports[p];
      std::ostringstream where;
      where << "node " << v << " port " << p;
      if (end.node >= n) {
        add(ViolationKind::contiguity, v, p, where.str() + " has no edge");
        continue;
      }
      if (end.port >= g.degree(end.node)) {
        add(ViolationKind::contiguity, v, p,
            where.str() + " refers to missing port " + std::to_string(end.port) +
                " at node " + std::to_string(end.node));
        continue;
      }
      if (end.node == v) add(ViolationKind::self_loop, v, p, where.str() + " is a self-loop");
      if (!neighbors.insert(end.node).second) {
        add(ViolationKind::parallel_edge, v, p,
            where.str() + " duplicates an edge to node " + std::to_string(end.node));
      }
      const PortEnd& back = g.follow(end.node, end.port);
      if (back.node != v || back.port != p) {
        add(ViolationKind::symmetry, v, p,
            where.str() + " maps to (" + std::to_string(end.node) + "," +
                std::to_string(end.port) + ") which maps back to (" +
                std::to_string(back.node) + "," + std::to_string(back.port) + ")");
      }
    }
  }

  if (n > 0) {
    const auto dist = bfs_distances(g, 0);
    const auto unreached = std::count(dist.begin(), dist.end(), kUnreached);
    if (unreached > 0) {
      add(ViolationKind::connectivity, 0, 0,
          std::to_string(unreached) + " node(s) unreachable from node 0");
    }
  }
  return report;
}

}  // namespace dispersion
