#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>

namespace oracle {

std::size_t diameter_floyd(const PortGraph& g) {
  const std::size_t n = g.node_count();
  const std::size_t inf = std::numeric_limits<std::size_t>::max() / 4;
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
  for (NodeId v = 0; v < n; ++v) {
    d[v][v] = 0;
    for (const auto& end : g.ports(v)) d[v][end.node] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::size_t best = 0;
  for (const auto& row : d)
    for (std::size_t x : row) best = std::max(best, x);
  return best;
}

std::size_t reachable_count(const PortGraph& g, NodeId source) {
  std::vector<bool> seen(g.node_count(), false);
  std::vector<NodeId> stack{source};
  seen[source] = true;
  std::size_t count = 0;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    ++count;
    for (const auto& end : g.ports(v)) {
      if (!seen[end.node]) {
        seen[end.node] = true;
        stack.push_back(end.node);
      }
    }
  }
  return count;
}

namespace {

struct DfsRun {
  const PortGraph& g;
  std::size_t limit;
  std::vector<bool> seen;
  std::vector<NodeId> order;
  std::vector<NodeId> parent;

  void visit(NodeId u, std::optional<Port> parent_port) {
    seen[u] = true;
    order.push_back(u);
    const std::size_t deg = g.degree(u);
    for (std::size_t i = 0; i < deg; ++i) {
      if (order.size() >= limit) return;
      Port q;
      if (parent_port) {
        q = static_cast<Port>((*parent_port + 1 + i) % deg);
        if (q == *parent_port) continue;
      } else {
        q = static_cast<Port>(i);
      }
      const auto end = g.follow(u, q);
      if (seen[end.node]) continue;
      parent[end.node] = u;
      visit(end.node, end.port);
    }
  }
};

}  // namespace

std::vector<NodeId> dfs_preorder(const PortGraph& g, NodeId root, std::size_t limit) {
  DfsRun run{g, limit, std::vector<bool>(g.node_count(), false), {},
             std::vector<NodeId>(g.node_count(), dispersion::kNoNode)};
  run.visit(root, std::nullopt);
  run.order.resize(std::min(run.order.size(), limit));
  return run.order;
}

std::vector<NodeId> dfs_parents(const PortGraph& g, NodeId root, std::size_t limit) {
  DfsRun run{g, limit, std::vector<bool>(g.node_count(), false), {},
             std::vector<NodeId>(g.node_count(), dispersion::kNoNode)};
  run.visit(root, std::nullopt);
  return run.parent;
}

RootedTiming rooted_dfs_timing(const PortGraph& g, NodeId root, std::size_t k, bool tree_edges_only) {
  RootedTiming t;
  if (k <= 1) {
    t.terminated_round = 1;
    return t;
  }
  // Explicit-stack walk with the same port discipline as dfs_preorder,
  // counting moves.
  struct Frame {
    NodeId node;
    std::optional<Port> parent_port;
    std::size_t next = 0;  // ports tried so far
    std::size_t depth = 0;
  };
  std::vector<bool> seen(g.node_count(), false);
  std::vector<Frame> stack{{root, std::nullopt, 0, 0}};
  seen[root] = true;
  std::size_t count = 1;
  while (count < k) {
    if (stack.empty()) throw std::logic_error("k exceeds reachable nodes");
    Frame& f = stack.back();
    const std::size_t deg = g.degree(f.node);
    const std::size_t options = f.parent_port ? deg - 1 : deg;
    if (f.next == options) {
      stack.pop_back();
      ++t.phase_one_moves;  // back to the parent
      continue;
    }
    const Port q = f.parent_port ? static_cast<Port>((*f.parent_port + 1 + f.next) % deg)
                                 : static_cast<Port>(f.next);
    ++f.next;
    const auto end = g.follow(f.node, q);
    if (seen[end.node]) {
      t.phase_one_moves += 2;
      t.probe_moves += 2;
      continue;
    }
    seen[end.node] = true;
    ++t.phase_one_moves;
    ++count;
    stack.push_back({end.node, end.port, 0, f.depth + 1});
  }
  t.final_depth = stack.back().depth;
  const std::size_t second = tree_edges_only ? t.phase_one_moves - t.probe_moves : t.phase_one_moves;
  t.terminated_round = t.phase_one_moves + t.final_depth + second + 1;
  return t;
}

double complete_graph_cover_time(std::size_t n) {
  double h = 0.0;
  for (std::size_t i = 1; i < n; ++i) h += 1.0 / static_cast<double>(i);
  return static_cast<double>(n - 1) * h;
}

double cycle_cover_time(std::size_t n) { return static_cast<double>(n * (n - 1)) / 2.0; }

namespace {

std::string ahu(NodeId u, NodeId parent, const std::vector<std::vector<NodeId>>& adj) {
  std::vector<std::string> kids;
  for (NodeId v : adj[u]) {
    if (v != parent) kids.push_back(ahu(v, u, adj));
  }
  std::sort(kids.begin(), kids.end());
  std::string s = "(";
  for (const auto& k : kids) s += k;
  return s + ")";
}

}  // namespace

std::string tree_shape(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  // Centres by repeated leaf stripping.
  std::vector<std::size_t> deg(n);
  std::vector<NodeId> layer;
  for (NodeId v = 0; v < n; ++v) {
    deg[v] = adj[v].size();
    if (deg[v] <= 1) layer.push_back(v);
  }
  std::size_t remaining = n;
  while (remaining > 2) {
    remaining -= layer.size();
    std::vector<NodeId> next;
    for (NodeId v : layer) {
      for (NodeId u : adj[v]) {
        if (--deg[u] == 1) next.push_back(u);
      }
    }
    layer = std::move(next);
  }
  std::string best;
  for (NodeId c : layer) {
    std::string s = ahu(c, dispersion::kNoNode, adj);
    if (best.empty() || s < best) best = s;
  }
  return best;
}

std::size_t unlabeled_tree_count(std::size_t n) {
  static constexpr std::size_t counts[] = {0, 1, 1, 1, 2, 3, 6, 11, 23};
  if (n == 0 || n > 8) throw std::out_of_range("table covers n = 1..8");
  return counts[n];
}

}  // namespace oracle
