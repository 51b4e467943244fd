#include "dispersion/graph_gen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "dispersion/rng.hpp"

namespace dispersion {
namespace {

using Edge = std::pair<NodeId, NodeId>;

std::pair<std::size_t, std::size_t> grid_dims(const GraphSpec& spec) {
  if (spec.rows != 0 && spec.cols != 0) return {spec.rows, spec.cols};
  std::size_t rows = static_cast<std::size_t>(std::sqrt(static_cast<double>(spec.n)));
  while (rows > 1 && spec.n % rows != 0) --rows;
  rows = std::max<std::size_t>(rows, 1);
  return {rows, spec.n / rows};
}

std::size_t max_edges(std::size_t n) { return n * (n - 1) / 2; }

// Uniform labeled tree on n nodes from a random Pruefer sequence.
std::vector<Edge> random_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  if (n < 2) return edges;
  if (n == 2) return {{0, 1}};
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  std::vector<NodeId> code(n - 2);
  for (auto& c : code) c = pick(rng);

  std::vector<std::size_t> remaining(n, 1);
  for (NodeId c : code) ++remaining[c];
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> leaves;
  for (NodeId v = 0; v < n; ++v) {
    if (remaining[v] == 1) leaves.push(v);
  }
  for (NodeId c : code) {
    const NodeId leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(std::min(leaf, c), std::max(leaf, c));
    if (--remaining[c] == 1) leaves.push(c);
  }
  const NodeId a = leaves.top();
  leaves.pop();
  const NodeId b = leaves.top();
  edges.emplace_back(std::min(a, b), std::max(a, b));
  return edges;
}

std::uint64_t edge_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::vector<Edge> random_connected(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::vector<Edge> edges = random_tree(n, rng);
  std::unordered_set<std::uint64_t> present;
  for (const auto& [a, b] : edges) present.insert(edge_key(a, b));
  const std::size_t extra = m - edges.size();
  if (extra == 0) return edges;

  if (2 * m <= max_edges(n)) {
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    while (edges.size() < m) {
      const NodeId a = pick(rng);
      const NodeId b = pick(rng);
      if (a == b || !present.insert(edge_key(a, b)).second) continue;
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    return edges;
  }

  // Dense target: enumerate the complement and take a random prefix.
  std::vector<Edge> candidates;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (!present.contains(edge_key(a, b))) candidates.emplace_back(a, b);
    }
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  edges.insert(edges.end(), candidates.begin(),
               candidates.begin() + static_cast<std::ptrdiff_t>(extra));
  return edges;
}

std::vector<Edge> family_edges(const GraphSpec& spec, std::mt19937_64& rng) {
  const std::size_t n = spec.n;
  std::vector<Edge> edges;
  switch (spec.family) {
    case GraphFamily::ring:
      if (n >= 3) {
        for (NodeId v = 0; v < n; ++v) {
          const NodeId u = static_cast<NodeId>((v + 1) % n);
          edges.emplace_back(std::min(u, v), std::max(u, v));
        }
      }
      break;
    case GraphFamily::path:
      for (NodeId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
      break;
    case GraphFamily::star:
      for (NodeId v = 1; v < n; ++v) edges.emplace_back(0, v);
      break;
    case GraphFamily::tree:
      edges = random_tree(n, rng);
      break;
    case GraphFamily::grid: {
      const auto [rows, cols] = grid_dims(spec);
      auto id = [cols = cols](std::size_t r, std::size_t c) {
        return static_cast<NodeId>(r * cols + c);
      };
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
          if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
      }
      break;
    }
    case GraphFamily::complete:
      for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) edges.emplace_back(a, b);
      }
      break;
    case GraphFamily::random_connected:
      edges = random_connected(n, spec.m, rng);
      break;
  }
  return edges;
}

}  // namespace

std::string_view to_string(GraphFamily family) {
  switch (family) {
    case GraphFamily::ring: return "ring";
    case GraphFamily::path: return "path";
    case GraphFamily::star: return "star";
    case GraphFamily::tree: return "tree";
    case GraphFamily::grid: return "grid";
    case GraphFamily::complete: return "complete";
    case GraphFamily::random_connected: return "random_connected";
  }
  return "unknown";
}

std::optional<GraphFamily> parse_graph_family(std::string_view text) {
  for (GraphFamily f : {GraphFamily::ring, GraphFamily::path, GraphFamily::star,
                        GraphFamily::tree, GraphFamily::grid, GraphFamily::complete,
                        GraphFamily::random_connected}) {
    if (to_string(f) == text) return f;
  }
  if (text == "random-connected" || text == "random") return GraphFamily::random_connected;
  return std::nullopt;
}

void validate_spec(const GraphSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("graph spec: n must be at least 1");
  switch (spec.family) {
    case GraphFamily::ring:
      if (spec.n == 2) {
        throw std::invalid_argument("graph spec: a simple ring needs n = 1 or n >= 3");
      }
      break;
    case GraphFamily::grid: {
      if ((spec.rows == 0) != (spec.cols == 0)) {
        throw std::invalid_argument("graph spec: grid needs both rows and cols, or neither");
      }
      if (spec.rows != 0 && spec.rows * spec.cols != spec.n) {
        throw std::invalid_argument("graph spec: grid rows*cols = " +
                                    std::to_string(spec.rows * spec.cols) +
                                    " does not match n = " + std::to_string(spec.n));
      }
      break;
    }
    case GraphFamily::random_connected:
      if (spec.m + 1 < spec.n) {
        throw std::invalid_argument("graph spec: m = " + std::to_string(spec.m) +
                                    " is below n-1 = " + std::to_string(spec.n - 1) +
                                    "; the graph cannot be connected");
      }
      if (spec.m > max_edges(spec.n)) {
        throw std::invalid_argument("graph spec: m = " + std::to_string(spec.m) +
                                    " exceeds n(n-1)/2 = " + std::to_string(max_edges(spec.n)));
      }
      break;
    default:
      break;
  }
}

std::size_t expected_edge_count(const GraphSpec& spec) {
  const std::size_t n = spec.n;
  switch (spec.family) {
    case GraphFamily::ring: return n >= 3 ? n : 0;
    case GraphFamily::path:
    case GraphFamily::star:
    case GraphFamily::tree: return n - 1;
    case GraphFamily::grid: {
      const auto [rows, cols] = grid_dims(spec);
      return rows * (cols - 1) + cols * (rows - 1);
    }
    case GraphFamily::complete: return max_edges(n);
    case GraphFamily::random_connected: return spec.m;
  }
  return 0;
}

PortGraph graph_from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                           std::optional<std::uint64_t> port_seed) {
  // Slot (node, local index) for both endpoints of every edge.
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> slots(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [a, b] = edges[e];
    slots[a].emplace_back(b, e);
    slots[b].emplace_back(a, e);
  }

  std::vector<std::vector<Port>> relabel(n);
  std::mt19937_64 rng(port_seed.value_or(0));
  for (NodeId v = 0; v < n; ++v) {
    relabel[v].resize(slots[v].size());
    std::iota(relabel[v].begin(), relabel[v].end(), Port{0});
    if (port_seed) std::shuffle(relabel[v].begin(), relabel[v].end(), rng);
  }

  // Port of edge e at each endpoint, after relabeling.
  std::vector<std::pair<Port, Port>> edge_ports(edges.size());
  for (NodeId v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < slots[v].size(); ++i) {
      const std::size_t e = slots[v][i].second;
      (edges[e].first == v ? edge_ports[e].first : edge_ports[e].second) = relabel[v][i];
    }
  }

  std::vector<std::vector<PortEnd>> adjacency(n);
  for (NodeId v = 0; v < n; ++v) adjacency[v].resize(slots[v].size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [a, b] = edges[e];
    const auto [pa, pb] = edge_ports[e];
    adjacency[a][pa] = PortEnd{b, pb};
    adjacency[b][pb] = PortEnd{a, pa};
  }
  return PortGraph(std::move(adjacency));
}

PortGraph build_graph(const GraphSpec& spec) {
  validate_spec(spec);
  std::mt19937_64 rng(spec.seed);
  const std::vector<Edge> edges = family_edges(spec, rng);
  std::optional<std::uint64_t> port_seed;
  if (spec.permute_ports) port_seed = spec.port_seed.value_or(mix64(spec.seed ^ 0x706f7274ULL));
  return graph_from_edges(spec.n, edges, port_seed);
}

}  // namespace dispersion
