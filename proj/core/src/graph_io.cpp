#include "dispersion/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dispersion {
namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw GraphFormatError("graph file line " + std::to_string(line) + ": " + what);
}

bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

void write_graph(std::ostream& out, const PortGraph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << v << ' ' << g.degree(v);
    for (const PortEnd& end : g.ports(v)) out << " (" << end.node << ' ' << end.port << ')';
    out << '\n';
  }
}

std::string graph_to_text(const PortGraph& g) {
  std::ostringstream out;
  write_graph(out, g);
  return out.str();
}

PortGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no)) fail(line_no, "missing header 'n m'");

  std::istringstream header(line);
  long long n = -1;
  long long m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) fail(line_no, "header must be two non-negative integers");

  std::vector<std::vector<PortEnd>> adjacency(static_cast<std::size_t>(n));
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (long long row = 0; row < n; ++row) {
    if (!next_content_line(in, line, line_no)) fail(line_no, "expected " + std::to_string(n) + " node lines");
    for (char& c : line) {
      if (c == '(' || c == ')') c = ' ';
    }
    std::istringstream fields(line);
    long long v = -1;
    long long deg = -1;
    if (!(fields >> v >> deg) || v < 0 || v >= n || deg < 0) fail(line_no, "bad node id or degree");
    if (seen[static_cast<std::size_t>(v)]) fail(line_no, "node " + std::to_string(v) + " listed twice");
    seen[static_cast<std::size_t>(v)] = true;
    auto& ports = adjacency[static_cast<std::size_t>(v)];
    for (long long p = 0; p < deg; ++p) {
      long long u = -1;
      long long q = -1;
      if (!(fields >> u >> q) || u < 0 || q < 0) fail(line_no, "port " + std::to_string(p) + " is malformed");
      ports.push_back(PortEnd{static_cast<NodeId>(u), static_cast<Port>(q)});
    }
    std::string rest;
    if (fields >> rest) fail(line_no, "trailing data after " + std::to_string(deg) + " ports");
  }

  PortGraph g(std::move(adjacency));
  if (const auto violations = validate_graph(g); !violations.empty()) {
    const Violation& v = violations.front();
    throw GraphFormatError("graph: " + std::string(to_string(v.kind)) + " violation at node " +
                           std::to_string(v.node) + ": " + v.detail);
  }
  if (static_cast<long long>(g.edge_count()) != m) {
    fail(line_no, "header declares " + std::to_string(m) + " edges but ports describe " +
                      std::to_string(g.edge_count()));
  }
  return g;
}

PortGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphFormatError("cannot open graph file '" + path + "'");
  return read_graph(in);
}

}  // namespace dispersion
