#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "dispersion/port_graph.hpp"

namespace dispersion {

class GraphFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Line-oriented text format:
//
//   n m
//   v deg (u0 q0) (u1 q1) ...
//
// one line per node, ports listed in order; `#` starts a comment. Reading
// checks syntax only; callers validate the resulting graph.
void write_graph(std::ostream& out, const PortGraph& g);
std::string graph_to_text(const PortGraph& g);
PortGraph read_graph(std::istream& in);
PortGraph read_graph_file(const std::string& path);

}  // namespace dispersion
