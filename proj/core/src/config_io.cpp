#include "dispersion/config_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>

namespace dispersion {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

KeyValues read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_key_values(in);
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> items;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    if (!item.empty()) items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return items;
}

bool parse_bool(std::string_view text) {
  if (text == "on" || text == "true" || text == "1" || text == "yes") return true;
  if (text == "off" || text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("expected on/off, got '" + std::string(text) + "'");
}

std::uint64_t parse_uint(std::string_view key, std::string_view text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

Placement parse_placement(std::string_view text) {
  text = trim(text);
  if (text == "arbitrary") return ArbitraryPlacement{};
  if (text == "rooted") return RootedPlacement{0};
  if (text.starts_with("rooted:")) {
    return RootedPlacement{static_cast<NodeId>(parse_uint("placement", text.substr(7)))};
  }
  if (text.starts_with("explicit:")) {
    ExplicitPlacement e;
    for (const std::string& item : split_list(text.substr(9))) {
      e.nodes.push_back(static_cast<NodeId>(parse_uint("placement", item)));
    }
    return e;
  }
  throw ConfigError("placement: expected rooted:<v>, arbitrary, or explicit:<list>, got '" +
                    std::string(text) + "'");
}

std::string to_string(const Placement& placement) {
  if (const auto* r = std::get_if<RootedPlacement>(&placement)) {
    return "rooted:" + std::to_string(r->root);
  }
  if (const auto* e = std::get_if<ExplicitPlacement>(&placement)) {
    std::string s = "explicit:";
    for (std::size_t i = 0; i < e->nodes.size(); ++i) {
      if (i != 0) s += ',';
      s += std::to_string(e->nodes[i]);
    }
    return s;
  }
  return "arbitrary";
}

ExperimentConfig experiment_from_key_values(const KeyValues& kv, ExperimentConfig cfg) {
  std::optional<unsigned> restrict_bits;
  std::optional<HiddenPort> hidden;
  for (const auto& [key, value] : kv) {
    if (key == "graph") {
      const auto family = parse_graph_family(value);
      if (!family) throw ConfigError("graph: unknown family '" + value + "'");
      cfg.graph.family = *family;
    } else if (key == "n") {
      cfg.graph.n = parse_uint(key, value);
    } else if (key == "m") {
      cfg.graph.m = parse_uint(key, value);
    } else if (key == "rows") {
      cfg.graph.rows = parse_uint(key, value);
    } else if (key == "cols") {
      cfg.graph.cols = parse_uint(key, value);
    } else if (key == "graph_seed") {
      cfg.graph.seed = parse_uint(key, value);
    } else if (key == "port_seed") {
      cfg.graph.port_seed = parse_uint(key, value);
    } else if (key == "permute_ports") {
      cfg.graph.permute_ports = parse_bool(value);
    } else if (key == "k") {
      cfg.k = parse_uint(key, value);
    } else if (key == "algorithm") {
      const auto tag = parse_algorithm(value);
      if (!tag) throw ConfigError("algorithm: unknown algorithm '" + value + "'");
      cfg.algorithm = *tag;
    } else if (key == "placement") {
      cfg.placement = parse_placement(value);
    } else if (key == "seed") {
      cfg.seed = parse_uint(key, value);
    } else if (key == "max_rounds") {
      cfg.max_rounds = parse_uint(key, value);
    } else if (key == "c_mem") {
      cfg.c_mem = static_cast<unsigned>(parse_uint(key, value));
    } else if (key == "audit") {
      cfg.audit = parse_bool(value);
    } else if (key == "trace") {
      cfg.record_trace = parse_bool(value);
    } else if (key == "counter_exponent") {
      cfg.counter_exponent = static_cast<unsigned>(parse_uint(key, value));
    } else if (key == "subround_cap") {
      cfg.subround_cap = parse_uint(key, value);
    } else if (key == "restrict_bits") {
      restrict_bits = static_cast<unsigned>(parse_uint(key, value));
    } else if (key == "hidden_port") {
      const auto colon = value.find(':');
      if (colon == std::string::npos) throw ConfigError("hidden_port: expected node:port");
      hidden = HiddenPort{static_cast<NodeId>(parse_uint(key, value.substr(0, colon))),
                          static_cast<Port>(parse_uint(key, value.substr(colon + 1)))};
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (hidden && !restrict_bits) throw ConfigError("hidden_port needs restrict_bits");
  if (restrict_bits) cfg.restriction = PortRestriction{*restrict_bits, hidden};
  return cfg;
}

}  // namespace dispersion
