#include "dispersion/runtime.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "dispersion/leader_election.hpp"
#include "dispersion/rng.hpp"

namespace dispersion {
namespace {

constexpr std::uint64_t kPlacementSalt = 0x706c6163ULL;
constexpr std::uint64_t kNatureSalt = 0x6e617475ULL;

std::vector<NodeId> initial_nodes(const PortGraph& g, const ExperimentConfig& cfg) {
  std::vector<NodeId> nodes(cfg.k);
  if (const auto* r = std::get_if<RootedPlacement>(&cfg.placement)) {
    std::fill(nodes.begin(), nodes.end(), r->root);
  } else if (const auto* e = std::get_if<ExplicitPlacement>(&cfg.placement)) {
    nodes = e->nodes;
  } else {
    std::mt19937_64 rng(mix64(cfg.seed ^ kPlacementSalt));
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g.node_count() - 1));
    for (auto& v : nodes) v = pick(rng);
  }
  return nodes;
}

// Saturating check of k <= delta^c * n.
bool within_counter_range(std::size_t k, std::size_t delta, unsigned c, std::size_t n) {
  long double limit = static_cast<long double>(n);
  for (unsigned i = 0; i < c; ++i) limit *= static_cast<long double>(delta);
  return static_cast<long double>(k) <= limit;
}

template <class Algo>
class Engine {
 public:
  using Payload = typename Algo::Payload;
  using Public = typename Algo::Public;
  using View = LocalView<Public>;

  Engine(const PortGraph& g, const ExperimentConfig& cfg, Algo algo, std::size_t settle_cap)
      : g_(g), cfg_(cfg), algo_(std::move(algo)), n_(g.node_count()) {
    const std::size_t delta = max_degree(g);
    widths_ = encoding_widths(delta, n_, settle_cap);
    limit_ = cfg.c_mem * memory_budget(cfg.algorithm, delta, n_, settle_cap);
    cap_ = dispersion_cap(cfg.k, n_);
    subround_cap_ = cfg.subround_cap.value_or(default_subround_cap(cfg.k));
    terminating_ = is_terminating(cfg.algorithm);
  }

  SimulationResult run() {
    result_.bit_limit = limit_;
    result_.initial_nodes = initial_nodes(g_, cfg_);
    robots_.resize(cfg_.k);
    occupancy_.assign(n_, {});
    result_.peak_bits.assign(cfg_.k, 0);
    for (std::size_t i = 0; i < cfg_.k; ++i) {
      robots_[i].payload = algo_.initial();
      robots_[i].node = result_.initial_nodes[i];
      occupancy_[robots_[i].node].push_back(i);
      if (!audit(i, 0)) return finish();
    }

    bool done = false;
    try {
      for (round_ = 1; round_ <= cfg_.max_rounds && !done; ++round_) {
        round_subrounds_ = 0;
        for (NodeId v = 0; v < n_ && !failed_; ++v) {
          if (!occupancy_[v].empty()) process_node(v);
        }
        if (failed_) break;
        apply_moves();
        result_.rounds_executed = round_;
        result_.max_subrounds = std::max(result_.max_subrounds, round_subrounds_);
        done = check_progress();
        if (cfg_.record_trace) record_round();
      }
    } catch (const std::exception& e) {
      result_.status = RunStatus::aborted;
      result_.message = "round " + std::to_string(round_) + ": " + e.what();
      result_.rounds_executed = round_;
      return finish();
    }
    if (!failed_ && !done) {
      result_.status = RunStatus::timeout;
      result_.message = "no " + std::string(terminating_ ? "termination" : "dispersion") +
                        " within " + std::to_string(cfg_.max_rounds) + " rounds";
    }
    return finish();
  }

 private:
  struct Robot {
    Payload payload;
    NodeId node = kNoNode;
    NodeId prev_node = kNoNode;
    std::optional<Port> entry;
    bool arrived = false;  // moved at the end of the previous round
    bool settled = false;
    bool terminated = false;
    bool logged_settle = false;
  };

  struct PendingMove {
    std::size_t robot;
    PortEnd target;
  };

  SimulationResult finish() {
    if (cfg_.record_trace) {
      for (const Robot& r : robots_) {
        BitEncoder enc(true);
        algo_.encode(r.payload, r.settled, widths_, enc);
        result_.final_robots.push_back({r.node, r.settled, r.terminated,
                                        std::string(algo_.role(r.payload, r.settled)), enc.bits(),
                                        enc.fields()});
      }
    }
    result_.final_counts.assign(n_, 0);
    for (const Robot& r : robots_) ++result_.final_counts[r.node];
    for (std::size_t b : result_.peak_bits) result_.max_peak_bits = std::max(result_.max_peak_bits, b);
    return std::move(result_);
  }

  bool audit(std::size_t i, std::size_t round) {
    const Robot& r = robots_[i];
    BitEncoder enc;
    algo_.encode(r.payload, r.settled, widths_, enc);
    result_.peak_bits[i] = std::max(result_.peak_bits[i], enc.size());
    if (!cfg_.audit || enc.size() <= limit_) return true;

    BitEncoder detail(true);
    algo_.encode(r.payload, r.settled, widths_, detail);
    AuditFailure f;
    f.round = round;
    f.robot = i;
    f.role = std::string(algo_.role(r.payload, r.settled));
    f.bits = enc.size();
    f.limit = limit_;
    f.fields = detail.fields();
    result_.status = RunStatus::audit_failure;
    result_.message = "round " + std::to_string(round) + ": " + f.role + " robot uses " +
                      std::to_string(f.bits) + " bits, limit " + std::to_string(limit_);
    result_.audit_failure = std::move(f);
    result_.rounds_executed = round;
    failed_ = true;
    return false;
  }

  void compute_visible(NodeId v) {
    visible_.clear();
    const std::size_t deg = g_.degree(v);
    const unsigned bits = cfg_.restriction->bits;
    const std::size_t shown = bits >= 63 ? deg : std::size_t{1} << bits;
    for (Port p = 0; p < deg; ++p) visible_.push_back(p);
    if (deg <= shown) return;
    const auto& hidden = cfg_.restriction->hidden;
    if (hidden && hidden->node == v) {
      visible_.erase(visible_.begin() + hidden->port);
    }
    RandomStream nature = derive_stream(cfg_.seed, round_, v, 0, kNatureSalt);
    for (std::size_t i = 0; i < shown && i < visible_.size(); ++i) {
      const std::size_t j = i + nature.below(visible_.size() - i);
      std::swap(visible_[i], visible_[j]);
    }
    visible_.resize(std::min(shown, visible_.size()));
    std::sort(visible_.begin(), visible_.end());
  }

  void process_node(NodeId v) {
    const auto& occ = occupancy_[v];
    hosts_.clear();
    mobile_.clear();
    for (std::size_t pos = 0; pos < occ.size(); ++pos) {
      const Robot& r = robots_[occ[pos]];
      if (r.terminated) continue;
      if (r.settled) {
        hosts_.push_back(occ[pos]);
      } else {
        mobile_.push_back(occ[pos]);
        mobile_pos_.push_back(pos);
      }
    }
    if (mobile_.empty()) {
      mobile_pos_.clear();
      return;
    }

    View base;
    base.degree = g_.degree(v);
    base.settled = hosts_.empty() ? nullptr : &algo_.public_fields(robots_[hosts_.front()].payload);
    if (cfg_.restriction) {
      compute_visible(v);
      base.restricted = true;
      base.visible_ports = visible_;
    }

    streams_.clear();
    contenders_.clear();
    for (std::size_t j = 0; j < mobile_.size(); ++j) {
      streams_.push_back(derive_stream(cfg_.seed, round_, v, mobile_pos_[j]));
      const Robot& r = robots_[mobile_[j]];
      if (algo_.wants_election(r.payload, view_for(base, r))) contenders_.push_back(j);
    }
    mobile_pos_.clear();

    ballots_.assign(mobile_.size(), Ballot::none);
    SubroundChannel channel(subround_cap_);
    if (!contenders_.empty()) {
      bool lone = false;
      if constexpr (Algo::needs_presence) {
        lone = channel.exchange(contenders_.size()) == Heard::one;
      }
      scratch_.clear();
      elect_streams_.clear();
      for (std::size_t j : contenders_) {
        scratch_.push_back(robots_[mobile_[j]].payload.election);
        elect_streams_.push_back(streams_[j]);
      }
      const ElectionResult er = local_leader_election(scratch_, elect_streams_, channel);
      for (std::size_t c = 0; c < contenders_.size(); ++c) {
        const std::size_t j = contenders_[c];
        robots_[mobile_[j]].payload.election = scratch_[c];
        streams_[j] = elect_streams_[c];
        ballots_[j] = c == er.leader ? (lone ? Ballot::won_alone : Ballot::won) : Ballot::lost;
      }
    }
    round_subrounds_ = std::max(round_subrounds_, channel.used());

    actions_.clear();
    messages_.clear();
    for (std::size_t j = 0; j < mobile_.size(); ++j) {
      Robot& r = robots_[mobile_[j]];
      const View view = view_for(base, r);
      Action a = algo_.step(r.payload, view, ballots_[j], streams_[j]);
      if (a.kind == Action::Kind::move) {
        if (a.port >= base.degree) {
          throw InvariantViolation("move through port " + std::to_string(a.port) +
                                   " at a node of degree " + std::to_string(base.degree));
        }
        if (base.restricted &&
            !std::binary_search(visible_.begin(), visible_.end(), a.port)) {
          throw InvariantViolation("move through a port hidden from the robot");
        }
      }
      for (const Message& m : a.messages()) messages_.push_back(m);
      actions_.push_back(a);
    }

    if (!messages_.empty()) {
      for (std::size_t h : hosts_) {
        if (algo_.react(robots_[h].payload, messages_)) {
          robots_[h].terminated = true;
          ++terminated_count_;
          result_.terminate_events.push_back({round_, v, h});
        }
        if (!audit(h, round_)) return;
      }
    }

    for (std::size_t j = 0; j < mobile_.size(); ++j) {
      const std::size_t i = mobile_[j];
      Robot& r = robots_[i];
      const Action& a = actions_[j];
      if (a.claims_node || a.kind == Action::Kind::settle ||
          a.kind == Action::Kind::terminate_and_settle) {
        if (!r.logged_settle) {
          r.logged_settle = true;
          result_.settle_events.push_back({round_, v, r.prev_node, i});
        }
      }
      switch (a.kind) {
        case Action::Kind::stay:
          break;
        case Action::Kind::move:
          moves_.push_back({i, g_.follow(v, a.port)});
          break;
        case Action::Kind::settle:
          r.settled = true;
          ++settled_count_;
          break;
        case Action::Kind::terminate_and_settle:
          r.settled = true;
          r.terminated = true;
          ++settled_count_;
          ++terminated_count_;
          result_.terminate_events.push_back({round_, v, i});
          break;
      }
      if (!audit(i, round_)) return;
    }

    if (cfg_.k <= n_) {
      std::size_t settled_here = 0;
      for (std::size_t i : occ) settled_here += robots_[i].settled ? 1 : 0;
      if (settled_here > 1) {
        throw InvariantViolation("node " + std::to_string(v) + " holds " +
                                 std::to_string(settled_here) + " settled robots");
      }
    }
  }

  View view_for(const View& base, const Robot& r) const {
    View view = base;
    if (r.arrived) view.entry_port = r.entry;
    return view;
  }

  void apply_moves() {
    std::vector<bool>& moving = moving_;
    moving.assign(robots_.size(), false);
    for (const PendingMove& m : moves_) moving[m.robot] = true;
    for (auto& list : arrivals_) list.clear();
    arrivals_.resize(n_);
    for (const PendingMove& m : moves_) {
      Robot& r = robots_[m.robot];
      r.prev_node = r.node;
      r.node = m.target.node;
      r.entry = m.target.port;
    }
    // Arrival order at each node: robots already there, then newcomers by
    // source node and their order at the source.
    for (NodeId v = 0; v < n_; ++v) {
      auto& occ = occupancy_[v];
      std::size_t keep = 0;
      for (std::size_t idx : occ) {
        if (moving[idx]) {
          arrivals_[robots_[idx].node].push_back(idx);
        } else {
          occ[keep++] = idx;
          robots_[idx].arrived = false;
        }
      }
      occ.resize(keep);
    }
    for (NodeId v = 0; v < n_; ++v) {
      for (std::size_t idx : arrivals_[v]) {
        occupancy_[v].push_back(idx);
        robots_[idx].arrived = true;
      }
    }
    moves_.clear();
  }

  bool counts_within_cap() const {
    for (const auto& occ : occupancy_) {
      if (occ.size() > cap_) return false;
    }
    return true;
  }

  bool check_progress() {
    if (!result_.dispersed_round && settled_count_ == cfg_.k && counts_within_cap()) {
      result_.dispersed_round = round_;
    }
    if (terminating_) {
      if (terminated_count_ == cfg_.k) {
        result_.all_terminated_round = round_;
        if (!result_.dispersed_round) {
          throw InvariantViolation("all robots terminated without dispersion");
        }
        return true;
      }
      return false;
    }
    // Walkers never terminate; stop once dispersion has held for one more round.
    return result_.dispersed_round && round_ > *result_.dispersed_round;
  }

  void record_round() {
    RoundRecord rec;
    rec.round = round_;
    rec.counts.assign(n_, 0);
    rec.settled.assign(n_, 0);
    for (NodeId v = 0; v < n_; ++v) {
      rec.counts[v] = static_cast<std::uint32_t>(occupancy_[v].size());
      for (std::size_t i : occupancy_[v]) rec.settled[v] += robots_[i].settled ? 1 : 0;
    }
    rec.subrounds = round_subrounds_;
    result_.trace.push_back(std::move(rec));
  }

  const PortGraph& g_;
  const ExperimentConfig& cfg_;
  Algo algo_;
  std::size_t n_;
  EncodingWidths widths_;
  std::size_t limit_ = 0;
  std::size_t cap_ = 1;
  std::size_t subround_cap_ = 0;
  bool terminating_ = true;

  SimulationResult result_;
  std::vector<Robot> robots_;
  std::vector<std::vector<std::size_t>> occupancy_;
  std::vector<std::vector<std::size_t>> arrivals_;
  std::vector<PendingMove> moves_;
  std::vector<bool> moving_;
  std::size_t round_ = 0;
  std::size_t round_subrounds_ = 0;
  std::size_t settled_count_ = 0;
  std::size_t terminated_count_ = 0;
  bool failed_ = false;

  // Per-node scratch reused across rounds.
  std::vector<std::size_t> hosts_;
  std::vector<std::size_t> mobile_;
  std::vector<std::size_t> mobile_pos_;
  std::vector<std::size_t> contenders_;
  std::vector<RandomStream> streams_;
  std::vector<RandomStream> elect_streams_;
  std::vector<ElectionScratch> scratch_;
  std::vector<Ballot> ballots_;
  std::vector<Action> actions_;
  std::vector<Message> messages_;
  std::vector<Port> visible_;
};

template <class Algo>
SimulationResult run_engine(const PortGraph& g, const ExperimentConfig& cfg, Algo algo,
                            std::size_t settle_cap = 1) {
  return Engine<Algo>(g, cfg, std::move(algo), settle_cap).run();
}

}  // namespace

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::timeout: return "timeout";
    case RunStatus::audit_failure: return "audit_failure";
    case RunStatus::aborted: return "aborted";
  }
  return "unknown";
}

std::size_t dispersion_cap(std::size_t k, std::size_t n) { return n == 0 ? k : (k + n - 1) / n; }

bool is_dispersed(std::span<const std::uint32_t> counts, std::size_t k) {
  const std::size_t cap = dispersion_cap(k, counts.size());
  return std::all_of(counts.begin(), counts.end(), [&](std::uint32_t c) { return c <= cap; });
}

bool is_dispersed(const PortGraph& g, std::span<const NodeId> placement, std::size_t k) {
  std::vector<std::uint32_t> counts(g.node_count(), 0);
  for (NodeId v : placement) ++counts.at(v);
  return is_dispersed(counts, k);
}

void validate_config(const PortGraph& g, const ExperimentConfig& cfg) {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  const std::size_t n = g.node_count();
  if (n == 0) fail("graph has no nodes");
  if (cfg.k < 1) fail("k must be at least 1");
  if (cfg.max_rounds < 1) fail("max_rounds must be at least 1");
  if (cfg.c_mem < 1) fail("c_mem must be at least 1");
  if (const auto issues = validate_graph(g); !issues.empty()) {
    fail("invalid graph: " + std::string(to_string(issues.front().kind)) + " at node " +
         std::to_string(issues.front().node) + ": " + issues.front().detail);
  }

  const AlgorithmTag tag = cfg.algorithm;
  if (const auto* r = std::get_if<RootedPlacement>(&cfg.placement)) {
    if (r->root >= n) fail("root " + std::to_string(r->root) + " is not a node");
  } else if (is_rooted(tag)) {
    fail(std::string(to_string(tag)) + " needs a rooted placement");
  }
  if (const auto* e = std::get_if<ExplicitPlacement>(&cfg.placement)) {
    if (e->nodes.size() != cfg.k) fail("explicit placement must list exactly k nodes");
    for (NodeId v : e->nodes) {
      if (v >= n) fail("placement node " + std::to_string(v) + " is not a node");
    }
  }

  if (tag == AlgorithmTag::rooted_ring && n > 1) {
    for (NodeId v = 0; v < n; ++v) {
      if (g.degree(v) != 2) fail("rooted-ring needs a ring; node " + std::to_string(v) +
                                 " has degree " + std::to_string(g.degree(v)));
    }
  }
  if (tag == AlgorithmTag::rooted_tree && g.edge_count() + 1 != n) {
    fail("rooted-tree needs a tree; graph has " + std::to_string(g.edge_count()) + " edges on " +
         std::to_string(n) + " nodes");
  }
  if (tag == AlgorithmTag::arbitrary_graph && cfg.k > n &&
      !within_counter_range(cfg.k, max_degree(g), cfg.counter_exponent, n)) {
    fail("arbitrary-graph supports k > n only while k <= Delta^" +
         std::to_string(cfg.counter_exponent) + " * n");
  }
  if (cfg.restriction) {
    if (tag != AlgorithmTag::arbitrary_graph) fail("port restriction applies to arbitrary-graph only");
    if (const auto& h = cfg.restriction->hidden) {
      if (h->node >= n || h->port >= g.degree(h->node)) fail("hidden port does not exist");
    }
  }
}

SimulationResult run_simulation(const ExperimentConfig& config) {
  const PortGraph g = build_graph(config.graph);
  return run_simulation(g, config);
}

SimulationResult run_simulation(const PortGraph& g, const ExperimentConfig& config) {
  validate_config(g, config);
  const bool staged = config.k > g.node_count();
  switch (config.algorithm) {
    case AlgorithmTag::rooted_ring:
      return run_engine(g, config, RingAlgorithm{});
    case AlgorithmTag::rooted_tree:
      return run_engine(g, config, DfsAlgorithm(CycleCheck::none, staged));
    case AlgorithmTag::rooted_graph_logd:
      return run_engine(g, config, DfsAlgorithm(CycleCheck::depth, staged));
    case AlgorithmTag::rooted_graph_delta:
      return run_engine(g, config, DfsAlgorithm(CycleCheck::forward_mask, staged));
    case AlgorithmTag::arbitrary_graph: {
      const std::size_t cap = dispersion_cap(config.k, g.node_count());
      return run_engine(g, config, WalkAlgorithm(cap), cap);
    }
  }
  throw std::invalid_argument("config: unknown algorithm");
}

std::string RobotSnapshot::field_bits(std::string_view name) const {
  std::size_t offset = 0;
  for (const FieldBits& f : fields) {
    if (f.name == name) return bits.substr(offset, f.width);
    offset += f.width;
  }
  throw std::out_of_range("no field named '" + std::string(name) + "'");
}

std::uint64_t RobotSnapshot::field(std::string_view name) const {
  const std::string raw = field_bits(name);
  std::uint64_t value = 0;
  for (char c : raw) value = (value << 1) | (c == '1' ? 1U : 0U);
  return value;
}

std::vector<std::size_t> settle_order(const SimulationResult& result) {
  std::vector<std::size_t> order;
  order.reserve(result.settle_events.size());
  for (const SettleEvent& e : result.settle_events) order.push_back(e.robot);
  return order;
}

std::vector<NodeId> settled_node_order(const SimulationResult& result) {
  std::vector<NodeId> order;
  std::vector<bool> seen;
  for (const SettleEvent& e : result.settle_events) {
    if (e.node >= seen.size()) seen.resize(e.node + 1, false);
    if (seen[e.node]) continue;
    seen[e.node] = true;
    order.push_back(e.node);
  }
  return order;
}

}  // namespace dispersion
