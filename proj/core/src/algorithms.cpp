#include "dispersion/algorithms.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace dispersion {
namespace {

using Role = DfsAlgorithm::Role;
using LastMove = DfsAlgorithm::LastMove;

constexpr std::array<std::pair<AlgorithmTag, std::string_view>, 5> kTags{{
    {AlgorithmTag::rooted_ring, "rooted-ring"},
    {AlgorithmTag::rooted_tree, "rooted-tree"},
    {AlgorithmTag::rooted_graph_logd, "rooted-graph-logd"},
    {AlgorithmTag::rooted_graph_delta, "rooted-graph-delta"},
    {AlgorithmTag::arbitrary_graph, "arbitrary-graph"},
}};

[[noreturn]] void violation(const std::string& what) { throw InvariantViolation(what); }

Port require(const std::optional<Port>& port, const char* what) {
  if (!port) violation(std::string(what) + " without a recorded entry port");
  return *port;
}

Port last_port(const DfsAlgorithm::Public& node, std::size_t degree) {
  if (degree == 0) return 0;
  if (node.is_root) return static_cast<Port>(degree - 1);
  return static_cast<Port>((node.parent + degree - 1) % degree);
}

}  // namespace

std::string_view to_string(AlgorithmTag tag) {
  for (const auto& [t, name] : kTags) {
    if (t == tag) return name;
  }
  return "unknown";
}

std::optional<AlgorithmTag> parse_algorithm(std::string_view text) {
  for (const auto& [t, name] : kTags) {
    if (name == text) return t;
  }
  return std::nullopt;
}

bool is_rooted(AlgorithmTag tag) { return tag != AlgorithmTag::arbitrary_graph; }
bool is_terminating(AlgorithmTag tag) { return tag != AlgorithmTag::arbitrary_graph; }

std::size_t memory_budget(AlgorithmTag tag, std::size_t max_degree, std::size_t n,
                          std::size_t settle_cap) {
  const std::size_t log_delta = ceil_log2(max_degree);
  switch (tag) {
    case AlgorithmTag::rooted_ring: return 1;
    case AlgorithmTag::rooted_tree: return 4 + log_delta;
    case AlgorithmTag::rooted_graph_logd: return 4 + std::max<std::size_t>(log_delta, ceil_log2(n));
    case AlgorithmTag::rooted_graph_delta: return 4 + max_degree;
    case AlgorithmTag::arbitrary_graph: return 4 + log_delta + ceil_log2(settle_cap);
  }
  return 0;
}

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::settled: return "settled";
    case MessageKind::backtrack_arrival: return "backtrack_arrival";
    case MessageKind::explorer_exit: return "explorer_exit";
    case MessageKind::sweep_done: return "sweep_done";
    case MessageKind::cycle_report: return "cycle_report";
  }
  return "unknown";
}

std::string_view to_string(Action::Kind kind) {
  switch (kind) {
    case Action::Kind::stay: return "stay";
    case Action::Kind::move: return "move";
    case Action::Kind::settle: return "settle";
    case Action::Kind::terminate_and_settle: return "terminate_and_settle";
  }
  return "unknown";
}

std::string_view to_string(DfsAlgorithm::Role role) {
  switch (role) {
    case Role::group: return "group";
    case Role::blocked: return "blocked";
    case Role::homing: return "homing";
    case Role::waiting: return "waiting";
    case Role::explorer: return "explorer";
    case Role::sweeper: return "sweeper";
  }
  return "unknown";
}

// ---------------------------------------------------------------- ring

Action RingAlgorithm::step(Payload& p, const View& view, Ballot ballot, RandomStream&) const {
  if (view.entry_port) p.entry = static_cast<std::uint8_t>(*view.entry_port);
  if (ballot == Ballot::won || ballot == Ballot::won_alone) return Action::terminate_and_settle();
  if (view.degree == 0) return Action::stay();
  if (view.degree != 2) {
    violation("ring robot at a node of degree " + std::to_string(view.degree));
  }
  const Port out = p.started ? static_cast<Port>((p.entry + 1) % 2) : 0;
  p.started = true;
  return Action::move(out);
}

void RingAlgorithm::encode(const Payload& p, bool, const EncodingWidths&, BitEncoder& out) const {
  out.flag("started", p.started);
  out.field("entry", 1, p.entry);
  dispersion::encode(p.election, out);
}

std::string_view RingAlgorithm::role(const Payload&, bool settled) const {
  return settled ? "settled" : "mover";
}

// ---------------------------------------------------------------- DFS

std::optional<Port> DfsAlgorithm::rotor(const Public& node, std::size_t degree,
                                        std::optional<Port> from, const std::vector<bool>* mask) {
  auto open = [&](Port q) { return mask == nullptr || (q < mask->size() && (*mask)[q]); };
  if (node.is_root) {
    for (std::size_t q = from ? *from + 1 : 0; q < degree; ++q) {
      if (open(static_cast<Port>(q))) return static_cast<Port>(q);
    }
    return std::nullopt;
  }
  if (degree == 0) violation("non-root node without ports");
  const Port start = from.value_or(node.parent);
  for (std::size_t i = 1; i <= degree; ++i) {
    const auto q = static_cast<Port>((start + i) % degree);
    if (q == node.parent || open(q)) return q;
  }
  return node.parent;
}

bool DfsAlgorithm::root_exhausted(const Payload& p, const View& view) const {
  const Public& s = *view.settled;
  if (!s.is_root || p.last_move == LastMove::forward) return false;
  const std::optional<Port> from = view.entry_port ? view.entry_port : p.entry;
  return !rotor(s, view.degree, from, nullptr).has_value();
}

bool DfsAlgorithm::wants_election(const Payload& p, const View& view) const {
  switch (p.role) {
    case Role::group:
      if (view.settled == nullptr) return true;
      return graph_staged() && root_exhausted(p, view);
    case Role::blocked:
    case Role::waiting:
      return view.settled == nullptr;
    default:
      return false;
  }
}

Action DfsAlgorithm::step(Payload& p, const View& view, Ballot ballot, RandomStream&) const {
  if (view.entry_port) p.entry = view.entry_port;
  switch (p.role) {
    case Role::waiting:
      if (view.settled != nullptr) return Action::stay();
      p.role = Role::group;
      p.last_move = LastMove::none;
      p.entry.reset();
      p.on_last_path = true;
      p.depth = 0;
      return group_at_free(p, view, ballot);
    case Role::blocked:
      if (view.settled != nullptr) return Action::stay();
      p.role = Role::group;
      return group_at_free(p, view, ballot);
    case Role::group:
      return view.settled == nullptr ? group_at_free(p, view, ballot)
                                     : group_at_settled(p, view, ballot);
    case Role::homing:
      return homing(p, view);
    case Role::explorer:
      return p.backtracking ? backtrack(p, view) : explore(p, view, false);
    case Role::sweeper:
      return explore(p, view, true);
  }
  violation("unknown role");
}

Action DfsAlgorithm::group_at_free(Payload& p, const View& view, Ballot ballot) const {
  if (p.last_move == LastMove::parent_return || p.last_move == LastMove::cycle_retreat) {
    violation("group returned to a node that has no settled robot");
  }
  if (ballot == Ballot::none) violation("group at a free node skipped the election");

  // Fields of this node as its settler will record them; losers derive the
  // same values to continue the DFS.
  Public node;
  node.is_root = !p.entry.has_value();
  node.parent = p.entry.value_or(0);
  node.depth = node.is_root ? 0 : p.depth + 1;
  node.on_last_path = node.is_root ? true : p.on_last_path;
  if (check_ == CycleCheck::forward_mask) {
    node.forward.assign(view.degree, true);
    if (!node.is_root) node.forward[node.parent] = false;
  }
  const bool leaf = view.degree == (node.is_root ? 0U : 1U);
  const bool final_leaf = tree_staged() && node.on_last_path && leaf;

  if (ballot == Ballot::won || ballot == Ballot::won_alone) {
    p.pub = std::move(node);
    if (ballot == Ballot::won_alone || final_leaf) {
      // Last settler of this iteration: becomes the explorer.
      if (p.pub.is_root) return Action::terminate_and_settle();
      p.role = Role::explorer;
      p.backtracking = true;
      p.last_move = LastMove::parent_return;
      Action a = Action::move(p.pub.parent);
      a.claims_node = true;
      return a;
    }
    return Action::settle();
  }

  if (final_leaf) {
    if (node.is_root) {
      p.role = Role::waiting;
      return Action::stay();
    }
    p.role = Role::homing;
    p.last_move = LastMove::parent_return;
    return Action::move(node.parent);
  }
  return advance(p, node, view.degree, node.is_root ? std::nullopt : p.entry);
}

Action DfsAlgorithm::advance(Payload& p, const Public& node, std::size_t degree,
                             std::optional<Port> from) const {
  const std::optional<Port> next = rotor(node, degree, from, nullptr);
  if (!next) {
    if (graph_staged()) {
      // Every node holds a robot; contest the sweeper role next round.
      p.last_move = LastMove::none;
      return Action::stay();
    }
    violation("group exhausted the root with robots left over");
  }
  if (!node.is_root && *next == node.parent) {
    p.last_move = LastMove::parent_return;
    return Action::move(*next);
  }
  p.last_move = LastMove::forward;
  p.depth = node.depth;
  p.on_last_path = node.on_last_path && *next == last_port(node, degree);
  return Action::move(*next);
}

Action DfsAlgorithm::group_at_settled(Payload& p, const View& view, Ballot ballot) const {
  const Public& s = *view.settled;
  if (p.last_move == LastMove::forward) {
    if (check_ == CycleCheck::none) {
      if (!staged_) violation("tree DFS reached a settled node through a forward move");
      p.role = Role::blocked;
      return Action::stay();
    }
    p.last_move = LastMove::cycle_retreat;
    return Action::move(require(p.entry, "cycle retreat"));
  }

  Action report;
  if (check_ == CycleCheck::forward_mask && p.last_move == LastMove::cycle_retreat) {
    report.broadcast({MessageKind::cycle_report, require(p.entry, "cycle report")});
  }

  Action a;
  if (ballot == Ballot::won || ballot == Ballot::won_alone) {
    p.role = Role::sweeper;
    a = explore_from(p, s, view.degree, std::nullopt, std::nullopt, true);
  } else if (ballot == Ballot::lost) {
    p.role = Role::waiting;
    a = Action::stay();
  } else {
    a = advance(p, s, view.degree, s.is_root ? p.entry : require(p.entry, "return"));
  }
  for (const Message& m : a.messages()) report.broadcast(m);
  a.broadcasts = report.broadcasts;
  a.broadcast_count = report.broadcast_count;
  return a;
}

Action DfsAlgorithm::homing(Payload& p, const View& view) const {
  if (view.settled == nullptr) violation("homing robot lost its path");
  if (view.settled->is_root) {
    p.role = Role::waiting;
    p.last_move = LastMove::none;
    return Action::stay();
  }
  p.last_move = LastMove::parent_return;
  return Action::move(view.settled->parent);
}

Action DfsAlgorithm::backtrack(Payload& p, const View& view) const {
  if (view.settled == nullptr) violation("explorer backtracked onto an empty node");
  const Public& s = *view.settled;
  const Port e = require(p.entry, "backtrack");
  Action a;
  if (!s.is_root) {
    a = Action::move(s.parent);
    p.last_move = LastMove::parent_return;
  } else {
    p.backtracking = false;
    a = explore_from(p, s, view.degree, std::nullopt, e, false);
  }
  Action out = a;
  out.broadcast_count = 0;
  out.broadcast({MessageKind::backtrack_arrival, e});
  for (const Message& m : a.messages()) out.broadcast(m);
  return out;
}

Action DfsAlgorithm::explore(Payload& p, const View& view, bool sweeper) const {
  if (view.settled == nullptr) {
    if (p.last_move != LastMove::forward) violation("explorer returned to an empty node");
    if (!sweeper && p.via_final) {
      // Home: the node this robot claimed at the end of phase one.
      p.via_final = false;
      return Action::terminate_and_settle();
    }
    if (check_ == CycleCheck::depth) {
      p.last_move = LastMove::cycle_retreat;
      return Action::move(require(p.entry, "retreat"));
    }
    violation("explorer reached a node without a settled robot");
  }

  const Public& s = *view.settled;
  if (p.last_move == LastMove::forward) {
    const Port e = require(p.entry, "forward arrival");
    if (check_ == CycleCheck::depth) {
      if (s.depth <= p.depth) {
        // Edge back to an ancestor.
        p.last_move = LastMove::cycle_retreat;
        return Action::move(e);
      }
      if (s.depth != p.depth + 1) {
        violation("depth inconsistency: " + std::to_string(s.depth) + " after " +
                  std::to_string(p.depth));
      }
    }
    if (s.is_root || s.parent != e) violation("explorer crossed a non-tree edge");
  }
  const std::optional<Port> from =
      p.last_move == LastMove::none ? std::nullopt : std::optional<Port>(p.entry);
  return explore_from(p, s, view.degree, from, s.pointer_to_final, sweeper);
}

Action DfsAlgorithm::explore_from(Payload& p, const Public& node, std::size_t degree,
                                  std::optional<Port> from, std::optional<Port> pointer_to_final,
                                  bool sweeper) const {
  const std::vector<bool>* mask = check_ == CycleCheck::forward_mask ? &node.forward : nullptr;
  const std::optional<Port> next = rotor(node, degree, from, mask);
  if (!next) {
    if (sweeper && node.is_root) {
      p.role = Role::waiting;
      p.last_move = LastMove::none;
      p.entry.reset();
      return Action::stay().broadcast({MessageKind::sweep_done, 0});
    }
    violation("explorer exhausted the root before reaching its home");
  }
  const Port q = *next;
  p.via_final = !sweeper && pointer_to_final && q == *pointer_to_final;
  p.last_move = (!node.is_root && q == node.parent) ? LastMove::parent_return : LastMove::forward;
  p.depth = node.depth;
  return Action::move(q).broadcast({MessageKind::explorer_exit, q});
}

bool DfsAlgorithm::react(Payload& p, std::span<const Message> messages) const {
  bool terminate = false;
  for (const Message& m : messages) {
    switch (m.kind) {
      case MessageKind::backtrack_arrival:
        p.pub.pointer_to_final = m.port;
        break;
      case MessageKind::explorer_exit:
        if (p.pub.pointer_to_final ? m.port == *p.pub.pointer_to_final
                                   : !p.pub.is_root && m.port == p.pub.parent) {
          terminate = true;
        }
        break;
      case MessageKind::sweep_done:
        if (p.pub.is_root) terminate = true;
        break;
      case MessageKind::cycle_report:
        if (check_ == CycleCheck::forward_mask && m.port < p.pub.forward.size()) {
          p.pub.forward[m.port] = false;
        }
        break;
      case MessageKind::settled:
        break;
    }
  }
  return terminate;
}

void DfsAlgorithm::encode(const Payload& p, bool settled, const EncodingWidths& w,
                          BitEncoder& out) const {
  out.flag("settled", settled);
  out.field("role", 3, static_cast<std::uint64_t>(p.role));
  out.field("last_move", 2, static_cast<std::uint64_t>(p.last_move));
  out.flag("backtracking", p.backtracking);
  out.flag("via_final", p.via_final);
  dispersion::encode(p.election, out);
  if (settled) {
    out.flag("is_root", p.pub.is_root);
    out.field("parent_pointer", w.port, p.pub.parent);
    out.flag("has_pointer_to_final", p.pub.pointer_to_final.has_value());
    out.field("pointer_to_final", w.port, p.pub.pointer_to_final.value_or(0));
    if (tree_staged()) out.flag("on_last_path", p.pub.on_last_path);
    if (check_ == CycleCheck::depth) out.field("dist", w.distance, p.pub.depth);
    if (check_ == CycleCheck::forward_mask) out.mask("forward_ports", p.pub.forward, w.mask);
  } else {
    out.flag("has_entry", p.entry.has_value());
    out.field("entry_port", w.port, p.entry.value_or(0));
    if (tree_staged()) out.flag("on_last_path", p.on_last_path);
    if (check_ == CycleCheck::depth) out.field("dist", w.distance, p.depth);
  }
}

std::string_view DfsAlgorithm::role(const Payload& p, bool settled) const {
  return settled ? "settled" : to_string(p.role);
}

// ---------------------------------------------------------------- walk

bool WalkAlgorithm::wants_election(const Payload&, const View& view) const {
  return view.settled == nullptr || view.settled->count < cap_;
}

Action WalkAlgorithm::step(Payload& p, const View& view, Ballot ballot, RandomStream& rng) const {
  if (ballot == Ballot::won || ballot == Ballot::won_alone) {
    p.pub.count = (view.settled != nullptr ? view.settled->count : 0) + 1;
    return Action::settle().broadcast({MessageKind::settled, 0});
  }
  if (view.restricted) {
    if (view.visible_ports.empty()) return Action::stay();
    p.choice = view.visible_ports[rng.below(view.visible_ports.size())];
  } else {
    if (view.degree == 0) return Action::stay();
    p.choice = static_cast<Port>(rng.below(view.degree));
  }
  return Action::move(p.choice);
}

bool WalkAlgorithm::react(Payload& p, std::span<const Message> messages) const {
  for (const Message& m : messages) {
    if (m.kind == MessageKind::settled) ++p.pub.count;
  }
  return false;
}

void WalkAlgorithm::encode(const Payload& p, bool settled, const EncodingWidths& w,
                           BitEncoder& out) const {
  out.flag("settled", settled);
  dispersion::encode(p.election, out);
  out.field("port_choice", w.port, p.choice);
  if (cap_ > 1) out.field("settle_counter", w.counter, settled ? p.pub.count - 1 : 0);
}

std::string_view WalkAlgorithm::role(const Payload&, bool settled) const {
  return settled ? "settled" : "walker";
}

}  // namespace dispersion
