#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dispersion/bits.hpp"
#include "dispersion/leader_election.hpp"
#include "dispersion/rng.hpp"
#include "dispersion/robot_model.hpp"

namespace dispersion {

enum class AlgorithmTag {
  rooted_ring,
  rooted_tree,
  rooted_graph_logd,
  rooted_graph_delta,
  arbitrary_graph,
};

std::string_view to_string(AlgorithmTag tag);
std::optional<AlgorithmTag> parse_algorithm(std::string_view text);
bool is_rooted(AlgorithmTag tag);
bool is_terminating(AlgorithmTag tag);

/// Memory budget in bits before the audit constant is applied.
std::size_t memory_budget(AlgorithmTag tag, std::size_t max_degree, std::size_t n,
                          std::size_t settle_cap = 1);

// Every algorithm below exposes the same shape, consumed by the runtime:
//
//   Payload initial() const;
//   const Public& public_fields(const Payload&) const;
//   bool wants_election(const Payload&, const LocalView<Public>&) const;
//   Action step(Payload&, const LocalView<Public>&, Ballot, RandomStream&) const;
//   bool react(Payload&, std::span<const Message>) const;   // settled robots
//   void encode(const Payload&, bool settled, const EncodingWidths&, BitEncoder&) const;
//   std::string_view role(const Payload&, bool settled) const;
//
// `step` runs for every unsettled robot each round, after the node's
// election. `react` lets the active settled robot read this round's
// broadcasts and returns true when it terminates.

/// Node-by-node settling on a ring.
class RingAlgorithm {
 public:
  struct Public {};
  struct Payload {
    bool started = false;
    std::uint8_t entry = 0;  // 0 or 1
    ElectionScratch election;
  };
  using View = LocalView<Public>;
  static constexpr bool needs_presence = false;

  Payload initial() const { return {}; }
  const Public& public_fields(const Payload&) const { return public_; }
  bool wants_election(const Payload&, const View&) const { return true; }
  Action step(Payload& p, const View& view, Ballot ballot, RandomStream& rng) const;
  bool react(Payload&, std::span<const Message>) const { return false; }
  void encode(const Payload& p, bool settled, const EncodingWidths& w, BitEncoder& out) const;
  std::string_view role(const Payload& p, bool settled) const;

 private:
  Public public_;
};

/// How a DFS-based algorithm tells tree edges from cycle edges.
enum class CycleCheck {
  none,          // trees
  depth,         // distance-from-root counters
  forward_mask,  // per-node forward-port bit strings
};

/// Group DFS dispersion from a root with a phase-two explorer that triggers
/// termination. One class covers the tree and both general-graph variants,
/// with or without staging for more robots than nodes.
class DfsAlgorithm {
 public:
  enum class Role : std::uint8_t { group, blocked, homing, waiting, explorer, sweeper };
  enum class LastMove : std::uint8_t { none, forward, parent_return, cycle_retreat };

  struct Public {
    bool is_root = false;
    Port parent = 0;
    std::optional<Port> pointer_to_final;
    bool on_last_path = false;
    std::uint32_t depth = 0;
    std::vector<bool> forward;
  };

  struct Payload {
    Role role = Role::group;
    LastMove last_move = LastMove::none;
    bool backtracking = false;
    bool via_final = false;
    std::optional<Port> entry;
    bool on_last_path = true;
    std::uint32_t depth = 0;  // depth of the node most recently left
    Public pub;               // meaningful once settled
    ElectionScratch election;
  };
  using View = LocalView<Public>;
  static constexpr bool needs_presence = true;

  DfsAlgorithm(CycleCheck check, bool staged) : check_(check), staged_(staged) {}

  CycleCheck cycle_check() const noexcept { return check_; }
  bool staged() const noexcept { return staged_; }

  Payload initial() const { return {}; }
  const Public& public_fields(const Payload& p) const { return p.pub; }
  bool wants_election(const Payload& p, const View& view) const;
  Action step(Payload& p, const View& view, Ballot ballot, RandomStream& rng) const;
  bool react(Payload& p, std::span<const Message> messages) const;
  void encode(const Payload& p, bool settled, const EncodingWidths& w, BitEncoder& out) const;
  std::string_view role(const Payload& p, bool settled) const;

  /// Next port of the DFS rotor at a settled node, starting after `from`
  /// (or from the beginning when `from` is empty). Non-root nodes wrap
  /// around to their parent port; an exhausted root yields nothing. When
  /// `mask` is given only ports marked forward (and the parent) qualify.
  static std::optional<Port> rotor(const Public& node, std::size_t degree,
                                   std::optional<Port> from, const std::vector<bool>* mask);

 private:
  bool tree_staged() const noexcept { return staged_ && check_ == CycleCheck::none; }
  bool graph_staged() const noexcept { return staged_ && check_ != CycleCheck::none; }

  Action group_at_free(Payload& p, const View& view, Ballot ballot) const;
  Action group_at_settled(Payload& p, const View& view, Ballot ballot) const;
  Action advance(Payload& p, const Public& node, std::size_t degree, std::optional<Port> from) const;
  Action homing(Payload& p, const View& view) const;
  Action backtrack(Payload& p, const View& view) const;
  Action explore(Payload& p, const View& view, bool sweeper) const;
  Action explore_from(Payload& p, const Public& node, std::size_t degree, std::optional<Port> from,
                      std::optional<Port> pointer_to_final, bool sweeper) const;
  bool root_exhausted(const Payload& p, const View& view) const;

  CycleCheck check_;
  bool staged_;
};

/// Random-walk dispersion from any placement. Settled robots stay active
/// forever; with `settle_cap` > 1 a node accepts that many settlers.
class WalkAlgorithm {
 public:
  struct Public {
    std::uint32_t count = 0;  // robots settled at this node
  };
  struct Payload {
    Port choice = 0;
    Public pub;
    ElectionScratch election;
  };
  using View = LocalView<Public>;
  static constexpr bool needs_presence = false;

  explicit WalkAlgorithm(std::size_t settle_cap = 1) : cap_(settle_cap) {}

  std::size_t settle_cap() const noexcept { return cap_; }

  Payload initial() const { return {}; }
  const Public& public_fields(const Payload& p) const { return p.pub; }
  bool wants_election(const Payload& p, const View& view) const;
  Action step(Payload& p, const View& view, Ballot ballot, RandomStream& rng) const;
  bool react(Payload& p, std::span<const Message> messages) const;
  void encode(const Payload& p, bool settled, const EncodingWidths& w, BitEncoder& out) const;
  std::string_view role(const Payload& p, bool settled) const;

 private:
  std::size_t cap_;
};

std::string_view to_string(DfsAlgorithm::Role role);

}  // namespace dispersion
