#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "dispersion/port_graph.hpp"

namespace dispersion {

/// Raised when robot logic reaches a state its algorithm rules out (wrong
/// graph class, broken DFS bookkeeping). Never raised on a correct run.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Everything a robot may observe in one round. There is deliberately no
/// node id, robot id, or global graph parameter here.
template <class Public>
struct LocalView {
  std::size_t degree = 0;
  /// Port the robot came in through, if it arrived at the end of the
  /// previous round.
  std::optional<Port> entry_port;
  /// Public fields of the active settled robot at this node, if any.
  const Public* settled = nullptr;
  /// When restricted, only these ports can be chosen.
  bool restricted = false;
  std::span<const Port> visible_ports;
};

enum class MessageKind : std::uint8_t {
  settled,            // a robot settled here this round
  backtrack_arrival,  // explorer came back up through `port`
  explorer_exit,      // explorer leaves through `port`
  sweep_done,         // sweeper finished at the root
  cycle_report,       // `port` leads to an already settled node
};

std::string_view to_string(MessageKind kind);

struct Message {
  MessageKind kind = MessageKind::settled;
  Port port = 0;

  bool operator==(const Message&) const = default;
};

/// How the robot fared in this round's election at its node.
enum class Ballot : std::uint8_t { none, won, won_alone, lost };

struct Action {
  enum class Kind : std::uint8_t { stay, move, settle, terminate_and_settle };

  Kind kind = Kind::stay;
  Port port = 0;
  /// Logs a settle event for this node while the robot stays mobile (the
  /// explorer marks its home this way).
  bool claims_node = false;
  std::array<Message, 2> broadcasts{};
  std::uint8_t broadcast_count = 0;

  static Action stay() { return {}; }
  static Action move(Port p) {
    Action a;
    a.kind = Kind::move;
    a.port = p;
    return a;
  }
  static Action settle() {
    Action a;
    a.kind = Kind::settle;
    return a;
  }
  static Action terminate_and_settle() {
    Action a;
    a.kind = Kind::terminate_and_settle;
    return a;
  }

  Action& broadcast(Message m) {
    if (broadcast_count == broadcasts.size()) throw std::logic_error("too many broadcasts");
    broadcasts[broadcast_count++] = m;
    return *this;
  }
  std::span<const Message> messages() const { return {broadcasts.data(), broadcast_count}; }
};

std::string_view to_string(Action::Kind kind);

}  // namespace dispersion
