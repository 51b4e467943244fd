#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>

#include "dispersion/bits.hpp"
#include "dispersion/rng.hpp"

namespace dispersion {

/// What a listener learns from one sub-round.
enum class Heard : std::uint8_t { zero = 0, one = 1, many = 2 };

std::string_view to_string(Heard heard);

/// Per-robot election state: exactly four bits.
struct ElectionScratch {
  bool candidate = false;
  bool leader = false;
  Heard heard = Heard::zero;

  bool operator==(const ElectionScratch&) const = default;
};

inline void encode(const ElectionScratch& s, BitEncoder& out) {
  out.flag("candidate", s.candidate);
  out.flag("leader", s.leader);
  out.field("heard", 2, static_cast<std::uint64_t>(s.heard));
}

class SubroundCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 64 * ceil(log2(k + 2)).
std::size_t default_subround_cap(std::size_t robots);

/// Broadcast medium shared by the robots at one node during one round.
/// Every participant observes only whether zero, one, or several robots
/// broadcast.
class SubroundChannel {
 public:
  explicit SubroundChannel(std::size_t cap) : cap_(cap) {}

  /// Runs one sub-round. Throws SubroundCapExceeded past the cap.
  Heard exchange(std::size_t broadcasters);

  std::size_t used() const noexcept { return used_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
  std::size_t used_ = 0;
};

struct ElectionResult {
  std::size_t leader = 0;  // index into the participant span
  std::size_t sub_rounds = 0;
};

/// Coin-flipping election among co-located robots. Heads broadcast; tails
/// drop out when somebody broadcast; a silent sub-round changes nothing; the
/// election ends when exactly one robot broadcasts. `rng[i]` is participant
/// i's private stream. On return every participant's scratch reflects the
/// outcome.
ElectionResult local_leader_election(std::span<ElectionScratch> participants,
                                     std::span<RandomStream> rng, SubroundChannel& channel);

}  // namespace dispersion
