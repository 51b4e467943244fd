#include "dispersion/leader_election.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace dispersion {

std::string_view to_string(Heard heard) {
  switch (heard) {
    case Heard::zero: return "zero";
    case Heard::one: return "one";
    case Heard::many: return "many";
  }
  return "unknown";
}

std::size_t default_subround_cap(std::size_t robots) {
  return 64 * std::max<std::size_t>(1, ceil_log2(robots + 2));
}

Heard SubroundChannel::exchange(std::size_t broadcasters) {
  if (++used_ > cap_) {
    throw SubroundCapExceeded("sub-round cap of " + std::to_string(cap_) +
                              " exceeded in a single round");
  }
  if (broadcasters == 0) return Heard::zero;
  return broadcasters == 1 ? Heard::one : Heard::many;
}

ElectionResult local_leader_election(std::span<ElectionScratch> participants,
                                     std::span<RandomStream> rng, SubroundChannel& channel) {
  if (participants.empty()) throw std::invalid_argument("election needs at least one participant");
  if (rng.size() != participants.size()) {
    throw std::invalid_argument("election needs one random stream per participant");
  }

  for (auto& s : participants) s = ElectionScratch{true, false, Heard::zero};

  std::vector<std::size_t> alive(participants.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
  std::vector<std::size_t> heads;
  heads.reserve(alive.size());

  const std::size_t start = channel.used();
  for (;;) {
    heads.clear();
    for (std::size_t i : alive) {
      if (rng[i].coin()) heads.push_back(i);
    }
    const Heard heard = channel.exchange(heads.size());
    if (heard == Heard::zero) continue;
    if (heard == Heard::one) break;
    // Tails heard a broadcast and drop out.
    for (std::size_t i : alive) participants[i].candidate = false;
    alive.swap(heads);
    for (std::size_t i : alive) participants[i].candidate = true;
  }

  const std::size_t leader = heads.front();
  for (auto& s : participants) {
    s.candidate = false;
    s.heard = Heard::one;
  }
  participants[leader].candidate = true;
  participants[leader].leader = true;
  return ElectionResult{leader, channel.used() - start};
}

}  // namespace dispersion
