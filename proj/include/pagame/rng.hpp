#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pagame {

using Engine = std::mt19937_64;

/// Named-stream generator factory. Each stream is seeded from
/// (master seed, run id, stream name) so that adding draws to one
/// component never shifts another component's sequence.
class StreamSeeder {
 public:
  StreamSeeder(std::uint64_t master_seed, std::uint64_t run_id = 0)
      : master_(master_seed), run_(run_id) {}

  std::uint64_t seed_for(std::string_view stream) const;
  Engine stream(std::string_view stream) const { return Engine(seed_for(stream)); }

  std::uint64_t master() const { return master_; }
  std::uint64_t run() const { return run_; }

 private:
  std::uint64_t master_;
  std::uint64_t run_;
};

namespace streams {
inline constexpr std::string_view agent_noise = "agent-noise";
inline constexpr std::string_view principal_noise = "principal-noise";
inline constexpr std::string_view agent_explore = "agent-explore";
inline constexpr std::string_view mc_geometry = "mc-geometry";
}  // namespace streams

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace pagame
