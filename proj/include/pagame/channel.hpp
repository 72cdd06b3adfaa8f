#pragma once

#include "pagame/types.hpp"

#include <optional>
#include <stdexcept>
#include <string_view>

namespace pagame {

/// What a round was spent on, as reported by the principal.
enum class Block { stabilize, search, explore, eliminate, msp, other };

std::string_view to_string(Block block);

struct RoundTag {
  int phase = 0;
  Block block = Block::other;
  /// Arm the one-hot incentive is meant to pull, when there is one.
  std::optional<ArmIndex> target;
};

/// What the principal sees after proposing: the chosen arm and its own reward.
struct Observation {
  ArmIndex arm = 0;
  double principal_reward = 0.0;
};

/// Thrown by propose() once the horizon has been consumed.
class HorizonReached : public std::runtime_error {
 public:
  HorizonReached() : std::runtime_error("horizon reached") {}
};

/// The principal's only view of the game: propose an incentive, observe the
/// played arm. Also exposes the public play counts N_i(t) and principal
/// empirical means theta_hat_i(t) that the principal tracks on every play.
class InteractionChannel {
 public:
  virtual ~InteractionChannel() = default;

  /// Advances the global round by exactly one.
  virtual Observation propose(const Incentive& incentive) = 0;

  virtual std::size_t num_arms() const = 0;
  virtual std::size_t horizon() const = 0;
  virtual std::size_t rounds_used() const = 0;
  virtual std::size_t plays(ArmIndex arm) const = 0;
  virtual double principal_mean(ArmIndex arm) const = 0;

  /// Labels the following rounds in the transcript. Default: ignored.
  virtual void annotate(const RoundTag& /*tag*/) {}

  std::size_t rounds_left() const { return horizon() - rounds_used(); }

  std::size_t min_plays() const {
    std::size_t lo = plays(0);
    for (ArmIndex i = 1; i < num_arms(); ++i) lo = std::min(lo, plays(i));
    return lo;
  }

  Vec principal_means() const {
    Vec out(static_cast<Eigen::Index>(num_arms()));
    for (ArmIndex i = 0; i < num_arms(); ++i) out[static_cast<Eigen::Index>(i)] = principal_mean(i);
    return out;
  }
};

}  // namespace pagame
