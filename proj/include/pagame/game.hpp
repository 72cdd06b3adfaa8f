#pragma once

#include "pagame/agent.hpp"
#include "pagame/channel.hpp"
#include "pagame/regret.hpp"
#include "pagame/reward_model.hpp"
#include "pagame/rng.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace pagame {

/// One row of the append-only transcript.
struct RoundRecord {
  std::size_t round = 0;  // 1-based
  int phase = 0;
  Block block = Block::other;
  ArmIndex arm = 0;
  bool explored = false;
  double incentive_total = 0.0;
  double principal_reward = 0.0;
  double agent_reward = 0.0;
  double regret_per_round = 0.0;
  double regret_oracle = 0.0;
  double regret_bar = 0.0;
  double cum_per_round = 0.0;
  double cum_oracle = 0.0;
  double cum_bar = 0.0;

  // Instrumentation (not part of the CSV).
  std::optional<ArmIndex> target;
  double target_incentive = 0.0;
  double target_optimal_incentive = 0.0;
};

using Transcript = std::vector<RoundRecord>;

inline constexpr const char* kTranscriptCsvHeader =
    "round,phase,block,arm,explored,incentive_total,principal_reward,agent_reward,"
    "regret_perround,regret_oracle,regret_bar,cum_perround,cum_oracle,cum_bar";

void write_transcript_csv(std::ostream& out, const Transcript& transcript);

/// Wires a principal to an agent and a reward model. Implements the
/// principal's channel and records every round with its regret under all
/// three notions. The agent state is reachable for instrumentation only.
class Game final : public InteractionChannel {
 public:
  Game(ArmSet arms, RewardModel model, AgentState agent, AgentBehavior behavior,
       std::size_t horizon, const StreamSeeder& seeder);

  Observation propose(const Incentive& incentive) override;

  std::size_t num_arms() const override { return arms_.size(); }
  std::size_t horizon() const override { return horizon_; }
  std::size_t rounds_used() const override { return transcript_.size(); }
  std::size_t plays(ArmIndex arm) const override { return counts_[arm]; }
  double principal_mean(ArmIndex arm) const override;
  void annotate(const RoundTag& tag) override { tag_ = tag; }

  const Transcript& transcript() const { return transcript_; }
  const AgentState& agent_state() const { return agent_; }
  const AgentBehavior& behavior() const { return behavior_; }
  const ArmSet& arms() const { return arms_; }
  const RewardModel& model() const { return model_; }
  const Vec& true_principal_means() const { return theta_; }
  const Vec& true_agent_means() const { return mu_; }

 private:
  ArmSet arms_;
  RewardModel model_;
  AgentState agent_;
  AgentBehavior behavior_;
  std::size_t horizon_;
  RewardStreams reward_rng_;
  Engine explore_rng_;

  Vec theta_;
  Vec mu_;
  std::vector<std::size_t> counts_;
  std::vector<double> principal_sums_;
  RoundTag tag_;
  Transcript transcript_;
};

/// Everything needed to build a Game.
struct GameSetup {
  ArmSet arms;
  RewardModel model;
  AgentBehavior behavior;
  AgentState initial_state;
  std::size_t horizon = 0;
  StreamSeeder seeder{0};
};

Game make_game(const GameSetup& setup);

}  // namespace pagame
