#pragma once

#include "pagame/agent.hpp"
#include "pagame/channel.hpp"
#include "pagame/game.hpp"

#include <functional>
#include <vector>

namespace pagame::testing {

/// Channel whose answers come from a callback; play counts are fixed
/// unless `count_plays` is set.
class ScriptedChannel : public InteractionChannel {
 public:
  using Answer = std::function<ArmIndex(const Incentive&, std::size_t round)>;

  ScriptedChannel(std::size_t num_arms, std::size_t horizon, Answer answer, std::size_t base_plays = 0,
                  bool count_plays = false)
      : answer_(std::move(answer)), horizon_(horizon), counts_(num_arms, base_plays), count_plays_(count_plays) {}

  Observation propose(const Incentive& incentive) override {
    if (rounds_ >= horizon_) throw HorizonReached();
    const ArmIndex arm = answer_(incentive, rounds_);
    ++rounds_;
    if (count_plays_) ++counts_[arm];
    offers.push_back(incentive);
    return {arm, 0.0};
  }
  std::size_t num_arms() const override { return counts_.size(); }
  std::size_t horizon() const override { return horizon_; }
  std::size_t rounds_used() const override { return rounds_; }
  std::size_t plays(ArmIndex arm) const override { return counts_[arm]; }
  double principal_mean(ArmIndex arm) const override {
    return theta_hat.size() ? theta_hat[static_cast<Eigen::Index>(arm)] : 0.0;
  }

  std::vector<Incentive> offers;
  Vec theta_hat;  // what principal_mean reports; zeros when empty

 private:
  Answer answer_;
  std::size_t horizon_;
  std::size_t rounds_ = 0;
  std::vector<std::size_t> counts_;
  bool count_plays_;
};

/// Greedy response to fixed means, lowest index on ties.
inline ScriptedChannel::Answer fixed_greedy(Vec means) {
  return [means = std::move(means)](const Incentive& pi, std::size_t) {
    return greedy_arm(means, pi, TieRule::lowest_index);
  };
}

/// Point-mass iid game against a given agent kind.
inline GameSetup point_mass_setup(const std::vector<double>& theta, const std::vector<double>& mu,
                                  std::size_t horizon, AgentKind kind = AgentKind::greedy_learner,
                                  double c0 = 0.0, std::uint64_t seed = 0) {
  std::vector<RewardDistribution> p, a;
  for (double v : theta) p.push_back(RewardDistribution::point(v));
  for (double v : mu) a.push_back(RewardDistribution::point(v));
  GameSetup s;
  s.arms = ArmSet::iid(theta.size());
  s.model = RewardModel::iid(p, a);
  s.behavior.kind = kind;
  s.behavior.c0 = c0;
  Vec mu_vec = Eigen::Map<const Vec>(mu.data(), static_cast<Eigen::Index>(mu.size()));
  s.initial_state = (kind == AgentKind::oracle || kind == AgentKind::exploratory_oracle)
                        ? AgentState::pinned(mu_vec)
                        : AgentState::iid(theta.size());
  s.horizon = horizon;
  s.seeder = StreamSeeder(seed);
  return s;
}

}  // namespace pagame::testing
