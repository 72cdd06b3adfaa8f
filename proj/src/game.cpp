#include "pagame/game.hpp"

#include <cstdio>
#include <ostream>

namespace pagame {

std::string_view to_string(Block block) {
  switch (block) {
    case Block::stabilize: return "stabilize";
    case Block::search: return "search";
    case Block::explore: return "explore";
    case Block::eliminate: return "eliminate";
    case Block::msp: return "msp";
    case Block::other: return "other";
  }
  return "other";
}

Game::Game(ArmSet arms, RewardModel model, AgentState agent, AgentBehavior behavior,
           std::size_t horizon, const StreamSeeder& seeder)
    : arms_(std::move(arms)),
      model_(std::move(model)),
      agent_(std::move(agent)),
      behavior_(behavior),
      horizon_(horizon),
      reward_rng_{seeder.stream(streams::agent_noise), seeder.stream(streams::principal_noise)},
      explore_rng_(seeder.stream(streams::agent_explore)) {
  model_.validate(arms_);
  if (agent_.num_arms() != arms_.size()) throw ConfigError("agent state does not match the arm set");
  theta_ = model_.principal_means(arms_);
  mu_ = model_.agent_means(arms_);
  counts_.assign(arms_.size(), 0);
  principal_sums_.assign(arms_.size(), 0.0);
  transcript_.reserve(horizon_);
}

double Game::principal_mean(ArmIndex arm) const {
  return counts_[arm] == 0 ? 0.0 : principal_sums_[arm] / static_cast<double>(counts_[arm]);
}

Observation Game::propose(const Incentive& incentive) {
  if (transcript_.size() >= horizon_) throw HorizonReached();
  if (incentive.size() != static_cast<Eigen::Index>(arms_.size()) || (incentive.array() < 0.0).any())
    throw ConfigError("incentive must be a nonnegative K-vector");

  const std::size_t t = transcript_.size() + 1;
  const Vec& mu_hat = agent_.empirical_means();

  RoundRecord row;
  row.round = t;
  row.phase = tag_.phase;
  row.block = tag_.block;
  row.target = tag_.target;
  if (tag_.target) {
    row.target_incentive = incentive[static_cast<Eigen::Index>(*tag_.target)];
    row.target_optimal_incentive = optimal_incentive(agent_, *tag_.target);
  }

  const Selection pick = agent_select(agent_, behavior_, incentive, t, explore_rng_);
  row.arm = pick.arm;
  row.explored = pick.explored;
  row.incentive_total = incentive.sum();

  row.regret_per_round = compute_instant_regret(mu_hat, theta_, mu_, incentive, pick.arm, RegretMode::per_round);
  row.regret_oracle = compute_instant_regret(mu_hat, theta_, mu_, incentive, pick.arm, RegretMode::oracle);
  row.regret_bar = compute_instant_regret(mu_hat, theta_, mu_, incentive, pick.arm, RegretMode::bar);
  if (!transcript_.empty()) {
    const RoundRecord& prev = transcript_.back();
    row.cum_per_round = prev.cum_per_round;
    row.cum_oracle = prev.cum_oracle;
    row.cum_bar = prev.cum_bar;
  }
  row.cum_per_round += row.regret_per_round;
  row.cum_oracle += row.regret_oracle;
  row.cum_bar += row.regret_bar;

  const RewardDraw draw = sample_rewards(model_, arms_, pick.arm, reward_rng_);
  row.principal_reward = draw.principal;
  row.agent_reward = draw.agent;

  agent_.update(pick.arm, draw.agent);
  ++counts_[pick.arm];
  principal_sums_[pick.arm] += draw.principal;

  transcript_.push_back(row);
  return {pick.arm, draw.principal};
}

Game make_game(const GameSetup& setup) {
  return Game(setup.arms, setup.model, setup.initial_state, setup.behavior, setup.horizon, setup.seeder);
}

void write_transcript_csv(std::ostream& out, const Transcript& transcript) {
  out << kTranscriptCsvHeader << '\n';
  char buf[512];
  for (const RoundRecord& r : transcript) {
    std::snprintf(buf, sizeof buf,
                  "%zu,%d,%s,%zu,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.round, r.phase, std::string(to_string(r.block)).c_str(), r.arm,
                  r.explored ? 1 : 0, r.incentive_total, r.principal_reward, r.agent_reward,
                  r.regret_per_round, r.regret_oracle, r.regret_bar, r.cum_per_round,
                  r.cum_oracle, r.cum_bar);
    out << buf;
  }
}

}  // namespace pagame
