#pragma once

#include "pagame/agent.hpp"
#include "pagame/reward_model.hpp"
#include "pagame/types.hpp"

namespace pagame {

enum class RegretMode { per_round, oracle, bar };

/// Instantaneous regret of one round.
///
///  per_round: max_a {theta_a - pi*_a(t)} - (theta_{A_t} - pi_{A_t}(t)), with
///             pi* computed from the agent's current empirical means;
///  oracle:    the same with mu_hat replaced by the true mu;
///  bar:       max_b {theta_b + mu_b} - max_z mu_z - (theta_{A_t} - sum_a pi_a(t)).
double compute_instant_regret(const Vec& empirical_means, const Vec& theta, const Vec& mu,
                              const Incentive& incentive, ArmIndex played, RegretMode mode);

double compute_instant_regret(const AgentState& state, const RewardModel& model,
                              const ArmSet& arms, const Incentive& incentive, ArmIndex played,
                              RegretMode mode);

/// a*_t = argmax_a {theta_a + mu_hat_a(t)} (lowest index on ties).
ArmIndex per_round_benchmark_arm(const Vec& empirical_means, const Vec& theta);

}  // namespace pagame
