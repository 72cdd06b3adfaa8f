#include "pagame/regret.hpp"

namespace pagame {

double compute_instant_regret(const Vec& empirical_means, const Vec& theta, const Vec& mu,
                              const Incentive& incentive, ArmIndex played, RegretMode mode) {
  const auto a = static_cast<Eigen::Index>(played);
  switch (mode) {
    case RegretMode::per_round: {
      const double benchmark = (theta + empirical_means).maxCoeff() - empirical_means.maxCoeff();
      return benchmark - (theta[a] - incentive[a]);
    }
    case RegretMode::oracle: {
      const double benchmark = (theta + mu).maxCoeff() - mu.maxCoeff();
      return benchmark - (theta[a] - incentive[a]);
    }
    case RegretMode::bar: {
      const double benchmark = (theta + mu).maxCoeff() - mu.maxCoeff();
      return benchmark - (theta[a] - incentive.sum());
    }
  }
  return 0.0;
}

double compute_instant_regret(const AgentState& state, const RewardModel& model,
                              const ArmSet& arms, const Incentive& incentive, ArmIndex played,
                              RegretMode mode) {
  return compute_instant_regret(state.empirical_means(), model.principal_means(arms),
                                model.agent_means(arms), incentive, played, mode);
}

ArmIndex per_round_benchmark_arm(const Vec& empirical_means, const Vec& theta) {
  Eigen::Index best = 0;
  (theta + empirical_means).maxCoeff(&best);
  return static_cast<ArmIndex>(best);
}

}  // namespace pagame
