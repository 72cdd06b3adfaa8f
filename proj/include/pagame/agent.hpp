#pragma once

#include "pagame/reward_model.hpp"
#include "pagame/rng.hpp"
#include "pagame/types.hpp"

namespace pagame {

enum class AgentKind { greedy_learner, exploratory_learner, oracle, exploratory_oracle };
enum class ExplorePolicy { uniform, fixed_arm, adversarial_lowest_joint_mean };
enum class TieRule { lowest_index, highest_index };

struct AgentBehavior {
  AgentKind kind = AgentKind::greedy_learner;
  double c0 = 0.0;
  ExplorePolicy policy = ExplorePolicy::uniform;
  /// Exploration target for fixed-arm; filled in by resolve_exploration_arm
  /// for the adversarial policy.
  ArmIndex fixed_arm = 0;
  TieRule tie_rule = TieRule::lowest_index;

  bool explores() const {
    return kind == AgentKind::exploratory_learner || kind == AgentKind::exploratory_oracle;
  }
  bool is_oracle() const { return kind == AgentKind::oracle || kind == AgentKind::exploratory_oracle; }
};

/// Smallest integer tau >= 2 with c0 * sqrt(log(2 tau)) < sqrt(tau).
std::size_t exploration_start(double c0);

/// p_t = c0 sqrt(log(2t)/t) for t >= tau, zero before tau, clipped to [0,1].
double exploration_probability(double c0, std::size_t t);

/// Points the adversarial policy at argmin_a (theta_a + mu_a).
void resolve_exploration_arm(AgentBehavior& behavior, const RewardModel& model, const ArmSet& arms);

/// The agent's private estimates. Three flavours share one surface:
/// iid empirical means, linear OLS through the pseudo-inverse, and the
/// pinned oracle whose means never move.
class AgentState {
 public:
  enum class Kind { iid, linear, pinned };

  static AgentState iid(std::size_t num_arms);
  static AgentState iid(Vec initial_means);
  static AgentState linear(const ArmSet& arms);
  static AgentState linear(const ArmSet& arms, Vec initial_estimate);
  static AgentState pinned(Vec means);

  Kind kind() const { return kind_; }
  std::size_t num_arms() const { return static_cast<std::size_t>(means_.size()); }

  /// mu_hat_a(t) for every arm (<s_hat_t, a> in the linear case).
  const Vec& empirical_means() const { return means_; }
  double empirical_mean(ArmIndex arm) const { return means_[static_cast<Eigen::Index>(arm)]; }

  std::size_t plays(ArmIndex arm) const { return counts_[arm]; }
  std::size_t total_plays() const { return total_; }

  /// Linear only: s_hat_t and the Gram matrix U_t.
  const Vec& estimate() const { return estimate_; }
  const Mat& gram() const { return gram_; }

  void update(ArmIndex arm, double reward);

 private:
  void refresh_linear();

  Kind kind_ = Kind::iid;
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
  Vec means_;

  // iid
  Vec initial_;
  Vec sums_;

  // linear
  Mat features_;
  Mat gram_;
  Vec response_;
  Vec estimate_;
};

struct Selection {
  ArmIndex arm = 0;
  bool explored = false;
};

/// argmax_a { mu_hat_a + pi_a } under the tie rule.
ArmIndex greedy_arm(const Vec& means, const Incentive& incentive, TieRule tie);

Selection agent_select(const AgentState& state, const AgentBehavior& behavior,
                       const Incentive& incentive, std::size_t round, Engine& rng);

AgentState agent_update(AgentState state, ArmIndex arm, double reward);

/// pi*_a(t) = max_b mu_hat_b(t) - mu_hat_a(t). Harness-only.
double optimal_incentive(const AgentState& state, ArmIndex arm);

/// pi^0(a; c): c on `arm`, zero elsewhere.
Incentive one_hot_incentive(ArmIndex arm, double c, std::size_t num_arms);

/// Minimum-norm least-squares solve through a symmetric eigendecomposition,
/// zeroing directions below 1e-10 times the largest eigenvalue.
Vec pseudo_inverse_solve(const Mat& gram, const Vec& rhs);

}  // namespace pagame
