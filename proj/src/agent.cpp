#include "pagame/agent.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace pagame {

std::size_t exploration_start(double c0) {
  std::size_t tau = 2;
  while (!(c0 * std::sqrt(std::log(2.0 * static_cast<double>(tau))) < std::sqrt(static_cast<double>(tau))))
    ++tau;
  return tau;
}

double exploration_probability(double c0, std::size_t t) {
  if (c0 <= 0.0 || t < exploration_start(c0)) return 0.0;
  const double td = static_cast<double>(t);
  return std::min(1.0, c0 * std::sqrt(std::log(2.0 * td) / td));
}

void resolve_exploration_arm(AgentBehavior& behavior, const RewardModel& model, const ArmSet& arms) {
  if (behavior.policy != ExplorePolicy::adversarial_lowest_joint_mean) return;
  const Vec joint = model.principal_means(arms) + model.agent_means(arms);
  Eigen::Index worst = 0;
  joint.minCoeff(&worst);
  behavior.fixed_arm = static_cast<ArmIndex>(worst);
}

AgentState AgentState::iid(std::size_t num_arms) {
  return iid(Vec::Zero(static_cast<Eigen::Index>(num_arms)));
}

AgentState AgentState::iid(Vec initial_means) {
  AgentState s;
  s.kind_ = Kind::iid;
  s.counts_.assign(static_cast<std::size_t>(initial_means.size()), 0);
  s.sums_ = Vec::Zero(initial_means.size());
  s.means_ = initial_means;
  s.initial_ = std::move(initial_means);
  return s;
}

AgentState AgentState::linear(const ArmSet& arms) {
  return linear(arms, Vec::Zero(static_cast<Eigen::Index>(arms.dim())));
}

AgentState AgentState::linear(const ArmSet& arms, Vec initial_estimate) {
  if (initial_estimate.norm() > 1.0 + 1e-12) throw ConfigError("initial estimate must lie in B(0,1)");
  AgentState s;
  s.kind_ = Kind::linear;
  s.counts_.assign(arms.size(), 0);
  s.features_ = arms.features();
  const auto d = static_cast<Eigen::Index>(arms.dim());
  s.gram_ = Mat::Zero(d, d);
  s.response_ = Vec::Zero(d);
  s.estimate_ = std::move(initial_estimate);
  s.means_ = s.features_ * s.estimate_;
  return s;
}

AgentState AgentState::pinned(Vec means) {
  AgentState s;
  s.kind_ = Kind::pinned;
  s.counts_.assign(static_cast<std::size_t>(means.size()), 0);
  s.means_ = std::move(means);
  return s;
}

void AgentState::update(ArmIndex arm, double reward) {
  ++counts_[arm];
  ++total_;
  const auto i = static_cast<Eigen::Index>(arm);
  switch (kind_) {
    case Kind::pinned:
      return;
    case Kind::iid:
      sums_[i] += reward;
      means_[i] = (initial_[i] + sums_[i]) / static_cast<double>(std::max<std::size_t>(1, counts_[arm]));
      return;
    case Kind::linear: {
      const Vec a = features_.row(i).transpose();
      gram_.noalias() += a * a.transpose();
      response_.noalias() += reward * a;
      refresh_linear();
      return;
    }
  }
}

void AgentState::refresh_linear() {
  estimate_ = pseudo_inverse_solve(gram_, response_);
  means_.noalias() = features_ * estimate_;
}

Vec pseudo_inverse_solve(const Mat& gram, const Vec& rhs) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  const Vec& values = eig.eigenvalues();
  const double cutoff = 1e-10 * std::max(0.0, values.maxCoeff());
  const Vec projected = eig.eigenvectors().transpose() * rhs;
  Vec scaled = Vec::Zero(values.size());
  for (Eigen::Index k = 0; k < values.size(); ++k)
    if (values[k] > cutoff && values[k] > 0.0) scaled[k] = projected[k] / values[k];
  return eig.eigenvectors() * scaled;
}

ArmIndex greedy_arm(const Vec& means, const Incentive& incentive, TieRule tie) {
  const Eigen::Index n = means.size();
  Eigen::Index best = 0;
  double best_value = means[0] + incentive[0];
  for (Eigen::Index a = 1; a < n; ++a) {
    const double v = means[a] + incentive[a];
    if (v > best_value || (tie == TieRule::highest_index && v == best_value)) {
      best = a;
      best_value = v;
    }
  }
  return static_cast<ArmIndex>(best);
}

Selection agent_select(const AgentState& state, const AgentBehavior& behavior,
                       const Incentive& incentive, std::size_t round, Engine& rng) {
  Selection out;
  out.arm = greedy_arm(state.empirical_means(), incentive, behavior.tie_rule);
  if (!behavior.explores()) return out;

  const double p = exploration_probability(behavior.c0, round);
  if (p <= 0.0) return out;
  if (!(std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p)) return out;

  out.explored = true;
  const std::size_t k = state.num_arms();
  switch (behavior.policy) {
    case ExplorePolicy::uniform: {
      // Uniform over the non-maximizing arms.
      auto pick = std::uniform_int_distribution<std::size_t>(0, k - 2)(rng);
      out.arm = pick >= out.arm ? pick + 1 : pick;
      break;
    }
    case ExplorePolicy::fixed_arm:
    case ExplorePolicy::adversarial_lowest_joint_mean:
      out.arm = behavior.fixed_arm;
      break;
  }
  return out;
}

AgentState agent_update(AgentState state, ArmIndex arm, double reward) {
  state.update(arm, reward);
  return state;
}

double optimal_incentive(const AgentState& state, ArmIndex arm) {
  return state.empirical_means().maxCoeff() - state.empirical_mean(arm);
}

Incentive one_hot_incentive(ArmIndex arm, double c, std::size_t num_arms) {
  if (arm >= num_arms) throw std::out_of_range("one_hot_incentive: arm index out of range");
  if (!(c > 0.0)) throw ConfigError("one_hot_incentive: value must be positive");
  Incentive pi = Incentive::Zero(static_cast<Eigen::Index>(num_arms));
  pi[static_cast<Eigen::Index>(arm)] = c;
  return pi;
}

}  // namespace pagame
