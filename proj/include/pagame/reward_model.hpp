#pragma once

#include "pagame/rng.hpp"
#include "pagame/types.hpp"

#include <utility>
#include <vector>

namespace pagame {

enum class ArmKind { iid, linear };

/// The arm set shared by principal and agent. For linear arm sets each row
/// of `features` is one arm in B(0,1).
class ArmSet {
 public:
  static ArmSet iid(std::size_t num_arms);
  static ArmSet linear(Mat features);

  ArmKind kind() const { return kind_; }
  std::size_t size() const { return num_arms_; }
  std::size_t dim() const { return static_cast<std::size_t>(features_.cols()); }
  const Mat& features() const { return features_; }
  Vec feature(ArmIndex arm) const { return features_.row(static_cast<Eigen::Index>(arm)).transpose(); }

 private:
  ArmKind kind_ = ArmKind::iid;
  std::size_t num_arms_ = 0;
  Mat features_;
};

/// Bounded reward distribution on [0,1].
struct RewardDistribution {
  enum class Shape { bernoulli, uniform, point };
  Shape shape = Shape::point;
  double lo = 0.0;  // uniform support, or the point / Bernoulli mean in `lo`
  double hi = 0.0;

  static RewardDistribution bernoulli(double mean) { return {Shape::bernoulli, mean, mean}; }
  static RewardDistribution point(double value) { return {Shape::point, value, value}; }
  static RewardDistribution uniform(double lo, double hi) { return {Shape::uniform, lo, hi}; }

  double mean() const { return shape == Shape::uniform ? 0.5 * (lo + hi) : lo; }
  double sample(Engine& rng) const;
};

/// Ground truth for either reward setting. Only the game harness and the
/// agent may read it.
struct RewardModel {
  ArmKind kind = ArmKind::iid;

  // iid
  std::vector<RewardDistribution> principal;  // D^P_a, mean theta_a
  std::vector<RewardDistribution> agent;      // D^A_a, mean mu_a

  // linear
  Vec s_star;
  Vec nu_star;
  double agent_noise_sigma = 0.0;
  double principal_noise_sigma = 0.0;

  static RewardModel iid(std::vector<RewardDistribution> principal,
                         std::vector<RewardDistribution> agent);
  static RewardModel linear(Vec s_star, Vec nu_star, double agent_sigma,
                            double principal_sigma);

  /// Checks supports, norms and sizes against the arm set; throws ConfigError.
  void validate(const ArmSet& arms) const;

  /// theta_a for every arm.
  Vec principal_means(const ArmSet& arms) const;
  /// mu_a for every arm.
  Vec agent_means(const ArmSet& arms) const;
};

struct RewardDraw {
  double principal = 0.0;  // X_{A_t}(t)
  double agent = 0.0;      // R_{A_t}(t)
};

/// Independent streams for the two reward sides.
struct RewardStreams {
  Engine agent;
  Engine principal;
};

RewardDraw sample_rewards(const RewardModel& model, const ArmSet& arms, ArmIndex arm,
                          RewardStreams& rng);

}  // namespace pagame
