#include "pagame/reward_model.hpp"

#include <Eigen/SVD>

#include <random>
#include <sstream>

namespace pagame {

ArmSet ArmSet::iid(std::size_t num_arms) {
  if (num_arms < 2) throw ConfigError("arm set needs K >= 2");
  ArmSet s;
  s.kind_ = ArmKind::iid;
  s.num_arms_ = num_arms;
  return s;
}

ArmSet ArmSet::linear(Mat features) {
  if (features.rows() < 2) throw ConfigError("arm set needs K >= 2");
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    if (features.row(i).norm() > 1.0 + 1e-12) {
      std::ostringstream msg;
      msg << "arm " << i << " has norm " << features.row(i).norm() << " > 1";
      throw ConfigError(msg.str());
    }
  }
  Eigen::JacobiSVD<Mat> svd(features);
  svd.setThreshold(1e-10);
  if (svd.rank() < features.cols()) throw ConfigError("linear arm set does not span R^d");
  ArmSet s;
  s.kind_ = ArmKind::linear;
  s.num_arms_ = static_cast<std::size_t>(features.rows());
  s.features_ = std::move(features);
  return s;
}

double RewardDistribution::sample(Engine& rng) const {
  switch (shape) {
    case Shape::point:
      return lo;
    case Shape::bernoulli:
      return std::bernoulli_distribution(lo)(rng) ? 1.0 : 0.0;
    case Shape::uniform:
      return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  return lo;
}

RewardModel RewardModel::iid(std::vector<RewardDistribution> principal,
                             std::vector<RewardDistribution> agent) {
  RewardModel m;
  m.kind = ArmKind::iid;
  m.principal = std::move(principal);
  m.agent = std::move(agent);
  return m;
}

RewardModel RewardModel::linear(Vec s_star, Vec nu_star, double agent_sigma,
                                double principal_sigma) {
  RewardModel m;
  m.kind = ArmKind::linear;
  m.s_star = std::move(s_star);
  m.nu_star = std::move(nu_star);
  m.agent_noise_sigma = agent_sigma;
  m.principal_noise_sigma = principal_sigma;
  return m;
}

namespace {

void check_support(const RewardDistribution& d, std::size_t arm) {
  const bool ok = d.lo >= 0.0 && d.hi <= 1.0 && d.lo <= d.hi;
  if (!ok) {
    std::ostringstream msg;
    msg << "reward distribution of arm " << arm << " is not supported on [0,1]";
    throw ConfigError(msg.str());
  }
}

}  // namespace

void RewardModel::validate(const ArmSet& arms) const {
  if (kind != arms.kind()) throw ConfigError("reward model and arm set disagree on setting");
  if (kind == ArmKind::iid) {
    if (principal.size() != arms.size() || agent.size() != arms.size())
      throw ConfigError("iid reward model must list one distribution per arm");
    for (std::size_t a = 0; a < arms.size(); ++a) {
      check_support(principal[a], a);
      check_support(agent[a], a);
    }
    return;
  }
  const auto d = static_cast<Eigen::Index>(arms.dim());
  if (s_star.size() != d || nu_star.size() != d)
    throw ConfigError("s_star and nu_star must have the arm dimension");
  if (s_star.norm() > 1.0 + 1e-12 || nu_star.norm() > 1.0 + 1e-12)
    throw ConfigError("s_star and nu_star must lie in the unit ball");
  if (agent_noise_sigma < 0.0 || agent_noise_sigma > 1.0 || principal_noise_sigma < 0.0 ||
      principal_noise_sigma > 1.0)
    throw ConfigError("Gaussian noise needs 0 <= sigma <= 1 to stay 1-subgaussian");
}

Vec RewardModel::principal_means(const ArmSet& arms) const {
  if (kind == ArmKind::linear) return arms.features() * nu_star;
  Vec out(static_cast<Eigen::Index>(principal.size()));
  for (std::size_t a = 0; a < principal.size(); ++a) out[static_cast<Eigen::Index>(a)] = principal[a].mean();
  return out;
}

Vec RewardModel::agent_means(const ArmSet& arms) const {
  if (kind == ArmKind::linear) return arms.features() * s_star;
  Vec out(static_cast<Eigen::Index>(agent.size()));
  for (std::size_t a = 0; a < agent.size(); ++a) out[static_cast<Eigen::Index>(a)] = agent[a].mean();
  return out;
}

RewardDraw sample_rewards(const RewardModel& model, const ArmSet& arms, ArmIndex arm,
                          RewardStreams& rng) {
  RewardDraw draw;
  if (model.kind == ArmKind::iid) {
    draw.principal = model.principal[arm].sample(rng.principal);
    draw.agent = model.agent[arm].sample(rng.agent);
    return draw;
  }
  const Vec a = arms.feature(arm);
  draw.principal = model.nu_star.dot(a);
  draw.agent = model.s_star.dot(a);
  // Zero sigma draws nothing, so noise-free runs do not consume the streams.
  if (model.principal_noise_sigma > 0.0)
    draw.principal += std::normal_distribution<double>(0.0, model.principal_noise_sigma)(rng.principal);
  if (model.agent_noise_sigma > 0.0)
    draw.agent += std::normal_distribution<double>(0.0, model.agent_noise_sigma)(rng.agent);
  return draw;
}

}  // namespace pagame
