#include "pagame/linear_principal.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pagame {

namespace {

double log_term(std::size_t num_arms, std::size_t horizon, double delta) {
  return ln(4.0 * static_cast<double>(num_arms) * static_cast<double>(horizon) / delta);
}

Mat rows_of(const ArmSet& arms, const ArmList& list) {
  Mat z(static_cast<Eigen::Index>(list.size()), static_cast<Eigen::Index>(arms.dim()));
  for (std::size_t k = 0; k < list.size(); ++k) z.row(static_cast<Eigen::Index>(k)) = arms.features().row(static_cast<Eigen::Index>(list[k]));
  return z;
}

}  // namespace

double linear_phase_length_raw(int m, std::size_t dim, std::size_t num_arms, std::size_t horizon, double delta) {
  return std::ldexp(1.0, m + 4) * static_cast<double>(dim) * log_term(num_arms, horizon, delta);
}

double linear_epsilon(std::size_t phase_length, std::size_t dim, std::size_t num_arms, std::size_t horizon,
                      double delta) {
  const double dl = static_cast<double>(dim) * log_term(num_arms, horizon, delta);
  const double tm = static_cast<double>(phase_length);
  return 4.0 * std::sqrt(dl / std::min(tm, std::cbrt(dl) * std::pow(tm, 2.0 / 3.0)));
}

LinearPhaseParams linear_phase_params(int m, std::size_t dim, std::size_t num_arms, std::size_t horizon,
                                      double delta) {
  LinearPhaseParams p;
  p.length = static_cast<std::size_t>(std::ceil(linear_phase_length_raw(m, dim, num_arms, horizon, delta)));
  p.epsilon = linear_epsilon(p.length, dim, num_arms, horizon, delta);
  return p;
}

std::vector<std::size_t> bad_arm_schedule(const Vec& weights, std::size_t dim, std::size_t num_arms,
                                          std::size_t horizon, double delta, std::size_t phase_length) {
  const double base = std::cbrt(static_cast<double>(dim) * log_term(num_arms, horizon, delta)) *
                      std::pow(static_cast<double>(phase_length), 2.0 / 3.0);
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(weights.size()));
  for (Eigen::Index k = 0; k < weights.size(); ++k)
    out.push_back(static_cast<std::size_t>(std::ceil(weights[k] * base)));
  return out;
}

double linear_enlarged_incentive(const Vec& center, ArmIndex arm, const ArmSet& arms, double eps_prev,
                                 std::size_t horizon) {
  const double d = static_cast<double>(arms.dim());
  const double inv_t = 1.0 / static_cast<double>(horizon);
  const Vec scores = arms.features() * center;
  const double gap = scores.maxCoeff() - scores[static_cast<Eigen::Index>(arm)];
  return std::min(2.0 * d + inv_t, gap + (1.0 + 32.0 * d) * eps_prev + inv_t);
}

Vec ols_principal_estimate(const Mat& design_matrix, const Vec& response) {
  const Eigen::LLT<Mat> llt(design_matrix);
  if (llt.info() != Eigen::Success) throw InvariantError("principal design matrix is not positive definite");
  Eigen::SelfAdjointEigenSolver<Mat> eig(design_matrix, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues()[0] > 0.0)) throw InvariantError("principal design matrix is not positive definite");
  return llt.solve(response);
}

std::pair<ArmList, ArmList> linear_offline_eliminate(const ArmList& active, const ArmList& bad, const ArmSet& arms,
                                                     const Vec& nu_hat, const Vec& center, double eps) {
  const double d = static_cast<double>(arms.dim());
  const Vec joint = nu_hat + center;
  double best = -std::numeric_limits<double>::infinity();
  for (ArmIndex b : active) best = std::max(best, arms.feature(b).dot(joint));
  ArmList next_active = active;
  ArmList next_bad = bad;
  for (ArmIndex a : active)
    if (best - arms.feature(a).dot(joint) > (7.0 + 32.0 * d) * eps) move_arm(next_active, next_bad, a);
  return {next_active, next_bad};
}

LinearLog run_linear_principal(const ArmSet& arms, InteractionChannel& channel, Engine& rng,
                               const LinearOptions& options) {
  if (arms.kind() != ArmKind::linear) throw ConfigError("the linear principal needs a linear arm set");
  const std::size_t K = arms.size();
  const std::size_t d = arms.dim();
  const std::size_t T = channel.horizon();
  const double delta = options.delta > 0.0 ? options.delta : 1.0 / static_cast<double>(T);
  const double xi = 1.0 / static_cast<double>(T);
  const double stabilize_value = 2.0 * static_cast<double>(d) + 1.0 / static_cast<double>(T);

  LinearLog log;
  ArmList active(K);
  std::iota(active.begin(), active.end(), ArmIndex{0});
  ArmList bad;
  double eps_prev = 1.0;

  try {
    for (int m = 1;; ++m) {
      const std::size_t tm = scaled_count(linear_phase_length_raw(m, d, K, T, delta), options.gamma);
      const double eps = linear_epsilon(tm, d, K, T, delta);

      PhaseLog& pl = log.base.phases.emplace_back();
      pl.phase = m;
      pl.start_round = channel.rounds_used();
      pl.exploration_budget = tm;
      pl.active = active;
      pl.bad = bad;
      LinearPhaseRecord& rec = log.phases.emplace_back();
      rec.phase = m;
      rec.length = tm;
      rec.epsilon = eps;
      rec.epsilon_prev = eps_prev;

      Mat V = Mat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      Vec response = Vec::Zero(static_cast<Eigen::Index>(d));
      auto play = [&](ArmIndex target, double value, std::size_t rounds) {
        const Incentive pi = one_hot_incentive(target, value, K);
        const Vec a = arms.feature(target);
        V += static_cast<double>(rounds) * a * a.transpose();
        for (std::size_t r = 0; r < rounds; ++r) {
          const Observation obs = channel.propose(pi);
          response += arms.feature(obs.arm) * obs.principal_reward;
        }
      };

      if (!bad.empty()) {
        rec.bad_weights = approx_g_optimal_design(rows_of(arms, bad)).weights;
        rec.bad_rounds = bad_arm_schedule(rec.bad_weights, d, K, T, delta, tm);
        for (std::size_t k = 0; k < bad.size(); ++k) {
          pl.bad_budget += rec.bad_rounds[k];
          if (rec.bad_rounds[k] == 0) continue;
          channel.annotate({m, Block::stabilize, bad[k]});
          play(bad[k], stabilize_value, rec.bad_rounds[k]);
        }
      }

      rec.active_weights = approx_g_optimal_design(rows_of(arms, active)).weights;

      MspOptions msp = options.msp;
      msp.phase = m;
      const MspResult first = msp_search(arms, eps_prev, xi, channel, rng, msp);
      rec.center = first.center;
      rec.final_pair_width = first.final_pair_width;
      rec.witness_always_inside = first.witness_always_inside;
      rec.search_iterations = first.iterations;

      for (std::size_t k = 0; k < active.size(); ++k) {
        const std::size_t rounds = static_cast<std::size_t>(
            std::ceil(rec.active_weights[static_cast<Eigen::Index>(k)] * static_cast<double>(tm)));
        rec.active_rounds.push_back(rounds);
        const double b_bar = linear_enlarged_incentive(rec.center, active[k], arms, eps_prev, T);
        rec.incentives.push_back(b_bar);
        if (rounds == 0) continue;
        channel.annotate({m, Block::explore, active[k]});
        play(active[k], b_bar, rounds);
      }

      Eigen::SelfAdjointEigenSolver<Mat> eig(V, Eigen::EigenvaluesOnly);
      rec.min_design_eigenvalue = eig.eigenvalues()[0];
      rec.nu_hat = ols_principal_estimate(V, response);

      const MspResult second = msp_search(arms, eps, xi, channel, rng, msp);
      rec.center_again = second.center;
      rec.final_pair_width_again = second.final_pair_width;
      rec.witness_always_inside = rec.witness_always_inside && second.witness_always_inside;
      rec.search_iterations.insert(rec.search_iterations.end(), second.iterations.begin(), second.iterations.end());

      auto next = linear_offline_eliminate(active, bad, arms, rec.nu_hat, rec.center_again, eps);
      for (ArmIndex a : active)
        if (std::find(next.first.begin(), next.first.end(), a) == next.first.end()) pl.eliminated.push_back(a);
      pl.completed = true;
      pl.end_round = channel.rounds_used();

      active = std::move(next.first);
      bad = std::move(next.second);
      eps_prev = eps;
    }
  } catch (const HorizonReached&) {
    log.base.truncated = true;
    if (!log.base.phases.empty()) log.base.phases.back().end_round = channel.rounds_used();
  }
  return log;
}

LinearRunOutput run_linear_principal(const GameSetup& setup, const LinearOptions& options) {
  if (setup.arms.kind() != ArmKind::linear || setup.model.kind != ArmKind::linear)
    throw ConfigError("the linear principal needs a linear arm set and model");
  if (setup.behavior.explores()) throw ConfigError("the linear principal requires a non-exploring agent");
  LinearRunOutput out{make_game(setup), {}};
  Engine rng = setup.seeder.stream(streams::mc_geometry);
  out.log = run_linear_principal(setup.arms, out.game, rng, options);
  return out;
}

}  // namespace pagame
