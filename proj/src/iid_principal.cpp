#include "pagame/iid_principal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pagame {

double phase_length_raw(int m, std::size_t active_count, std::size_t horizon, std::size_t num_arms,
                        double delta) {
  const double T = static_cast<double>(horizon);
  const double first = std::ldexp(1.0, 2 * m + 5) * ln(4.0 * T * static_cast<double>(num_arms) / delta);
  const double second = static_cast<double>(active_count) * ln(T);
  return std::max(first, second);
}

std::size_t phase_length(int m, std::size_t active_count, std::size_t horizon, std::size_t num_arms,
                         double delta) {
  return static_cast<std::size_t>(std::ceil(phase_length_raw(m, active_count, horizon, num_arms, delta)));
}

double bad_arm_budget_raw(std::size_t active_count, std::size_t bad_count, std::size_t previous_budget) {
  return std::sqrt(static_cast<double>(active_count) * static_cast<double>(previous_budget) /
                   static_cast<double>(std::max<std::size_t>(1, bad_count)));
}

std::size_t bad_arm_budget(std::size_t active_count, std::size_t bad_count, std::size_t previous_budget) {
  return static_cast<std::size_t>(std::ceil(bad_arm_budget_raw(active_count, bad_count, previous_budget)));
}

double confidence_radius(std::size_t num_arms, std::size_t horizon, double delta,
                         std::size_t previous_budget) {
  const double log_term = ln(4.0 * static_cast<double>(num_arms) * static_cast<double>(horizon) / delta);
  return std::sqrt(log_term / (2.0 * static_cast<double>(previous_budget)));
}

double enlarge_incentive(double b, double confidence, double bad_budget, std::size_t horizon) {
  const double cap = 1.0 + 1.0 / static_cast<double>(horizon);
  return std::min(cap, b + 4.0 * confidence + 1.0 / bad_budget);
}

double offline_slack(const PhaseState& phase, std::size_t horizon) {
  const double T = static_cast<double>(horizon);
  const double log_t = static_cast<double>(ceil_log2(horizon));
  const double bad_term =
      std::sqrt(static_cast<double>(phase.bad.size()) /
                (static_cast<double>(phase.active.size()) * static_cast<double>(phase.previous_budget)));
  return 4.0 / T + (2.0 + log_t) / static_cast<double>(phase.exploration_budget) + 2.0 * bad_term;
}

Incentive elimination_incentive(ArmIndex target, const ArmList& active, const Vec& theta_hat,
                                double bonus, std::size_t num_arms) {
  Incentive pi = Incentive::Zero(static_cast<Eigen::Index>(num_arms));
  for (ArmIndex b : active) pi[static_cast<Eigen::Index>(b)] = 1.0 + theta_hat[static_cast<Eigen::Index>(b)];
  pi[static_cast<Eigen::Index>(target)] += bonus;
  return pi;
}

std::pair<ArmList, ArmList> online_eliminate(const PhaseState& phase, InteractionChannel& channel) {
  ArmList next_active = phase.active;
  ArmList next_bad = phase.bad;
  const double bonus = 1.5 * std::ldexp(1.0, -phase.m);
  for (ArmIndex a : phase.active) {
    channel.annotate({phase.m, Block::eliminate, a});
    const Vec theta_hat = channel.principal_means();
    const Observation obs =
        channel.propose(elimination_incentive(a, phase.active, theta_hat, bonus, channel.num_arms()));
    if (obs.arm != a) move_arm(next_active, next_bad, a);
  }
  return {next_active, next_bad};
}

std::pair<ArmList, ArmList> offline_eliminate(const PhaseState& phase,
                                              const std::map<ArmIndex, double>& search_outputs,
                                              const std::map<ArmIndex, Vec>& theta_snapshots,
                                              std::size_t horizon) {
  ArmList next_active = phase.active;
  ArmList next_bad = phase.bad;
  const double threshold = 1.5 * std::ldexp(1.0, -phase.m) + offline_slack(phase, horizon);
  for (ArmIndex a : phase.active) {
    const Vec& theta_hat = theta_snapshots.at(a);
    auto score = [&](ArmIndex z) { return theta_hat[static_cast<Eigen::Index>(z)] - search_outputs.at(z); };
    double best = score(phase.active.front());
    for (ArmIndex z : phase.active) best = std::max(best, score(z));
    if (best - score(a) > threshold) move_arm(next_active, next_bad, a);
  }
  return {next_active, next_bad};
}

PrincipalLog run_iid_principal(InteractionChannel& channel, const IidOptions& options) {
  const std::size_t K = channel.num_arms();
  const std::size_t T = channel.horizon();
  const double delta = options.delta > 0.0 ? options.delta : 1.0 / static_cast<double>(T);
  const double stabilize_value = 1.0 + 1.0 / static_cast<double>(T);

  PrincipalLog log;
  PhaseState st;
  st.active.resize(K);
  std::iota(st.active.begin(), st.active.end(), ArmIndex{0});
  st.previous_budget = 1;

  try {
    for (int m = 1;; ++m) {
      st.m = m;
      st.exploration_budget = scaled_count(phase_length_raw(m, st.active.size(), T, K, delta), options.gamma);
      st.bad_budget = scaled_count(bad_arm_budget_raw(st.active.size(), st.bad.size(), st.previous_budget),
                                   options.gamma);
      st.confidence_radius = confidence_radius(K, T, delta, st.previous_budget);

      PhaseLog& pl = log.phases.emplace_back();
      pl.phase = m;
      pl.start_round = channel.rounds_used();
      pl.exploration_budget = st.exploration_budget;
      pl.bad_budget = st.bad_budget;
      pl.active = st.active;
      pl.bad = st.bad;

      for (ArmIndex a : st.bad) {
        channel.annotate({m, Block::stabilize, a});
        const Incentive pi = one_hot_incentive(a, stabilize_value, K);
        for (std::size_t r = 0; r < st.bad_budget; ++r) channel.propose(pi);
      }

      for (ArmIndex a : st.active) {
        const SearchResult sr = noisy_binary_search(a, channel, m);
        pl.searches.push_back(sr);
        const double b_bar = enlarge_incentive(sr.value, st.confidence_radius,
                                               static_cast<double>(st.bad_budget), T);
        channel.annotate({m, Block::explore, a});
        const Incentive pi = one_hot_incentive(a, b_bar, K);
        for (std::size_t r = 0; r < st.exploration_budget; ++r) channel.propose(pi);
      }

      std::pair<ArmList, ArmList> next;
      if (options.variant == EliminationVariant::online) {
        next = online_eliminate(st, channel);
      } else {
        std::map<ArmIndex, double> outputs;
        std::map<ArmIndex, Vec> snapshots;
        for (ArmIndex a : st.active) {
          const SearchResult sr = noisy_binary_search(a, channel, m);
          pl.searches.push_back(sr);
          outputs[a] = sr.value;
          snapshots[a] = channel.principal_means();
        }
        next = offline_eliminate(st, outputs, snapshots, T);
      }

      for (ArmIndex a : st.active)
        if (std::find(next.first.begin(), next.first.end(), a) == next.first.end()) pl.eliminated.push_back(a);
      pl.completed = true;
      pl.end_round = channel.rounds_used();

      st.active = std::move(next.first);
      st.bad = std::move(next.second);
      st.previous_budget = st.exploration_budget;
    }
  } catch (const HorizonReached&) {
    log.truncated = true;
    if (!log.phases.empty()) log.phases.back().end_round = channel.rounds_used();
  }
  return log;
}

RunOutput run_iid_principal(const GameSetup& setup, const IidOptions& options) {
  if (setup.behavior.explores())
    throw ConfigError("the i.i.d. phased principal requires a non-exploring agent");
  if (setup.arms.kind() != ArmKind::iid) throw ConfigError("the i.i.d. principal needs an i.i.d. arm set");
  RunOutput out{make_game(setup), {}};
  out.log = run_iid_principal(out.game, options);
  return out;
}

}  // namespace pagame
