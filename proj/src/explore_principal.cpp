#include "pagame/explore_principal.hpp"

#include "pagame/iid_principal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pagame {

namespace {

double log2_horizon(std::size_t horizon) { return std::log2(static_cast<double>(horizon)); }

double elimination_bonus(bool oracle, std::size_t K, std::size_t T, double delta, std::size_t phase_length) {
  const double KT = static_cast<double>(K) * static_cast<double>(T);
  const double tm2 = 2.0 * static_cast<double>(phase_length);
  if (oracle) return 3.0 * std::sqrt(ln(8.0 * KT / delta) / tm2);
  return 5.0 * std::sqrt(ln(16.0 * KT / delta) / tm2);
}

PrincipalLog run_phases(InteractionChannel& channel, const ExploreOptions& options, bool oracle) {
  const std::size_t K = channel.num_arms();
  const std::size_t T = channel.horizon();
  const double delta = options.delta > 0.0 ? options.delta : 1.0 / static_cast<double>(T);
  const double log_iota = explore_log_iota(K, T, delta);
  const std::size_t n_search = search_repeats(T, delta);
  const std::size_t n_votes = vote_count(K, T, delta);
  const double stabilize_value = 1.0 + 1.0 / static_cast<double>(T);

  PrincipalLog log;
  ArmList active(K);
  std::iota(active.begin(), active.end(), ArmIndex{0});
  ArmList bad;
  std::size_t previous = 1;

  try {
    for (int m = 1;; ++m) {
      const std::size_t tm =
          scaled_count(explore_phase_length_raw(m, K, T, delta, options.c0), options.gamma);

      PhaseLog& pl = log.phases.emplace_back();
      pl.phase = m;
      pl.start_round = channel.rounds_used();
      pl.exploration_budget = tm;
      pl.active = active;
      pl.bad = bad;

      if (!oracle) {
        pl.bad_budget = scaled_count(
            explore_bad_budget_raw(active.size(), bad.size(), previous, K, T, delta), options.gamma);
        for (ArmIndex a : bad) {
          channel.annotate({m, Block::stabilize, a});
          const Incentive pi = one_hot_incentive(a, stabilize_value, K);
          for (std::size_t r = 0; r < pl.bad_budget; ++r) channel.propose(pi);
        }
      }

      const double eps = oracle ? 0.0 : explore_epsilon(active.size(), bad.size(), previous, K, T, delta);
      const std::size_t first_record = log.tests.size();
      for (ArmIndex a : active) {
        ArmTestRecord rec;
        rec.phase = m;
        rec.arm = a;
        rec.required_plays = tm;
        for (std::size_t i = 0; i < n_search; ++i) {
          const SearchResult sr = oracle ? plain_binary_search(a, channel, m) : noisy_binary_search(a, channel, m);
          pl.searches.push_back(sr);
          rec.incentives.push_back(sr.value);
        }
        std::sort(rec.incentives.begin(), rec.incentives.end());
        for (double& b : rec.incentives)
          b = oracle ? b + 1.0 / static_cast<double>(T)
                     : explore_enlarge(b, active.size(), bad.size(), previous, eps, T);
        log.tests.push_back(std::move(rec));
      }

      for (std::size_t k = 0; k < active.size(); ++k) {
        ArmTestRecord& rec = log.tests[first_record + k];
        IncentiveTestOutcome out = incentive_test(m, rec.arm, rec.incentives, tm, channel, options.c0, log_iota);
        rec.failures = std::move(out.failures);
        rec.rounds = std::move(out.rounds);
        rec.target_plays = out.target_plays;
      }

      std::vector<std::vector<int>> votes;
      auto next = trustworthy_eliminate(m, active, bad, elimination_bonus(oracle, K, T, delta, tm), n_votes,
                                        channel, &votes);
      for (std::size_t k = 0; k < active.size(); ++k) {
        ArmTestRecord& rec = log.tests[first_record + k];
        rec.votes = std::move(votes[k]);
        rec.eliminated = std::find(next.first.begin(), next.first.end(), rec.arm) == next.first.end();
        if (rec.eliminated) pl.eliminated.push_back(rec.arm);
      }
      pl.completed = true;
      pl.end_round = channel.rounds_used();

      active = std::move(next.first);
      bad = std::move(next.second);
      previous = tm;
    }
  } catch (const HorizonReached&) {
    log.truncated = true;
    if (!log.phases.empty()) log.phases.back().end_round = channel.rounds_used();
  }
  return log;
}

}  // namespace

double explore_log_iota(std::size_t num_arms, std::size_t horizon, double delta) {
  const double l2 = log2_horizon(horizon);
  return ln(16.0) + ln(static_cast<double>(num_arms)) + 2.0 * ln(static_cast<double>(horizon)) + ln(l2) +
         ln(ln(4.0 * l2 / delta)) - ln(delta);
}

double explore_phase_length_raw(int m, std::size_t num_arms, std::size_t horizon, double delta, double c0) {
  const double c = std::max(c0, 1.0);
  const double K = static_cast<double>(num_arms);
  const double li = explore_log_iota(num_arms, horizon, delta);
  return 32.0 * c * c * c * std::ldexp(1.0, 2 * m) * K * ln(16.0 * static_cast<double>(horizon) * K / delta) *
         li * li;
}

std::size_t explore_phase_length(int m, std::size_t num_arms, std::size_t horizon, double delta, double c0) {
  return static_cast<std::size_t>(std::ceil(explore_phase_length_raw(m, num_arms, horizon, delta, c0)));
}

std::size_t search_repeats(std::size_t horizon, double delta) {
  return static_cast<std::size_t>(std::ceil(2.0 * ln(4.0 * log2_horizon(horizon) / delta)));
}

std::size_t vote_count(std::size_t num_arms, std::size_t horizon, double delta) {
  return static_cast<std::size_t>(
      std::ceil(8.0 * ln(8.0 * static_cast<double>(num_arms) * log2_horizon(horizon) / delta)));
}

double explore_bad_budget_raw(std::size_t active_count, std::size_t bad_count, std::size_t previous_budget,
                              std::size_t num_arms, std::size_t horizon, double delta) {
  const double l = ln(16.0 * static_cast<double>(num_arms) * static_cast<double>(horizon) / delta);
  const double ratio = static_cast<double>(active_count) * static_cast<double>(previous_budget) /
                       static_cast<double>(std::max<std::size_t>(1, bad_count));
  return 2.0 * std::cbrt(l) * std::pow(ratio, 2.0 / 3.0);
}

double explore_epsilon(std::size_t active_count, std::size_t bad_count, std::size_t previous_budget,
                       std::size_t num_arms, std::size_t horizon, double delta) {
  const double l = ln(16.0 * static_cast<double>(num_arms) * static_cast<double>(horizon) / delta);
  const double tp = static_cast<double>(previous_budget);
  const double ratio = static_cast<double>(std::max<std::size_t>(1, bad_count)) /
                       (tp * static_cast<double>(active_count));
  return std::cbrt(l * ratio) + std::sqrt(l / tp);
}

double explore_enlarge(double b, std::size_t active_count, std::size_t bad_count, std::size_t previous_budget,
                       double epsilon, std::size_t horizon) {
  const double tp = static_cast<double>(previous_budget);
  const double ratio = static_cast<double>(std::max<std::size_t>(1, bad_count)) /
                       (tp * static_cast<double>(active_count));
  const double cap = 1.0 + 1.0 / static_cast<double>(horizon);
  return std::min(cap, b + std::pow(ratio, 2.0 / 3.0) + 1.0 / tp + 4.0 * epsilon);
}

double incentive_test_threshold(std::size_t rounds, double c0, std::size_t horizon, double log_iota) {
  const double y = static_cast<double>(rounds);
  return 2.0 * c0 * std::sqrt(y * ln(2.0 * static_cast<double>(horizon))) + std::sqrt(8.0 * log_iota / y);
}

IncentiveTestOutcome incentive_test(int phase, ArmIndex arm, const std::vector<double>& sorted_incentives,
                                    std::size_t phase_length, InteractionChannel& channel, double c0,
                                    double log_iota) {
  const std::size_t K = channel.num_arms();
  const std::size_t cap = 2 * phase_length;
  IncentiveTestOutcome out;
  channel.annotate({phase, Block::explore, arm});
  for (double b : sorted_incentives) {
    const Incentive pi = one_hot_incentive(arm, b, K);
    std::size_t c = 0;
    std::size_t y = 0;
    do {
      const Observation obs = channel.propose(pi);
      ++y;
      if (obs.arm != arm) ++c;
    } while (!(static_cast<double>(c) > incentive_test_threshold(y, c0, channel.horizon(), log_iota)) && y < cap);
    out.failures.push_back(c);
    out.rounds.push_back(y);
    out.target_plays += y - c;
    if (out.target_plays >= phase_length) break;
  }
  return out;
}

int median_vote(std::vector<int> votes) {
  if (votes.empty()) return 1;
  std::sort(votes.begin(), votes.end());
  return votes[votes.size() / 2];
}

std::pair<ArmList, ArmList> trustworthy_eliminate(int phase, const ArmList& active, const ArmList& bad,
                                                  double bonus, std::size_t votes,
                                                  InteractionChannel& channel,
                                                  std::vector<std::vector<int>>* vote_lists) {
  ArmList next_active = active;
  ArmList next_bad = bad;
  for (ArmIndex a : active) {
    channel.annotate({phase, Block::eliminate, a});
    const Vec theta_hat = channel.principal_means();
    const Incentive pi = elimination_incentive(a, active, theta_hat, bonus, channel.num_arms());
    std::vector<int> list;
    list.reserve(votes);
    for (std::size_t k = 0; k < votes; ++k) list.push_back(channel.propose(pi).arm == a ? 1 : 0);
    if (median_vote(list) == 0) move_arm(next_active, next_bad, a);
    if (vote_lists) vote_lists->push_back(std::move(list));
  }
  return {next_active, next_bad};
}

PrincipalLog run_exploratory_principal(InteractionChannel& channel, const ExploreOptions& options) {
  return run_phases(channel, options, false);
}

PrincipalLog run_oracle_explore_principal(InteractionChannel& channel, const ExploreOptions& options) {
  return run_phases(channel, options, true);
}

RunOutput run_exploratory_principal(const GameSetup& setup, const ExploreOptions& options) {
  if (setup.arms.kind() != ArmKind::iid) throw ConfigError("the exploration-robust principal needs i.i.d. arms");
  RunOutput out{make_game(setup), {}};
  out.log = run_exploratory_principal(out.game, options);
  return out;
}

RunOutput run_oracle_explore_principal(const GameSetup& setup, const ExploreOptions& options) {
  if (setup.arms.kind() != ArmKind::iid) throw ConfigError("the exploration-robust principal needs i.i.d. arms");
  if (!setup.behavior.is_oracle()) throw ConfigError("the oracle-explore principal needs an oracle agent");
  RunOutput out{make_game(setup), {}};
  out.log = run_oracle_explore_principal(out.game, options);
  return out;
}

}  // namespace pagame
