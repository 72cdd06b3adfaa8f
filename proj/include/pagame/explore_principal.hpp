#pragma once

#include "pagame/principal.hpp"

#include <utility>

namespace pagame {

/// ln(iota) with iota = 16 K T^2 log2(T) ln(4 log2(T)/delta) / delta, computed
/// in the log domain.
double explore_log_iota(std::size_t num_arms, std::size_t horizon, double delta);

/// 32 max{c0,1}^3 4^m K ln(16TK/delta) ln^2(iota), before rounding.
double explore_phase_length_raw(int m, std::size_t num_arms, std::size_t horizon, double delta, double c0);
std::size_t explore_phase_length(int m, std::size_t num_arms, std::size_t horizon, double delta, double c0);

/// ceil(2 ln(4 log2(T)/delta)): search calls, and so test iterations, per arm.
std::size_t search_repeats(std::size_t horizon, double delta);

/// ceil(8 ln(8 K log2(T)/delta)): length of each elimination vote list.
std::size_t vote_count(std::size_t num_arms, std::size_t horizon, double delta);

/// 2 ln^{1/3}(16KT/delta) (|A| T_prev / max{1,|B|})^{2/3}.
double explore_bad_budget_raw(std::size_t active_count, std::size_t bad_count, std::size_t previous_budget,
                              std::size_t num_arms, std::size_t horizon, double delta);

/// (ln(16KT/delta) max{1,|B|}/(T_prev |A|))^{1/3} + sqrt(ln(16KT/delta)/T_prev).
double explore_epsilon(std::size_t active_count, std::size_t bad_count, std::size_t previous_budget,
                       std::size_t num_arms, std::size_t horizon, double delta);

/// min{1 + 1/T, b + (max{1,|B|}/(T_prev |A|))^{2/3} + 1/T_prev + 4 eps}.
double explore_enlarge(double b, std::size_t active_count, std::size_t bad_count, std::size_t previous_budget,
                       double epsilon, std::size_t horizon);

/// Stopping level of one test iteration: 2 c0 sqrt(Y ln 2T) + sqrt(8 ln(iota)/Y).
double incentive_test_threshold(std::size_t rounds, double c0, std::size_t horizon, double log_iota);

struct IncentiveTestOutcome {
  std::vector<std::size_t> failures;
  std::vector<std::size_t> rounds;
  std::size_t target_plays = 0;
};

/// Tries the sorted candidates in turn. Each iteration offers pi^0(arm; b_i)
/// until the failure counter beats the threshold or Y reaches 2 T_m, and the
/// loop stops once the collected target plays reach T_m.
IncentiveTestOutcome incentive_test(int phase, ArmIndex arm, const std::vector<double>& sorted_incentives,
                                    std::size_t phase_length, InteractionChannel& channel, double c0,
                                    double log_iota);

/// Upper median of a 0/1 list: 0 only on a strict majority of zeros.
int median_vote(std::vector<int> votes);

/// Median-vote elimination. Each active arm gets `votes` probes of the
/// elimination incentive built from a theta_hat snapshot taken when its
/// probes begin; the arm leaves A_m when the median vote is 0.
/// Returns (A_{m+1}, B_{m+1}); vote lists are appended to `records` in
/// active-arm order when given.
std::pair<ArmList, ArmList> trustworthy_eliminate(int phase, const ArmList& active, const ArmList& bad,
                                                  double bonus, std::size_t votes,
                                                  InteractionChannel& channel,
                                                  std::vector<std::vector<int>>* vote_lists = nullptr);

struct ExploreOptions {
  double delta = 0.0;  // 0 selects 1/T
  double gamma = 1.0;
  double c0 = 1.0;     // the principal's bound on the agent's c0
};

/// Exploration-robust principal for the learning agent: stabilization,
/// repeated asymmetric-check searches, incentive testing, median elimination.
PrincipalLog run_exploratory_principal(InteractionChannel& channel, const ExploreOptions& options);
RunOutput run_exploratory_principal(const GameSetup& setup, const ExploreOptions& options);

/// Variant for the exploratory oracle agent: plain bisection, +1/T
/// enlargement, no stabilization, smaller elimination bonus.
PrincipalLog run_oracle_explore_principal(InteractionChannel& channel, const ExploreOptions& options);
RunOutput run_oracle_explore_principal(const GameSetup& setup, const ExploreOptions& options);

}  // namespace pagame
