#pragma once

#include "pagame/principal.hpp"

#include <map>

namespace pagame {

enum class EliminationVariant { online, offline };

/// Phase-level state of the i.i.d. phased-elimination principal.
struct PhaseState {
  int m = 1;
  ArmList active;
  ArmList bad;
  std::size_t exploration_budget = 0;  // T_m
  std::size_t previous_budget = 1;     // T_{m-1}
  std::size_t bad_budget = 0;          // Z_m
  double confidence_radius = 0.0;      // C_m
};

/// ceil(max{2^{2m+5} log(4TK/delta), |A_m| log T}).
std::size_t phase_length(int m, std::size_t active_count, std::size_t horizon, std::size_t num_arms,
                         double delta);
double phase_length_raw(int m, std::size_t active_count, std::size_t horizon, std::size_t num_arms,
                        double delta);

/// ceil(sqrt(|A_m| T_{m-1} / max{1, |B_m|})).
std::size_t bad_arm_budget(std::size_t active_count, std::size_t bad_count, std::size_t previous_budget);
double bad_arm_budget_raw(std::size_t active_count, std::size_t bad_count, std::size_t previous_budget);

/// sqrt(log(4KT/delta) / (2 T_{m-1})).
double confidence_radius(std::size_t num_arms, std::size_t horizon, double delta,
                         std::size_t previous_budget);

/// min{1 + 1/T, b + 4 C_m + 1/Z_m}.
double enlarge_incentive(double b, double confidence, double bad_budget, std::size_t horizon);

/// 4/T + (2 + ceil(log2 T))/T_m + 2 sqrt(|B_m| / (|A_m| T_{m-1})).
double offline_slack(const PhaseState& phase, std::size_t horizon);

/// Elimination incentive for testing `target`: 1 + theta_hat_a + bonus on the
/// target, 1 + theta_hat_b on the other actives, zero on bad arms.
Incentive elimination_incentive(ArmIndex target, const ArmList& active, const Vec& theta_hat,
                                double bonus, std::size_t num_arms);

/// Online elimination: one probe per active arm; an arm that loses its own
/// probe moves to the bad set. Returns (A_{m+1}, B_{m+1}).
std::pair<ArmList, ArmList> online_eliminate(const PhaseState& phase, InteractionChannel& channel);

/// Offline elimination from fresh search outputs b'_{m,a} and the theta_hat
/// snapshot taken at the end of each search.
std::pair<ArmList, ArmList> offline_eliminate(const PhaseState& phase,
                                              const std::map<ArmIndex, double>& search_outputs,
                                              const std::map<ArmIndex, Vec>& theta_snapshots,
                                              std::size_t horizon);

struct IidOptions {
  double delta = 0.0;  // 0 selects 1/T
  double gamma = 1.0;
  EliminationVariant variant = EliminationVariant::online;
};

/// Runs the phased principal against any channel until the horizon.
PrincipalLog run_iid_principal(InteractionChannel& channel, const IidOptions& options);

/// Builds the game, rejects exploring agents, and runs to the horizon.
RunOutput run_iid_principal(const GameSetup& setup, const IidOptions& options);

}  // namespace pagame
