#pragma once

#include "pagame/design.hpp"
#include "pagame/msp.hpp"
#include "pagame/principal.hpp"

namespace pagame {

struct LinearPhaseParams {
  std::size_t length = 0;  // T_m
  double epsilon = 0.0;    // eps_m
};

/// T_m = ceil(2^{m+4} d ln(4KT/delta)),
/// eps_m = 4 sqrt(d ln(4KT/delta) / min{T_m, (d ln(4KT/delta))^{1/3} T_m^{2/3}}).
LinearPhaseParams linear_phase_params(int m, std::size_t dim, std::size_t num_arms, std::size_t horizon,
                                      double delta);
double linear_phase_length_raw(int m, std::size_t dim, std::size_t num_arms, std::size_t horizon, double delta);
double linear_epsilon(std::size_t phase_length, std::size_t dim, std::size_t num_arms, std::size_t horizon,
                      double delta);

/// U_m(a) = ceil(omega(a) (d ln(4TK/delta))^{1/3} T_m^{2/3}) for each weight.
std::vector<std::size_t> bad_arm_schedule(const Vec& weights, std::size_t dim, std::size_t num_arms,
                                          std::size_t horizon, double delta, std::size_t phase_length);

/// min{2d + 1/T, max_b <c, b - a> + (1 + 32d) eps_prev + 1/T}.
double linear_enlarged_incentive(const Vec& center, ArmIndex arm, const ArmSet& arms, double eps_prev,
                                 std::size_t horizon);

/// nu_hat = V^-1 sum_t A_t X_t. Throws InvariantError unless V is positive definite.
Vec ols_principal_estimate(const Mat& design_matrix, const Vec& response);

/// Eliminates a iff max_{b in A_m} <nu_hat + c', b - a> > (7 + 32d) eps_m.
std::pair<ArmList, ArmList> linear_offline_eliminate(const ArmList& active, const ArmList& bad, const ArmSet& arms,
                                                     const Vec& nu_hat, const Vec& center, double eps);

/// What a phase of the linear principal computed.
struct LinearPhaseRecord {
  int phase = 0;
  std::size_t length = 0;  // T_m
  double epsilon = 0.0;
  double epsilon_prev = 0.0;
  Vec bad_weights;                   // omega_m over B_m (in B_m order)
  std::vector<std::size_t> bad_rounds;     // U_m(a)
  Vec active_weights;                // rho_m over A_m
  std::vector<std::size_t> active_rounds;  // ceil(rho_m(a) T_m)
  std::vector<double> incentives;    // b_bar_{m,a} over A_m
  Vec center;                        // c_m
  Vec center_again;                  // c'_m
  Vec nu_hat;
  double min_design_eigenvalue = 0.0;
  std::vector<MspIteration> search_iterations;  // both MSP calls, in order
  bool witness_always_inside = true;
  double final_pair_width = 0.0;        // first call
  double final_pair_width_again = 0.0;  // second call
};

struct LinearOptions {
  double delta = 0.0;  // 0 selects 1/T
  double gamma = 1.0;
  MspOptions msp;
};

struct LinearLog {
  PrincipalLog base;
  std::vector<LinearPhaseRecord> phases;
};

/// Runs the phased linear principal against a channel. `rng` feeds the
/// Monte Carlo geometry.
LinearLog run_linear_principal(const ArmSet& arms, InteractionChannel& channel, Engine& rng,
                               const LinearOptions& options);

struct LinearRunOutput {
  Game game;
  LinearLog log;
};

/// Builds the game (linear model, non-exploring linear agent) and runs it.
LinearRunOutput run_linear_principal(const GameSetup& setup, const LinearOptions& options);

}  // namespace pagame
