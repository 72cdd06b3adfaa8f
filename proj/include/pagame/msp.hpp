#pragma once

#include "pagame/channel.hpp"
#include "pagame/convex_body.hpp"
#include "pagame/reward_model.hpp"
#include "pagame/rng.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace pagame {

struct MspOptions {
  std::size_t n_samples = 20000;
  double kappa = 0.05;
  /// Harness-only: a point that should survive every cut (s*).
  std::optional<Vec> witness;
  /// Also estimate the Steiner-potential drop of each cut.
  bool measure_potential = false;
  int phase = 0;
};

struct MspIteration {
  std::size_t round = 0;
  ArmIndex first = 0;   // a^1
  ArmIndex second = 0;  // a^2
  double width = 0.0;   // width(S_t, x_t)
  int index = 0;        // largest i with width <= 2^-i
  double z = 0.0;
  double y = 0.0;
  double shift = 0.0;   // common offset that keeps both incentives nonnegative
  bool chose_first = false;
  bool witness_inside = true;
  /// Share of the S_t + zB samples that remain in S_{t+1} + zB (NaN when not measured).
  double potential_ratio = std::numeric_limits<double>::quiet_NaN();
};

struct MspResult {
  Vec center;
  ConvexBody body{1};
  std::vector<MspIteration> iterations;
  bool witness_always_inside = true;
  /// max over arm pairs of width(S, a - b) at return.
  double final_pair_width = 0.0;
};

/// Multiscale Steiner-potential search with conservative cuts. Each round
/// picks the arm difference of largest width, halves the inflated body with
/// a two-arm incentive, and keeps the side consistent with the agent's
/// choice widened by eps. Stops when the scale index is fine enough relative
/// to eps and returns the sample mean of the remaining body.
/// Throws InvariantError if the body becomes empty.
MspResult msp_search(const ArmSet& arms, double eps, double xi, InteractionChannel& channel, Engine& rng,
                     const MspOptions& options = {});

/// max over distinct arm pairs of width(body, a - b).
double max_pair_width(const ConvexBody& body, const ArmSet& arms);

/// z_i = 2^-i / (8d).
double msp_radius(int index, std::size_t dim);

/// Largest integer i with width <= 2^-i.
int msp_scale_index(double width);

}  // namespace pagame
