#pragma once

#include "pagame/types.hpp"

namespace pagame {

/// Weights over a finite set of vectors (rows of Z) with the leverage
/// certificate max_z ||z||^2_{G^-1} <= C r, r being the dimension of span(Z).
struct DesignWeights {
  Vec weights;             // one entry per row of Z, summing to 1
  std::vector<std::size_t> support;  // rows with positive weight
  Mat gram;                // G = sum_z w(z) z z^T in the ambient space
  double max_leverage = 0.0;
  std::size_t rank = 0;
  std::size_t iterations = 0;
};

/// Leverages ||z||^2_{G^-1} of every row of Z under `weights`, measured in the span of Z.
Vec design_leverages(const Mat& Z, const Vec& weights);

/// Frank-Wolfe (Fedorov-Wynn steps) on log det G from the uniform design
/// over distinct rows. Identical rows share one weight (kept on the first
/// copy). Stops once max leverage <= C r; throws InvariantError after
/// `max_iterations` with the final leverage in the message.
DesignWeights approx_g_optimal_design(const Mat& Z, double C = 2.0, std::size_t max_iterations = 10000);

}  // namespace pagame
