#pragma once

#include "pagame/convex_body.hpp"
#include "pagame/rng.hpp"

#include <vector>

namespace pagame {

/// Uniform draws from S + z B(0,1); rows of `points` are samples.
struct SampleSet {
  Mat points;
  double z = 0.0;
  std::size_t proposals = 0;
};

/// Rejection sampler over the bounding box of S + z B(0,1) taken in the
/// orthonormal frame whose columns are `frame` (identity when empty).
/// Throws InvariantError when more than 99.99% of proposals are rejected.
SampleSet sample_inflated(const ConvexBody& body, double z, std::size_t n_samples, Engine& rng,
                          const Mat& frame = Mat());

/// Principal axes of a point cloud (eigenvectors of its covariance), or the
/// identity for fewer than dim+1 points.
Mat principal_frame(const Mat& points, std::size_t dim);

/// Membership of each row of `points` in S + z B(0,1).
std::vector<char> inflated_membership(const ConvexBody& body, double z, const Mat& points);

/// Share of rows with <v, x> >= threshold.
double fraction_above(const Mat& points, const Vec& x, double threshold);

/// Monte Carlo estimate of Vol{v in S+zB : <v,x> >= threshold} / Vol(S+zB).
double volume_fraction_above(const ConvexBody& body, double z, const Vec& x, double threshold, Engine& rng,
                             std::size_t n_samples);

struct HalvingCut {
  double y = 0.0;
  double fraction = 0.0;  // share of samples on the upper side of (y - eps)/scale
  int steps = 0;
};

/// Bisection on y over [-scale(1+z)+eps, scale(1+z)+eps] until the share of
/// samples with <v,x> >= (y-eps)/scale lies in [0.5-kappa, 0.5+kappa].
HalvingCut halving_cut_on_samples(const Mat& points, const Vec& x, double scale, double eps, double z,
                                  double kappa);

/// Draws a fresh sample of S + zB and halves it along x.
double steiner_halving_cut(const ConvexBody& body, double z, const Vec& x, double scale, double eps, Engine& rng,
                           std::size_t n_samples = 20000, double kappa = 0.05);

}  // namespace pagame
