#include "pagame/volume.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>

namespace pagame {

namespace {

constexpr std::size_t kBatch = 4096;

}  // namespace

SampleSet sample_inflated(const ConvexBody& body, double z, std::size_t n_samples, Engine& rng, const Mat& frame) {
  const auto d = static_cast<Eigen::Index>(body.dim());
  const Mat q = frame.size() ? frame : Mat(Mat::Identity(d, d));
  Vec lo(d), hi(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Vec axis = q.col(k);
    hi[k] = body.support(axis) + z;
    lo[k] = -body.support(-axis) - z;
  }
  const Vec span = hi - lo;

  SampleSet out;
  out.z = z;
  out.points.resize(static_cast<Eigen::Index>(n_samples), d);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Mat& normals = body.normal_matrix();
  const Vec& offsets = body.offsets();
  Mat coords(static_cast<Eigen::Index>(kBatch), d);
  std::size_t accepted = 0;
  while (accepted < n_samples) {
    for (Eigen::Index r = 0; r < coords.rows(); ++r)
      for (Eigen::Index k = 0; k < d; ++k) coords(r, k) = lo[k] + span[k] * unit(rng);
    const Mat pts = coords * q.transpose();
    const Mat slacks = normals.rows() ? Mat((pts * normals.transpose()).rowwise() - offsets.transpose())
                                      : Mat(pts.rows(), 0);
    for (Eigen::Index r = 0; r < pts.rows() && accepted < n_samples; ++r) {
      ++out.proposals;
      const Vec v = pts.row(r).transpose();
      const Vec s = slacks.row(r).transpose();
      if (body.inflated_contains(v, z, s, v.norm()))
        out.points.row(static_cast<Eigen::Index>(accepted++)) = pts.row(r);
    }
    if (out.proposals >= n_samples && static_cast<double>(accepted) < 1e-4 * static_cast<double>(out.proposals))
      throw InvariantError("rejection sampler: more than 99.99% of proposals rejected (degenerate body)");
  }
  return out;
}

Mat principal_frame(const Mat& points, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (points.rows() <= d) return Mat::Identity(d, d);
  const Vec mean = points.colwise().mean().transpose();
  const Mat centered = points.rowwise() - mean.transpose();
  const Mat cov = centered.transpose() * centered / static_cast<double>(points.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Mat> eig(cov);
  if (eig.info() != Eigen::Success) return Mat::Identity(d, d);
  return eig.eigenvectors();
}

std::vector<char> inflated_membership(const ConvexBody& body, double z, const Mat& points) {
  std::vector<char> inside(static_cast<std::size_t>(points.rows()), 0);
  const Mat& normals = body.normal_matrix();
  const Mat slacks = normals.rows() ? Mat((points * normals.transpose()).rowwise() - body.offsets().transpose())
                                    : Mat(points.rows(), 0);
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    const Vec v = points.row(r).transpose();
    const Vec s = slacks.row(r).transpose();
    inside[static_cast<std::size_t>(r)] = body.inflated_contains(v, z, s, v.norm()) ? 1 : 0;
  }
  return inside;
}

double fraction_above(const Mat& points, const Vec& x, double threshold) {
  if (points.rows() == 0) return 0.0;
  const Vec proj = points * x;
  return static_cast<double>((proj.array() >= threshold).count()) / static_cast<double>(points.rows());
}

double volume_fraction_above(const ConvexBody& body, double z, const Vec& x, double threshold, Engine& rng,
                             std::size_t n_samples) {
  if (z < 0.0) throw ConfigError("inflation radius must be nonnegative");
  const SampleSet s = sample_inflated(body, z, n_samples, rng);
  return fraction_above(s.points, x, threshold);
}

HalvingCut halving_cut_on_samples(const Mat& points, const Vec& x, double scale, double eps, double z,
                                  double kappa) {
  if (!(scale > 0.0)) throw ConfigError("halving cut needs a positive scale");
  const Vec proj = points * x;
  const double n = static_cast<double>(points.rows());
  auto share = [&](double y) {
    const double threshold = (y - eps) / scale;
    return static_cast<double>((proj.array() >= threshold).count()) / n;
  };
  double lo = -scale * (1.0 + z) + eps;
  double hi = scale * (1.0 + z) + eps;
  HalvingCut cut;
  if (share(lo) < 0.5 - kappa || share(hi) > 0.5 + kappa)
    throw InvariantError("halving cut: bisection interval does not bracket one half");
  for (int step = 0; step < 200; ++step) {
    const double mid = 0.5 * (lo + hi);
    const double f = share(mid);
    cut.steps = step + 1;
    if (f >= 0.5 - kappa && f <= 0.5 + kappa) {
      cut.y = mid;
      cut.fraction = f;
      return cut;
    }
    if (f > 0.5)
      lo = mid;
    else
      hi = mid;
  }
  throw InvariantError("halving cut: bisection did not reach the target share");
}

double steiner_halving_cut(const ConvexBody& body, double z, const Vec& x, double scale, double eps, Engine& rng,
                           std::size_t n_samples, double kappa) {
  const SampleSet s = sample_inflated(body, z, n_samples, rng);
  return halving_cut_on_samples(s.points, x, scale, eps, z, kappa).y;
}

}  // namespace pagame
