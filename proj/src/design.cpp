#include "pagame/design.hpp"

#include <Eigen/SVD>

#include <string>

namespace pagame {

namespace {

struct Reduced {
  Mat coords;  // rows of Z in an orthonormal basis of span(Z)
  std::size_t rank = 0;
};

Reduced reduce_to_span(const Mat& Z) {
  Eigen::JacobiSVD<Mat> svd(Z, Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  const double cutoff = 1e-10 * (s.size() ? s[0] : 0.0);
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > cutoff) ++r;
  return {Z * svd.matrixV().leftCols(r), static_cast<std::size_t>(r)};
}

Vec leverages(const Mat& Y, const Vec& w) {
  const Mat G = Y.transpose() * w.asDiagonal() * Y;
  const Eigen::LDLT<Mat> ldlt(G);
  const Mat sol = ldlt.solve(Y.transpose());
  return (Y.transpose().array() * sol.array()).colwise().sum().transpose();
}

}  // namespace

Vec design_leverages(const Mat& Z, const Vec& weights) {
  const Reduced red = reduce_to_span(Z);
  if (red.rank == 0) return Vec::Zero(Z.rows());
  return leverages(red.coords, weights);
}

DesignWeights approx_g_optimal_design(const Mat& Z, double C, std::size_t max_iterations) {
  const Eigen::Index n = Z.rows();
  if (n == 0) throw ConfigError("design needs at least one vector");
  const Reduced red = reduce_to_span(Z);
  if (red.rank == 0) throw ConfigError("design vectors are all zero");

  // Distinct rows only; duplicates keep zero weight.
  std::vector<Eigen::Index> rep;
  for (Eigen::Index i = 0; i < n; ++i) {
    bool dup = false;
    for (Eigen::Index j : rep)
      if (Z.row(i) == Z.row(j)) {
        dup = true;
        break;
      }
    if (!dup) rep.push_back(i);
  }

  Vec w = Vec::Zero(n);
  for (Eigen::Index i : rep) w[i] = 1.0 / static_cast<double>(rep.size());

  const double r = static_cast<double>(red.rank);
  DesignWeights out;
  out.rank = red.rank;
  for (std::size_t it = 0;; ++it) {
    const Vec lev = leverages(red.coords, w);
    Eigen::Index j = 0;
    const double top = lev.maxCoeff(&j);
    if (top <= C * r) {
      out.max_leverage = top;
      out.iterations = it;
      break;
    }
    if (it >= max_iterations)
      throw InvariantError("design did not converge; final max leverage " + std::to_string(top) +
                           " against bound " + std::to_string(C * r));
    const double step = (top / r - 1.0) / (top - 1.0);
    w *= 1.0 - step;
    w[j] += step;
  }

  out.weights = w;
  for (Eigen::Index i = 0; i < n; ++i)
    if (w[i] > 0.0) out.support.push_back(static_cast<std::size_t>(i));
  out.gram = Z.transpose() * w.asDiagonal() * Z;
  return out;
}

}  // namespace pagame
