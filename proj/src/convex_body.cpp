#include "pagame/convex_body.hpp"

#include "pagame/rng.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pagame {

namespace {

constexpr double kFeasTol = 1e-10;

/// Intersection of the hyperplanes of a tight set: min-norm point plus an
/// orthonormal basis of the directions left free.
struct AffinePiece {
  Vec x0;
  Mat free;  // d x k
};

std::optional<AffinePiece> affine_piece(const Mat& normals, const Vec& offsets, const std::vector<std::size_t>& tight,
                                        std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (tight.empty()) return AffinePiece{Vec::Zero(d), Mat::Identity(d, d)};
  const auto k = static_cast<Eigen::Index>(tight.size());
  Mat n(k, d);
  Vec c(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    n.row(r) = normals.row(static_cast<Eigen::Index>(tight[static_cast<std::size_t>(r)]));
    c[r] = offsets[static_cast<Eigen::Index>(tight[static_cast<std::size_t>(r)])];
  }
  Eigen::JacobiSVD<Mat> svd(n, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, s.size() ? s[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > cutoff) ++rank;
  Vec x0 = Vec::Zero(d);
  for (Eigen::Index j = 0; j < rank; ++j)
    x0 += svd.matrixV().col(j) * (svd.matrixU().col(j).dot(c) / s[j]);
  if ((n * x0 - c).norm() > 1e-9) return std::nullopt;
  return AffinePiece{std::move(x0), svd.matrixV().rightCols(d - rank)};
}

/// Closed-form optimum over (affine piece) intersected with the ball.
template <typename Objective>
std::optional<Vec> solve_piece(const AffinePiece& piece, const Objective& objective) {
  const double n2 = piece.x0.squaredNorm();
  if (n2 > 1.0 + kFeasTol) return std::nullopt;
  const double r = std::sqrt(std::max(0.0, 1.0 - n2));
  return objective(piece, r);
}

/// Randomized-incremental recursion: `prefix` is the processing order, and
/// the tight set grows whenever the current optimum violates a constraint.
template <typename Objective>
std::optional<Vec> incremental(const Mat& normals, const Vec& offsets, const std::vector<std::size_t>& order,
                               std::size_t prefix, std::vector<std::size_t>& tight, std::size_t dim,
                               const Objective& objective) {
  const auto piece = affine_piece(normals, offsets, tight, dim);
  if (!piece) return std::nullopt;
  std::optional<Vec> x = solve_piece(*piece, objective);
  if (!x) return std::nullopt;
  for (std::size_t i = 0; i < prefix; ++i) {
    const auto h = static_cast<Eigen::Index>(order[i]);
    if (normals.row(h).dot(*x) <= offsets[h] + kFeasTol) continue;
    if (std::find(tight.begin(), tight.end(), order[i]) != tight.end()) continue;
    tight.push_back(order[i]);
    x = incremental(normals, offsets, order, i, tight, dim, objective);
    tight.pop_back();
    if (!x) return std::nullopt;
  }
  return x;
}

struct LinearObjective {
  const Vec& u;
  std::optional<Vec> operator()(const AffinePiece& piece, double r) const {
    const Vec pu = piece.free * (piece.free.transpose() * u);
    const double len = pu.norm();
    if (len <= 1e-14 * std::max(1.0, u.norm())) return piece.x0;
    return Vec(piece.x0 + (r / len) * pu);
  }
};

struct ProjectionObjective {
  const Vec& v;
  std::optional<Vec> operator()(const AffinePiece& piece, double r) const {
    const Vec q = piece.free * (piece.free.transpose() * (v - piece.x0));
    const double len = q.norm();
    if (len <= r) return Vec(piece.x0 + q);
    return Vec(piece.x0 + (r / len) * q);
  }
};

}  // namespace

ConvexBody::ConvexBody(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ConfigError("convex body needs dimension >= 1");
  normals_.resize(0, static_cast<Eigen::Index>(dim));
  offsets_.resize(0);
}

ConvexBody ConvexBody::cut(const Vec& normal, double offset) const {
  if (normal.size() != static_cast<Eigen::Index>(dim_)) throw ConfigError("halfspace dimension mismatch");
  const double len = normal.norm();
  if (!(len > 0.0)) throw ConfigError("halfspace normal must be nonzero");
  ConvexBody out = *this;
  out.halfspaces_.push_back({normal / len, offset / len});
  const Eigen::Index m = normals_.rows();
  out.normals_.conservativeResize(m + 1, Eigen::NoChange);
  out.normals_.row(m) = (normal / len).transpose();
  out.offsets_.conservativeResize(m + 1);
  out.offsets_[m] = offset / len;
  // New constraint lands at a position drawn from a stream keyed by the count,
  // so the processing order is pseudo-random yet reproducible.
  Engine rng(splitmix64(static_cast<std::uint64_t>(m) + 0x9e3779b97f4a7c15ULL));
  std::uniform_int_distribution<std::size_t> pos(0, static_cast<std::size_t>(m));
  out.order_.insert(out.order_.begin() + static_cast<std::ptrdiff_t>(pos(rng)), static_cast<std::size_t>(m));
  return out;
}

double ConvexBody::max_slack(const Vec& v) const {
  if (halfspaces_.empty()) return -std::numeric_limits<double>::infinity();
  return (normals_ * v - offsets_).maxCoeff();
}

bool ConvexBody::contains(const Vec& v, double tol) const {
  return v.norm() <= 1.0 + tol && (halfspaces_.empty() || max_slack(v) <= tol);
}

std::optional<Vec> ConvexBody::maximizer(const Vec& u) const {
  std::vector<std::size_t> tight;
  return incremental(normals_, offsets_, order_, order_.size(), tight, dim_, LinearObjective{u});
}

double ConvexBody::support(const Vec& u) const {
  const auto x = maximizer(u);
  if (!x) throw InvariantError("convex body is empty");
  return u.dot(*x);
}

double ConvexBody::width(const Vec& u) const { return support(u) + support(-u); }

bool ConvexBody::empty() const { return !project(Vec::Zero(static_cast<Eigen::Index>(dim_))).has_value(); }

std::optional<Vec> ConvexBody::project(const Vec& v) const {
  std::vector<std::size_t> tight;
  return incremental(normals_, offsets_, order_, order_.size(), tight, dim_, ProjectionObjective{v});
}

double ConvexBody::distance(const Vec& v) const {
  const auto p = project(v);
  if (!p) throw InvariantError("convex body is empty");
  return (v - *p).norm();
}

bool ConvexBody::inflated_contains(const Vec& v, double z) const {
  const Vec slacks = halfspaces_.empty() ? Vec() : Vec(normals_ * v - offsets_);
  return inflated_contains(v, z, slacks, v.norm());
}

bool ConvexBody::inflated_contains(const Vec& v, double z, const Eigen::Ref<const Vec>& slacks, double norm) const {
  if (norm > 1.0 + z) return false;
  const double worst = slacks.size() ? slacks.maxCoeff() : -std::numeric_limits<double>::infinity();
  if (worst > z) return false;
  if (norm <= 1.0 && worst <= 0.0) return true;
  // Constraints with slack below -z hold strictly on the whole ball B(v, z),
  // so they cannot change whether S meets that ball.
  std::vector<std::size_t> near;
  for (std::size_t k = 0; k < order_.size(); ++k)
    if (slacks[static_cast<Eigen::Index>(order_[k])] >= -z) near.push_back(order_[k]);
  std::vector<std::size_t> tight;
  const auto p = incremental(normals_, offsets_, near, near.size(), tight, dim_, ProjectionObjective{v});
  return p && (v - *p).norm() <= z;
}

}  // namespace pagame
