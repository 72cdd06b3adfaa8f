#pragma once

#include "pagame/types.hpp"

#include <optional>
#include <vector>

namespace pagame {

/// <v, normal> <= offset, with a unit-length normal.
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

/// B(0,1) intersected with an append-only list of halfspaces.
///
/// Linear maximization and Euclidean projection are solved exactly by a
/// randomized incremental (Seidel-type) method: the optimum with a given set
/// of tight constraints has a closed form on the intersection of an affine
/// subspace with the ball, and violated constraints are added to the tight
/// set recursively. Ties in linear maximization are resolved toward the
/// minimum-norm maximizer, which keeps the optimum unique.
class ConvexBody {
 public:
  explicit ConvexBody(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }

  /// Copy with <v, normal> <= offset added; the pair is rescaled so the normal has unit length.
  ConvexBody cut(const Vec& normal, double offset) const;

  /// max_j (<v, u_j> - c_j), or -inf without halfspaces.
  double max_slack(const Vec& v) const;
  bool contains(const Vec& v, double tol = 1e-9) const;

  /// argmax_{x in S} <u, x>, or nullopt when S is empty.
  std::optional<Vec> maximizer(const Vec& u) const;
  /// max_{x in S} <u, x>. Throws InvariantError on an empty body.
  double support(const Vec& u) const;
  /// max_{x,y in S} <u, x - y>. Throws InvariantError on an empty body.
  double width(const Vec& u) const;
  bool empty() const;

  /// Euclidean projection onto S, or nullopt when S is empty.
  std::optional<Vec> project(const Vec& v) const;
  /// dist(v, S). Throws InvariantError on an empty body.
  double distance(const Vec& v) const;

  /// dist(v, S) <= z, i.e. v in S + z B(0,1). Cheap rejections and
  /// acceptances first; otherwise an exact projection using only the
  /// halfspaces that can be active within distance z of v.
  bool inflated_contains(const Vec& v, double z) const;

  /// Same test with precomputed slacks <v,u_j> - c_j and norm ||v||.
  bool inflated_contains(const Vec& v, double z, const Eigen::Ref<const Vec>& slacks, double norm) const;

  /// Halfspace normals stacked as rows and offsets, for batched slack evaluation.
  const Mat& normal_matrix() const { return normals_; }
  const Vec& offsets() const { return offsets_; }

 private:
  std::size_t dim_;
  std::vector<Halfspace> halfspaces_;
  Mat normals_;  // rows are unit normals
  Vec offsets_;
  std::vector<std::size_t> order_;  // fixed pseudo-random processing order
};

}  // namespace pagame
