#include "doctest.h"

#include "pagame/convex_body.hpp"
#include "pagame/design.hpp"
#include "pagame/msp.hpp"
#include "pagame/volume.hpp"
#include "support.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <random>

using namespace pagame;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

ConvexBody random_polytope(std::mt19937_64& rng, std::size_t dim, int cuts) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-0.2, 0.6);
  ConvexBody body(dim);
  for (int k = 0; k < cuts; ++k) {
    Vec n(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < n.size(); ++i) n[i] = g(rng);
    body = body.cut(n, u(rng) * n.norm());
  }
  return body;
}

// Distance to {||v|| <= 1, v_1 <= 0} in closed form.
double half_ball_distance(const Vec& v) {
  if (v[0] <= 0.0) return std::max(0.0, v.norm() - 1.0);
  return (v - v2(0.0, std::clamp(v[1], -1.0, 1.0))).norm();
}

}  // namespace

TEST_CASE("width of simple bodies") {
  const ConvexBody ball(2);
  CHECK(ball.width(v2(3, 4)) == doctest::Approx(10.0));
  const ConvexBody half = ball.cut(v2(1, 0), 0.0);
  CHECK(half.width(v2(1, 0)) == doctest::Approx(1.0));
  CHECK(half.support(v2(1, 0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(half.support(v2(-1, 0)) == doctest::Approx(1.0));
  CHECK(half.width(v2(0, 1)) == doctest::Approx(2.0));
}

TEST_CASE("cut rescales the halfspace to a unit normal") {
  const ConvexBody b = ConvexBody(2).cut(v2(2, 0), 1.0);
  CHECK(b.halfspaces()[0].normal.norm() == doctest::Approx(1.0));
  CHECK(b.halfspaces()[0].offset == doctest::Approx(0.5));
  CHECK(b.contains(v2(0.5, 0.0)));
  CHECK_FALSE(b.contains(v2(0.6, 0.0)));
}

TEST_CASE("support, width and projection agree with a dense grid") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  const double step = 2e-4;
  const int n = static_cast<int>(std::round(2.0 / step));
  int checked = 0;
  for (int trial = 0; trial < 4; ++trial) {
    const ConvexBody body = random_polytope(rng, 2, 2 + trial);
    if (body.empty()) continue;
    std::vector<Vec> dirs, probes;
    for (int q = 0; q < 4; ++q) {
      dirs.push_back(v2(g(rng), g(rng)).normalized());
      probes.push_back(1.6 * v2(g(rng), g(rng)));
    }
    std::vector<double> hi(4, -1e300), lo(4, 1e300), near(4, 1e300);
    const Mat& N = body.normal_matrix();
    const Vec& c = body.offsets();
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const double x = -1.0 + i * step, y = -1.0 + j * step;
        if (x * x + y * y > 1.0) continue;
        bool inside = true;
        for (Eigen::Index h = 0; h < N.rows() && inside; ++h) inside = N(h, 0) * x + N(h, 1) * y <= c[h];
        if (!inside) continue;
        for (int q = 0; q < 4; ++q) {
          const double s = dirs[q][0] * x + dirs[q][1] * y;
          hi[q] = std::max(hi[q], s);
          lo[q] = std::min(lo[q], s);
          near[q] = std::min(near[q], std::hypot(probes[q][0] - x, probes[q][1] - y));
        }
      }
    for (int q = 0; q < 4; ++q) {
      const Vec& u = dirs[q];
      CHECK(std::abs(body.support(u) - hi[q]) <= 1e-3);
      CHECK(std::abs(body.width(u) - (hi[q] - lo[q])) <= 1e-3);
      const auto x = body.maximizer(u);
      REQUIRE(x.has_value());
      CHECK(body.contains(*x, 1e-9));
      CHECK(u.dot(*x) == doctest::Approx(body.support(u)));

      const Vec& v = probes[q];
      CHECK(std::abs(body.distance(v) - near[q]) <= 1e-3);
      const auto proj = body.project(v);
      REQUIRE(proj.has_value());
      CHECK(body.contains(*proj, 1e-9));
      CHECK(((v - *proj).norm() - body.distance(v)) == doctest::Approx(0.0));
      ++checked;
    }
  }
  CHECK(checked >= 8);
}

TEST_CASE("empty bodies") {
  const ConvexBody b = ConvexBody(2).cut(v2(1, 0), -0.5).cut(v2(-1, 0), -0.5);
  CHECK(b.empty());
  CHECK_FALSE(b.maximizer(v2(1, 0)).has_value());
  CHECK_THROWS_AS(b.width(v2(1, 0)), InvariantError);
  CHECK_FALSE(ConvexBody(3).cut(Vec::Ones(3), 0.2).empty());
}

TEST_CASE("inflated membership matches the distance") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.8, 1.8);
  for (int trial = 0; trial < 5; ++trial) {
    const ConvexBody body = random_polytope(rng, 3, 5);
    if (body.empty()) continue;
    for (int k = 0; k < 400; ++k) {
      Vec v(3);
      v << u(rng), u(rng), u(rng);
      for (double z : {0.0, 0.05, 0.3}) {
        const double d = body.distance(v);
        if (std::abs(d - z) < 1e-9) continue;
        CHECK(body.inflated_contains(v, z) == (d <= z));
      }
    }
  }
}

TEST_CASE("volume fractions") {
  Engine rng(4);
  const ConvexBody ball(2);
  const std::size_t n = 20000;
  CHECK(std::abs(volume_fraction_above(ball, 0.0, v2(1, 0), 0.0, rng, n) - 0.5) <= 3.0 / std::sqrt(n));
  CHECK(volume_fraction_above(ball, 0.3, v2(1, 0), -1.3, rng, n) == 1.0);

  // half ball inflated by 0.5 against an independent rejection estimate with closed-form distances
  const ConvexBody half = ball.cut(v2(1, 0), 0.0);
  const double threshold = -4.0 / (3.0 * M_PI);
  const double est = volume_fraction_above(half, 0.5, v2(1, 0), threshold, rng, n);
  std::mt19937_64 ind(77);
  std::uniform_real_distribution<double> box(-1.5, 1.5);
  std::size_t inside = 0, above = 0;
  while (inside < 1000000) {
    const Vec p = v2(box(ind), box(ind));
    if (half_ball_distance(p) > 0.5) continue;
    ++inside;
    if (p[0] >= threshold) ++above;
  }
  const double ref = static_cast<double>(above) / 1e6;
  const double se = std::sqrt(ref * (1 - ref) / n + ref * (1 - ref) / 1e6);
  CHECK(std::abs(est - ref) <= 3.0 * se);
}

TEST_CASE("sampler draws from the inflated body") {
  Engine rng(12);
  const ConvexBody body = ConvexBody(2).cut(v2(1, 1), 0.1).cut(v2(-1, 0.2), 0.3);
  const SampleSet s = sample_inflated(body, 0.1, 5000, rng);
  CHECK(s.points.rows() == 5000);
  CHECK(s.proposals >= 5000);
  for (Eigen::Index i = 0; i < s.points.rows(); ++i) CHECK(body.distance(s.points.row(i).transpose()) <= 0.1 + 1e-12);
  const Mat frame = principal_frame(s.points, 2);
  CHECK((frame.transpose() * frame).isIdentity(1e-9));
  const SampleSet framed = sample_inflated(body, 0.1, 2000, rng, frame);
  for (Eigen::Index i = 0; i < framed.points.rows(); ++i)
    CHECK(body.distance(framed.points.row(i).transpose()) <= 0.1 + 1e-12);
}

TEST_CASE("halving cut") {
  Engine rng(5);
  const ConvexBody ball(2);
  CHECK(std::abs(steiner_halving_cut(ball, 0.0, v2(1, 0), 1.0, 0.0, rng)) <= 0.06);
  CHECK(std::abs(steiner_halving_cut(ball, 0.0, v2(1, 0), 1.0, 0.2, rng) - 0.2) <= 0.06);

  const ConvexBody skew = ball.cut(v2(1, 0.5), 0.2).cut(v2(-0.3, 1), 0.4);
  const Vec x = v2(0.6, 0.8);
  const double scale = 1.3, eps = 0.05, z = 0.1;
  const double y = steiner_halving_cut(skew, z, x, scale, eps, rng);
  Engine fresh(999);
  const SampleSet check = sample_inflated(skew, z, 100000, fresh);
  const double f = fraction_above(check.points, x, (y - eps) / scale);
  CHECK(f >= 0.45);
  CHECK(f <= 0.55);
}

TEST_CASE("scale index and radius") {
  CHECK(msp_scale_index(0.3) == 1);
  CHECK(msp_scale_index(0.25) == 2);
  CHECK(msp_scale_index(1.0) == 0);
  CHECK(msp_scale_index(2.0) == -1);
  CHECK(msp_scale_index(1.5) == -1);
  CHECK(msp_radius(3, 2) == doctest::Approx(1.0 / 128));
}

TEST_CASE("design on the standard basis is uniform") {
  for (int d = 1; d <= 4; ++d) {
    const DesignWeights w = approx_g_optimal_design(Mat::Identity(d, d));
    CHECK(w.weights.isApprox(Vec::Constant(d, 1.0 / d)));
    CHECK(w.max_leverage == doctest::Approx(static_cast<double>(d)));
    CHECK(w.rank == static_cast<std::size_t>(d));
  }
}

TEST_CASE("design collapses duplicate rows") {
  const int d = 3;
  Mat Z(2 * d - 1, d);
  Z.setZero();
  for (int k = 0; k < d; ++k) Z(k, 0) = 1.0;
  for (int k = 1; k < d; ++k) Z(d - 1 + k, k) = 1.0;
  const DesignWeights w = approx_g_optimal_design(Z);
  CHECK(w.weights.sum() == doctest::Approx(1.0));
  CHECK(w.weights[1] == 0.0);
  CHECK(w.weights[2] == 0.0);
  CHECK(w.max_leverage <= 2.0 * d + 1e-9);
}

TEST_CASE("design certificate by direct leverage evaluation") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    Mat Z(8, 2);
    for (int k = 0; k < 8; ++k) Z.row(k) = v2(g(rng), g(rng)).normalized().transpose();
    const DesignWeights w = approx_g_optimal_design(Z);
    Mat G = Mat::Zero(2, 2);
    for (int k = 0; k < 8; ++k) G += w.weights[k] * Z.row(k).transpose() * Z.row(k);
    const Eigen::LLT<Mat> llt(G);
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) worst = std::max(worst, Z.row(k).dot(llt.solve(Z.row(k).transpose())));
    CHECK(worst <= 4.0 + 1e-9);
    CHECK(worst == doctest::Approx(w.max_leverage).epsilon(1e-9));
    CHECK((w.weights.array() >= 0.0).all());
  }
}

TEST_CASE("design in a proper subspace measures leverage within the span") {
  Mat Z(3, 3);
  Z << 1, 0, 0, 0, 1, 0, 0.6, 0.8, 0;
  const DesignWeights w = approx_g_optimal_design(Z);
  CHECK(w.rank == 2);
  CHECK(w.max_leverage <= 4.0 + 1e-9);
}

TEST_CASE("design reports non-convergence") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat Z(30, 4);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 4; ++j) Z(i, j) = g(rng);
  CHECK_THROWS_AS(approx_g_optimal_design(Z, 1.0001, 2), InvariantError);
}

TEST_CASE("multiscale search keeps s* and shrinks every pair width") {
  Mat arms(4, 2);
  arms << 1, 0, 0, 1, -0.7, 0.7, 0.6, -0.8;
  const Vec s_star = v2(0.3, -0.2);
  GameSetup s;
  s.arms = ArmSet::linear(arms);
  s.model = RewardModel::linear(s_star, v2(0.1, 0.1), 0.0, 0.0);
  s.initial_state = AgentState::pinned(arms * s_star);
  s.behavior.kind = AgentKind::oracle;
  s.horizon = 100000;
  for (double eps : {0.1, 0.05}) {
    Game game = make_game(s);
    Engine rng(3);
    MspOptions opt;
    opt.witness = s_star;
    opt.measure_potential = true;
    const MspResult r = msp_search(s.arms, eps, 1e-5, game, rng, opt);
    CHECK(r.witness_always_inside);
    for (const auto& it : r.iterations) CHECK(it.witness_inside);
    CHECK(r.final_pair_width <= 32.0 * 2 * eps);
    double worst = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) worst = std::max(worst, (r.center - s_star).dot(arms.row(a) - arms.row(b)));
    CHECK(worst <= 32.0 * 2 * eps);
    CHECK(game.rounds_used() == r.iterations.size());
    std::size_t dropped = 0;
    for (const auto& it : r.iterations) {
      dropped += it.potential_ratio <= 0.93 ? 1 : 0;
      CHECK(it.shift >= 0.0);
    }
    CHECK(static_cast<double>(dropped) >= 0.9 * static_cast<double>(r.iterations.size()));
  }
}
