#include "pagame/msp.hpp"

#include "pagame/volume.hpp"

#include <cmath>

namespace pagame {

double msp_radius(int index, std::size_t dim) { return std::ldexp(1.0, -index) / (8.0 * static_cast<double>(dim)); }

int msp_scale_index(double width) {
  if (!(width > 0.0)) return 1000;
  int i = static_cast<int>(std::floor(-std::log2(width)));
  while (width > std::ldexp(1.0, -i)) --i;
  while (width <= std::ldexp(1.0, -(i + 1))) ++i;
  return i;
}

double max_pair_width(const ConvexBody& body, const ArmSet& arms) {
  double best = 0.0;
  for (ArmIndex a = 0; a < arms.size(); ++a)
    for (ArmIndex b = a + 1; b < arms.size(); ++b) {
      const Vec u = arms.feature(a) - arms.feature(b);
      if (u.norm() > 0.0) best = std::max(best, body.width(u));
    }
  return best;
}

MspResult msp_search(const ArmSet& arms, double eps, double xi, InteractionChannel& channel, Engine& rng,
                     const MspOptions& options) {
  if (!(eps > 0.0) || !(xi > 0.0)) throw ConfigError("msp_search needs eps > 0 and xi > 0");
  if (arms.kind() != ArmKind::linear) throw ConfigError("msp_search needs a linear arm set");
  const std::size_t d = arms.dim();
  const std::size_t K = arms.size();
  const double dd = static_cast<double>(d);

  MspResult out;
  out.body = ConvexBody(d);
  Mat frame;
  for (;;) {
    if (out.body.empty()) throw InvariantError("msp: search body became empty");

    ArmIndex a1 = 0, a2 = 0;
    double best = -1.0;
    Vec diff;
    for (ArmIndex a = 0; a < K; ++a)
      for (ArmIndex b = a + 1; b < K; ++b) {
        const Vec u = arms.feature(a) - arms.feature(b);
        if (!(u.norm() > 0.0)) continue;
        const double w = out.body.width(u);
        if (w > best) {
          best = w;
          a1 = a;
          a2 = b;
          diff = u;
        }
      }
    if (best < 0.0) throw ConfigError("msp_search needs two distinct arm features");
    const double scale = diff.norm();
    const Vec x = diff / scale;

    MspIteration it;
    it.first = a1;
    it.second = a2;
    it.width = out.body.width(x);
    it.index = msp_scale_index(it.width);
    it.z = msp_radius(it.index, d);
    if (it.z < 4.0 * eps / scale) break;

    const SampleSet samples = sample_inflated(out.body, it.z, options.n_samples, rng, frame);
    it.y = halving_cut_on_samples(samples.points, x, scale, eps, it.z, options.kappa).y;

    Incentive pi = Incentive::Zero(static_cast<Eigen::Index>(K));
    it.shift = std::max(0.0, -(dd + xi + it.y));
    pi[static_cast<Eigen::Index>(a1)] = dd + xi + it.shift;
    pi[static_cast<Eigen::Index>(a2)] = dd + xi + it.y + it.shift;
    channel.annotate({options.phase, Block::msp, std::nullopt});
    const Observation obs = channel.propose(pi);
    it.round = channel.rounds_used();
    it.chose_first = obs.arm == a1;

    ConvexBody next = it.chose_first ? out.body.cut(-x, -(it.y - eps) / scale)
                                     : out.body.cut(x, (it.y + eps) / scale);
    if (options.measure_potential) {
      const std::vector<char> kept = inflated_membership(next, it.z, samples.points);
      std::size_t count = 0;
      for (char k : kept) count += static_cast<std::size_t>(k);
      it.potential_ratio = static_cast<double>(count) / static_cast<double>(kept.size());
    }
    if (options.witness) {
      it.witness_inside = next.contains(*options.witness);
      out.witness_always_inside = out.witness_always_inside && it.witness_inside;
    }
    frame = principal_frame(samples.points, d);
    out.body = std::move(next);
    out.iterations.push_back(it);
  }

  const SampleSet interior = sample_inflated(out.body, 0.0, options.n_samples, rng, frame);
  out.center = interior.points.colwise().mean().transpose();
  out.final_pair_width = max_pair_width(out.body, arms);
  return out;
}

}  // namespace pagame
