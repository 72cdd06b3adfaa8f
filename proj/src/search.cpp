#include "pagame/search.hpp"

#include "pagame/agent.hpp"

#include <algorithm>

namespace pagame {

namespace {

double inverse_count(std::size_t n) { return 1.0 / static_cast<double>(std::max<std::size_t>(1, n)); }

}  // namespace

SearchResult noisy_binary_search(ArmIndex target, InteractionChannel& channel, int phase) {
  const std::size_t K = channel.num_arms();
  const double T = static_cast<double>(channel.horizon());
  const std::size_t log_t = ceil_log2(channel.horizon());
  channel.annotate({phase, Block::search, target});

  bool check = false;
  double y_upper = 1.0;
  double y_hi = 1.0;
  double y_lo = 0.0;
  std::size_t c1 = 0;
  std::size_t c2 = 0;

  SearchResult out;
  for (;;) {
    out.target_plays = channel.plays(target);
    out.min_plays = channel.min_plays();
    if (!check) {
      const double y_mid = 0.5 * (y_hi + y_lo);
      ++c1;
      const Observation obs = channel.propose(one_hot_incentive(target, y_mid, K));
      ++out.rounds;
      if (obs.arm == target) {
        if (c1 >= log_t) {
          out.value = y_mid + 1.0 / T;
          out.exit = SearchExit::bisection_converged;
          break;
        }
        y_upper = y_mid;
        y_hi = y_mid;
      } else {
        check = true;
        y_lo = y_mid;
      }
    } else {
      const Observation obs = channel.propose(one_hot_incentive(target, y_upper, K));
      ++out.rounds;
      if (obs.arm == target) {
        ++c2;
        // c1 >= log_t: no bisection budget left, so a passed re-probe also ends the search
        if (c2 == log_t || c1 >= log_t) {
          out.value = y_upper + 2.0 / T;
          out.exit = SearchExit::check_converged;
          break;
        }
        check = false;
      } else {
        out.value = y_upper + 1.0 / T + inverse_count(out.target_plays) + 2.0 * inverse_count(out.min_plays);
        out.exit = SearchExit::check_failed;
        break;
      }
    }
  }
  out.end_round = channel.rounds_used();
  return out;
}

SearchResult plain_binary_search(ArmIndex target, InteractionChannel& channel, int phase) {
  const std::size_t K = channel.num_arms();
  const std::size_t probes = std::max<std::size_t>(1, ceil_log2(channel.horizon()));
  channel.annotate({phase, Block::search, target});

  double y_hi = 1.0;
  double y_lo = 0.0;
  SearchResult out;
  for (std::size_t k = 0; k < probes; ++k) {
    out.target_plays = channel.plays(target);
    out.min_plays = channel.min_plays();
    const double y_mid = 0.5 * (y_hi + y_lo);
    const Observation obs = channel.propose(one_hot_incentive(target, y_mid, K));
    ++out.rounds;
    if (obs.arm == target)
      y_hi = y_mid;
    else
      y_lo = y_mid;
  }
  out.value = y_hi;
  out.exit = SearchExit::bisection_converged;
  out.end_round = channel.rounds_used();
  return out;
}

}  // namespace pagame
