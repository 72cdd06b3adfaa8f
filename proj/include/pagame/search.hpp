#pragma once

#include "pagame/channel.hpp"

namespace pagame {

/// Which return statement ended the asymmetric-check search.
enum class SearchExit {
  bisection_converged,  // C1 reached ceil(log2 T) on a successful probe
  check_converged,      // a successful re-probe with C2 = ceil(log2 T) or C1 spent
  check_failed,         // the re-probe of y_upper failed
};

struct SearchResult {
  double value = 0.0;
  SearchExit exit = SearchExit::bisection_converged;
  std::size_t rounds = 0;
  std::size_t end_round = 0;  // 1-based round of the last probe
  // Public counts read right before the final probe.
  std::size_t target_plays = 0;
  std::size_t min_plays = 0;
};

/// Binary search with asymmetric check for the smallest one-hot incentive
/// that makes the agent play `target`. Lasts at most 2 ceil(log2 T) rounds.
/// Propagates HorizonReached when the channel runs out mid-search.
SearchResult noisy_binary_search(ArmIndex target, InteractionChannel& channel, int phase = 0);

/// Plain ceil(log2 T)-probe bisection returning the upper end of the final
/// bracket. Suited to agents whose means never move.
SearchResult plain_binary_search(ArmIndex target, InteractionChannel& channel, int phase = 0);

}  // namespace pagame
