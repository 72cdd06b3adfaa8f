#pragma once

#include "pagame/game.hpp"
#include "pagame/search.hpp"

#include <string>
#include <vector>

namespace pagame {

/// What one phase of a phased principal did.
struct PhaseLog {
  int phase = 0;
  std::size_t start_round = 0;  // rounds_used() when the phase began
  std::size_t end_round = 0;    // rounds_used() when the phase ended
  std::size_t exploration_budget = 0;  // T_m
  std::size_t bad_budget = 0;          // Z_m (iid) or sum of U_m(a) (linear)
  ArmList active;                      // A_m
  ArmList bad;                         // B_m
  ArmList eliminated;                  // A_m \ A_{m+1}
  std::vector<SearchResult> searches;
  bool completed = false;
};

/// Incentive testing and vote record of one active arm in one phase of the
/// exploration-robust principals.
struct ArmTestRecord {
  int phase = 0;
  ArmIndex arm = 0;
  std::vector<double> incentives;     // sorted, already enlarged
  std::vector<std::size_t> failures;  // c^(i)
  std::vector<std::size_t> rounds;    // Y^(i)
  std::size_t target_plays = 0;       // sum_i (Y^(i) - c^(i))
  std::size_t required_plays = 0;     // T_m
  std::vector<int> votes;             // L_{m,a} in probe order
  bool eliminated = false;
};

struct PrincipalLog {
  std::vector<PhaseLog> phases;
  std::vector<ArmTestRecord> tests;
  bool truncated = false;  // horizon hit mid-phase
  std::vector<std::string> invariant_failures;

  /// Phase in which `arm` left the active set, or 0 if it never did.
  int elimination_phase(ArmIndex arm) const;
};

/// Output of a full run: the game (transcript, final agent state) plus the
/// principal's own log.
struct RunOutput {
  Game game;
  PrincipalLog log;
};

/// max{1, ceil(gamma * raw)}: applies the schedule multiplier.
std::size_t scaled_count(double raw, double gamma);

/// Removes `arm` from `from` and appends it to `to`.
void move_arm(ArmList& from, ArmList& to, ArmIndex arm);

}  // namespace pagame
