#pragma once

#include "pagame/config.hpp"
#include "pagame/game.hpp"
#include "pagame/principal.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pagame {

struct InvariantCheck {
  std::string name;
  bool passed = true;
  bool hard = false;  // hard assertions drive the CLI exit code
  std::string detail;
};

struct EliminationEvent {
  ArmIndex arm = 0;
  int phase = 0;
};

struct RunSummary {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  std::size_t num_arms = 0;
  std::size_t dim = 0;
  double delta = 0.0;
  double gamma = 1.0;
  std::size_t rounds = 0;
  bool truncated = false;
  int phases_completed = 0;
  double cum_per_round = 0.0;
  double cum_oracle = 0.0;
  double cum_bar = 0.0;
  std::vector<EliminationEvent> eliminations;
  std::vector<InvariantCheck> checks;
  bool flagged = false;       // any check failed
  bool hard_failure = false;  // any hard check failed

  std::string to_json_line() const;
  static RunSummary from_json_line(const std::string& line);
};

/// Everything one seeded run produced.
struct RunResult {
  Transcript transcript;
  PrincipalLog log;
  RunSummary summary;
};

/// Runs one seed of a config and evaluates the harness invariants. Invariant
/// failures (including hard ones thrown by the library) are recorded and the
/// run is flagged rather than aborted.
RunResult run_single(const ExperimentConfig& config, std::uint64_t seed);

/// Harness-level checks on a finished transcript.
std::vector<InvariantCheck> check_transcript(const Transcript& transcript, std::size_t horizon, bool truncated,
                                             bool oracle_agent);

/// Runs every seed, writes <out>/<algo>-T<T>-seed<s>.csv per run (when
/// enabled) and appends one line per run to <out>/summary.jsonl.
std::vector<RunSummary> run_experiment(const ExperimentConfig& config);

struct ScalingPoint {
  std::size_t horizon = 0;
  std::size_t runs = 0;
  double mean_regret = 0.0;
  double normalized = 0.0;  // mean_regret / T^exponent
  double per_round = 0.0;   // mean_regret / T
};

struct ScalingReport {
  double exponent = 0.5;
  std::vector<ScalingPoint> points;  // ascending T
  /// Largest R(T_{k+1})/R(T_k), rescaled to a per-doubling factor.
  double max_adjacent_ratio = 0.0;
  double ratio_limit = 0.0;
  bool per_round_decreasing = true;
  bool flagged = false;
};

enum class RegretColumn { per_round, oracle, bar };

/// Mean regret per horizon, R/T^exponent, and the adjacent-doubling ratio
/// statistic. Flags when the ratio exceeds `ratio_limit` (0 selects 1.8 for
/// exponent <= 1/2 and 1.9 otherwise) or R/T fails to decrease.
ScalingReport scaling_report(const std::vector<RunSummary>& summaries, double exponent,
                             RegretColumn column = RegretColumn::per_round, std::size_t min_seeds = 10,
                             double ratio_limit = 0.0);

std::vector<RunSummary> load_summaries(const std::string& directory);

/// Rate exponent associated with an algorithm's regret guarantee.
double default_exponent(Algorithm algorithm);

}  // namespace pagame
