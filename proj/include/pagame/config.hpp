#pragma once

#include "pagame/agent.hpp"
#include "pagame/game.hpp"
#include "pagame/reward_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pagame {

enum class Algorithm { iid_online, iid_offline, explore, oracle_explore, linear };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& name);

/// Reward environment as written in a config file. Explicit kinds carry
/// their parameters; the random kinds draw an instance from `instance_seed`
/// so every seed of a sweep sees the same environment.
struct ModelSpec {
  enum class Kind { iid, linear, iid_random, linear_random };
  Kind kind = Kind::iid;

  // iid
  std::vector<RewardDistribution> principal;
  std::vector<RewardDistribution> agent;

  // linear
  Mat arms;  // K x d
  Vec s_star;
  Vec nu_star;
  double agent_sigma = 0.0;
  double principal_sigma = 0.0;

  // random kinds
  std::size_t num_arms = 0;
  std::size_t dim = 0;
  RewardDistribution::Shape shape = RewardDistribution::Shape::bernoulli;
  std::uint64_t instance_seed = 0;
};

struct AgentSpec {
  AgentBehavior behavior;
  std::optional<Vec> initial_means;     // iid learners
  std::optional<Vec> initial_estimate;  // linear learners
};

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::iid_online;
  std::size_t horizon = 10000;
  std::optional<double> delta;  // unset selects 1/T
  double gamma = 1.0;
  double principal_c0 = 1.0;
  AgentSpec agent;
  ModelSpec model;
  std::size_t mc_samples = 20000;
  double mc_kappa = 0.05;
  std::vector<std::uint64_t> seeds{0};
  std::string output_dir = "out";
  bool write_transcripts = true;

  double effective_delta() const { return delta ? *delta : 1.0 / static_cast<double>(horizon); }
};

std::string to_json_text(const ExperimentConfig& config);
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Rejects incompatible algorithm / agent / model combinations and
/// out-of-range knobs with a ConfigError naming the problem.
void validate(const ExperimentConfig& config);

/// Concrete arms and rewards for a config (random kinds are drawn here).
std::pair<ArmSet, RewardModel> build_environment(const ExperimentConfig& config);

/// Game ingredients for one seed.
GameSetup build_setup(const ExperimentConfig& config, std::uint64_t seed);

/// Parses "A..B" (inclusive) or a single integer.
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

}  // namespace pagame
