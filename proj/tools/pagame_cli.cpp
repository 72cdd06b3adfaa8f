#include "pagame/config.hpp"
#include "pagame/experiment.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace pagame;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::string out;
  std::string algo;
  std::optional<std::size_t> horizon;
  std::optional<std::size_t> num_arms;
  std::optional<std::size_t> dim;
  std::optional<double> delta;
  std::optional<double> c0;
  std::optional<double> gamma;
  std::optional<std::size_t> mc_samples;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "single master seed");
  cmd->add_option("--seeds", o.seeds, "inclusive seed range A..B");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--algo", o.algo, "iid-online | iid-offline | explore | oracle-explore | linear");
  cmd->add_option("--K", o.num_arms, "number of arms (random model kinds)");
  cmd->add_option("--d", o.dim, "feature dimension (linear-random models)");
  cmd->add_option("--delta", o.delta, "confidence parameter (default 1/T)");
  cmd->add_option("--c0", o.c0, "exploration constant for agent and principal");
  cmd->add_option("--gamma", o.gamma, "schedule multiplier in (0,1]");
  cmd->add_option("--mc-samples", o.mc_samples, "Monte Carlo samples per geometric query");
}

// A runnable config for the algorithm when no file is given.
ExperimentConfig default_config(Algorithm algo) {
  ExperimentConfig c;
  c.algorithm = algo;
  if (algo == Algorithm::linear) {
    c.model.kind = ModelSpec::Kind::linear_random;
    c.model.num_arms = 8;
    c.model.dim = 2;
    c.model.agent_sigma = 0.1;
    c.model.principal_sigma = 0.1;
  } else {
    c.model.kind = ModelSpec::Kind::iid_random;
    c.model.num_arms = 5;
  }
  if (algo == Algorithm::explore) {
    c.agent.behavior.kind = AgentKind::exploratory_learner;
    c.agent.behavior.c0 = 1.0;
  } else if (algo == Algorithm::oracle_explore) {
    c.agent.behavior.kind = AgentKind::exploratory_oracle;
    c.agent.behavior.c0 = 1.0;
  }
  return c;
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig c;
  if (!o.config_path.empty()) {
    c = load_config(o.config_path);
    if (!o.algo.empty()) c.algorithm = parse_algorithm(o.algo);
  } else {
    c = default_config(o.algo.empty() ? Algorithm::iid_online : parse_algorithm(o.algo));
  }
  if (o.horizon) c.horizon = *o.horizon;
  if (o.delta) c.delta = *o.delta;
  if (o.gamma) c.gamma = *o.gamma;
  if (o.c0) {
    c.principal_c0 = *o.c0;
    c.agent.behavior.c0 = *o.c0;
  }
  if (o.mc_samples) c.mc_samples = *o.mc_samples;
  if (o.num_arms) {
    if (c.model.kind != ModelSpec::Kind::iid_random && c.model.kind != ModelSpec::Kind::linear_random)
      throw ConfigError("--K only applies to iid-random and linear-random models");
    c.model.num_arms = *o.num_arms;
  }
  if (o.dim) {
    if (c.model.kind != ModelSpec::Kind::linear_random)
      throw ConfigError("--d only applies to linear-random models");
    c.model.dim = *o.dim;
  }
  if (o.seed && !o.seeds.empty()) throw ConfigError("give --seed or --seeds, not both");
  if (o.seed) c.seeds = {*o.seed};
  if (!o.seeds.empty()) c.seeds = parse_seed_range(o.seeds);
  if (!o.out.empty()) c.output_dir = o.out;
  validate(c);
  return c;
}

void print_run(const RunSummary& s, bool verbose) {
  std::printf("%-14s T=%-8zu seed=%-4llu R=%.4f R_oracle=%.4f R_bar=%.4f phases=%d%s%s\n", s.algorithm.c_str(),
              s.horizon, static_cast<unsigned long long>(s.seed), s.cum_per_round, s.cum_oracle, s.cum_bar,
              s.phases_completed, s.flagged ? " FLAGGED" : "", s.hard_failure ? " HARD-FAILURE" : "");
  for (const auto& c : s.checks)
    if (verbose || !c.passed)
      std::printf("    [%s] %s%s%s\n", c.passed ? "ok" : (c.hard ? "HARD" : "FAIL"), c.name.c_str(),
                  c.detail.empty() ? "" : ": ", c.detail.c_str());
}

int exit_code(const std::vector<RunSummary>& runs) {
  for (const auto& s : runs)
    if (s.hard_failure) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repeated principal-agent bandit simulator"};
  app.require_subcommand(1);

  Overrides run_o, sweep_o, check_o;
  auto* run = app.add_subcommand("run", "run every seed of one config");
  add_common(run, run_o);
  run->add_option("--T", run_o.horizon, "horizon");

  auto* sweep = app.add_subcommand("sweep", "run a config over a grid of horizons");
  add_common(sweep, sweep_o);
  std::vector<std::size_t> grid;
  sweep->add_option("--T", grid, "horizons, e.g. --T 25000 50000 100000")->required()->delimiter(',');

  auto* check = app.add_subcommand("check", "run invariant suites only and print every check");
  add_common(check, check_o);
  check->add_option("--T", check_o.horizon, "horizon");

  auto* report = app.add_subcommand("report", "regret scaling over a summary directory");
  std::string report_dir = "out", report_algo, column_name = "perround";
  std::optional<double> exponent, ratio_limit;
  std::size_t min_seeds = 10;
  report->add_option("--out", report_dir, "directory holding summary .jsonl files");
  report->add_option("--algo", report_algo, "restrict to one algorithm (also picks the default exponent)");
  report->add_option("--exponent", exponent, "rate exponent (default from algorithm)");
  report->add_option("--column", column_name, "perround | oracle | bar")
      ->check(CLI::IsMember({"perround", "oracle", "bar"}));
  report->add_option("--min-seeds", min_seeds, "minimum runs per horizon");
  report->add_option("--ratio-limit", ratio_limit, "flag threshold on the per-doubling ratio");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ExperimentConfig c = resolve(run_o);
      const auto runs = run_experiment(c);
      for (const auto& s : runs) print_run(s, false);
      return exit_code(runs);
    }
    if (*sweep) {
      ExperimentConfig c = resolve(sweep_o);
      std::vector<RunSummary> all;
      for (std::size_t t : grid) {
        c.horizon = t;
        validate(c);
        for (auto& s : run_experiment(c)) {
          print_run(s, false);
          all.push_back(std::move(s));
        }
      }
      return exit_code(all);
    }
    if (*check) {
      ExperimentConfig c = resolve(check_o);
      c.write_transcripts = false;
      std::vector<RunSummary> runs;
      for (std::uint64_t seed : c.seeds) {
        runs.push_back(run_single(c, seed).summary);
        print_run(runs.back(), true);
      }
      return exit_code(runs);
    }
    if (*report) {
      std::vector<RunSummary> all = load_summaries(report_dir);
      std::vector<RunSummary> picked;
      for (auto& s : all)
        if (report_algo.empty() || s.algorithm == report_algo) picked.push_back(std::move(s));
      if (picked.empty()) throw ConfigError("no matching summaries in " + report_dir);
      const double e = exponent ? *exponent : default_exponent(parse_algorithm(picked.front().algorithm));
      const RegretColumn col = column_name == "oracle" ? RegretColumn::oracle
                               : column_name == "bar"  ? RegretColumn::bar
                                                       : RegretColumn::per_round;
      const ScalingReport rep = scaling_report(picked, e, col, min_seeds, ratio_limit.value_or(0.0));
      std::printf("%10s %6s %14s %14s %12s\n", "T", "runs", "mean R", "R/T^e", "R/T");
      for (const auto& p : rep.points)
        std::printf("%10zu %6zu %14.4f %14.6f %12.6f\n", p.horizon, p.runs, p.mean_regret, p.normalized,
                    p.per_round);
      std::printf("exponent %.4f  max per-doubling ratio %.4f (limit %.2f)  R/T decreasing: %s%s\n", rep.exponent,
                  rep.max_adjacent_ratio, rep.ratio_limit, rep.per_round_decreasing ? "yes" : "no",
                  rep.flagged ? "  FLAGGED" : "");
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
