#include "pagame/experiment.hpp"

#include "pagame/explore_principal.hpp"
#include "pagame/iid_principal.hpp"
#include "pagame/linear_principal.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pagame {

using nlohmann::json;

namespace {

bool zero_noise(const RewardModel& model) {
  if (model.kind == ArmKind::linear) return model.agent_noise_sigma == 0.0 && model.principal_noise_sigma == 0.0;
  auto point = [](const RewardDistribution& d) { return d.shape == RewardDistribution::Shape::point; };
  return std::all_of(model.principal.begin(), model.principal.end(), point) &&
         std::all_of(model.agent.begin(), model.agent.end(), point);
}

InvariantCheck make_check(std::string name, bool passed, std::string detail = {}, bool hard = false) {
  return {std::move(name), passed, hard, std::move(detail)};
}

/// Searched-incentive window for every asymmetric-check search of a
/// non-exploring run, measured against the agent's state at the exit round.
InvariantCheck search_window_check(const PrincipalLog& log, const Transcript& tr, std::size_t horizon) {
  const double T = static_cast<double>(horizon);
  const double log_t = static_cast<double>(ceil_log2(horizon));
  std::size_t bad = 0, total = 0;
  std::ostringstream first;
  for (const PhaseLog& p : log.phases)
    for (const SearchResult& s : p.searches) {
      if (s.end_round == 0 || s.end_round > tr.size()) continue;
      const RoundRecord& row = tr[s.end_round - 1];
      const double gap = s.value - row.target_optimal_incentive;
      const double bound = 4.0 / T + log_t / static_cast<double>(std::max<std::size_t>(1, s.target_plays)) +
                           2.0 / static_cast<double>(std::max<std::size_t>(1, s.min_plays));
      ++total;
      if (!(gap > 0.0 && gap <= bound + 1e-12)) {
        if (bad++ == 0) first << "round " << s.end_round << ": gap " << gap << " bound " << bound;
      }
    }
  return make_check("search-window", bad == 0,
                    std::to_string(bad) + " of " + std::to_string(total) + " outside" +
                        (bad ? "; first at " + first.str() : std::string()));
}

InvariantCheck search_duration_check(const PrincipalLog& log, std::size_t horizon) {
  const std::size_t cap = 2 * ceil_log2(horizon);
  std::size_t bad = 0;
  for (const PhaseLog& p : log.phases)
    for (const SearchResult& s : p.searches) bad += s.rounds > cap ? 1 : 0;
  return make_check("search-duration", bad == 0, std::to_string(bad) + " searches over " + std::to_string(cap));
}

InvariantCheck target_play_check(const Transcript& tr) {
  std::size_t misses = 0, scheduled = 0;
  for (const RoundRecord& r : tr) {
    if (!r.target || (r.block != Block::explore && r.block != Block::stabilize)) continue;
    ++scheduled;
    if (r.arm != *r.target) ++misses;
  }
  return make_check("target-play", misses == 0,
                    std::to_string(misses) + " misses in " + std::to_string(scheduled) + " scheduled rounds");
}

InvariantCheck survival_check(const PrincipalLog& log, ArmIndex best) {
  const int phase = log.elimination_phase(best);
  return make_check("optimal-arm-survival", phase == 0,
                    phase == 0 ? std::string() : "arm " + std::to_string(best) + " eliminated in phase " +
                                                     std::to_string(phase));
}

InvariantCheck partition_check(const PrincipalLog& log, std::size_t K) {
  for (const PhaseLog& p : log.phases) {
    std::vector<int> seen(K, 0);
    for (ArmIndex a : p.active) ++seen[a];
    for (ArmIndex a : p.bad) ++seen[a];
    if (std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; }))
      return make_check("arm-partition", false, "phase " + std::to_string(p.phase));
  }
  return make_check("arm-partition", true);
}

InvariantCheck phase_budget_check(const PrincipalLog& log) {
  for (const PhaseLog& p : log.phases) {
    if (!p.completed) continue;
    std::size_t search = 0;
    for (const SearchResult& s : p.searches) search += s.rounds;
    const std::size_t expected =
        p.bad.size() * p.bad_budget + search + p.active.size() * p.exploration_budget + p.active.size();
    if (p.end_round - p.start_round != expected)
      return make_check("phase-budget", false,
                        "phase " + std::to_string(p.phase) + ": " + std::to_string(p.end_round - p.start_round) +
                            " rounds, expected " + std::to_string(expected));
  }
  return make_check("phase-budget", true);
}

}  // namespace

std::vector<InvariantCheck> check_transcript(const Transcript& tr, std::size_t horizon, bool truncated,
                                             bool oracle_agent) {
  std::vector<InvariantCheck> out;
  double a = 0.0, b = 0.0, c = 0.0;
  bool prefix = true, dominance = true, oracle_match = true;
  for (const RoundRecord& r : tr) {
    a += r.regret_per_round;
    b += r.regret_oracle;
    c += r.regret_bar;
    prefix = prefix && a == r.cum_per_round && b == r.cum_oracle && c == r.cum_bar;
    dominance = dominance && r.regret_bar >= r.regret_oracle - 1e-12;
    oracle_match = oracle_match && std::abs(r.regret_per_round - r.regret_oracle) <= 1e-12;
  }
  out.push_back(make_check("ledger-prefix-sum", prefix));
  out.push_back(make_check("bar-dominates-oracle", dominance));
  out.push_back(make_check("round-conservation", tr.size() == horizon || (truncated && tr.size() <= horizon),
                           std::to_string(tr.size()) + " rounds of " + std::to_string(horizon)));
  if (oracle_agent) out.push_back(make_check("oracle-ledger-match", oracle_match));
  return out;
}

RunResult run_single(const ExperimentConfig& config, std::uint64_t seed) {
  const GameSetup setup = build_setup(config, seed);
  Game game = make_game(setup);
  const double delta = config.effective_delta();
  const std::size_t T = config.horizon;
  const bool quiet = zero_noise(setup.model);
  const bool greedy = !setup.behavior.explores();

  RunResult res;
  std::vector<InvariantCheck> checks;
  std::vector<LinearPhaseRecord> linear_phases;
  try {
    switch (config.algorithm) {
      case Algorithm::iid_online:
      case Algorithm::iid_offline: {
        IidOptions opt;
        opt.delta = delta;
        opt.gamma = config.gamma;
        opt.variant = config.algorithm == Algorithm::iid_online ? EliminationVariant::online
                                                                : EliminationVariant::offline;
        res.log = run_iid_principal(game, opt);
        break;
      }
      case Algorithm::explore:
      case Algorithm::oracle_explore: {
        ExploreOptions opt;
        opt.delta = delta;
        opt.gamma = config.gamma;
        opt.c0 = config.principal_c0;
        res.log = config.algorithm == Algorithm::explore ? run_exploratory_principal(game, opt)
                                                         : run_oracle_explore_principal(game, opt);
        break;
      }
      case Algorithm::linear: {
        LinearOptions opt;
        opt.delta = delta;
        opt.gamma = config.gamma;
        opt.msp.n_samples = config.mc_samples;
        opt.msp.kappa = config.mc_kappa;
        if (setup.behavior.is_oracle()) opt.msp.witness = setup.model.s_star;
        Engine rng = setup.seeder.stream(streams::mc_geometry);
        LinearLog log = run_linear_principal(setup.arms, game, rng, opt);
        res.log = std::move(log.base);
        linear_phases = std::move(log.phases);
        break;
      }
    }
  } catch (const InvariantError& e) {
    checks.push_back(make_check("library-assertion", false, e.what(), true));
  }
  res.transcript = game.transcript();

  const bool oracle_agent = setup.behavior.is_oracle() && quiet;
  for (auto& c : check_transcript(res.transcript, T, res.log.truncated || !checks.empty(), oracle_agent))
    checks.push_back(std::move(c));
  checks.push_back(partition_check(res.log, setup.arms.size()));
  checks.push_back(search_duration_check(res.log, T));

  const Vec joint = game.true_principal_means() + game.true_agent_means();
  Eigen::Index best = 0;
  joint.maxCoeff(&best);
  const bool unique_best = (joint.array() >= joint[best] - 1e-12).count() == 1;
  const bool iid_alg = config.algorithm == Algorithm::iid_online || config.algorithm == Algorithm::iid_offline;
  if (iid_alg && greedy) checks.push_back(search_window_check(res.log, res.transcript, T));
  if (config.algorithm == Algorithm::iid_online) checks.push_back(phase_budget_check(res.log));
  if (quiet && greedy && (iid_alg || config.algorithm == Algorithm::linear))
    checks.push_back(target_play_check(res.transcript));
  if (quiet && unique_best && greedy) checks.push_back(survival_check(res.log, static_cast<ArmIndex>(best)));
  if (config.algorithm == Algorithm::linear && setup.behavior.is_oracle()) {
    bool inside = true;
    for (const auto& p : linear_phases) inside = inside && p.witness_always_inside;
    checks.push_back(make_check("msp-witness-retained", inside));
  }

  RunSummary& s = res.summary;
  s.algorithm = to_string(config.algorithm);
  s.seed = seed;
  s.horizon = T;
  s.num_arms = setup.arms.size();
  s.dim = setup.arms.kind() == ArmKind::linear ? setup.arms.dim() : 0;
  s.delta = delta;
  s.gamma = config.gamma;
  s.rounds = res.transcript.size();
  s.truncated = res.log.truncated;
  for (const PhaseLog& p : res.log.phases) {
    if (p.completed) ++s.phases_completed;
    for (ArmIndex a : p.eliminated) s.eliminations.push_back({a, p.phase});
  }
  if (!res.transcript.empty()) {
    s.cum_per_round = res.transcript.back().cum_per_round;
    s.cum_oracle = res.transcript.back().cum_oracle;
    s.cum_bar = res.transcript.back().cum_bar;
  }
  s.checks = std::move(checks);
  for (const auto& c : s.checks) {
    s.flagged = s.flagged || !c.passed;
    s.hard_failure = s.hard_failure || (c.hard && !c.passed);
  }
  return res;
}

std::string RunSummary::to_json_line() const {
  json elim = json::array();
  for (const auto& e : eliminations) elim.push_back({{"arm", e.arm}, {"phase", e.phase}});
  json inv = json::array();
  for (const auto& c : checks)
    inv.push_back({{"name", c.name}, {"passed", c.passed}, {"hard", c.hard}, {"detail", c.detail}});
  const json j{{"algorithm", algorithm},
               {"seed", seed},
               {"horizon", horizon},
               {"K", num_arms},
               {"d", dim},
               {"delta", delta},
               {"gamma", gamma},
               {"rounds", rounds},
               {"truncated", truncated},
               {"phases_completed", phases_completed},
               {"cum_perround", cum_per_round},
               {"cum_oracle", cum_oracle},
               {"cum_bar", cum_bar},
               {"eliminations", elim},
               {"invariants", inv},
               {"flagged", flagged},
               {"hard_failure", hard_failure}};
  return j.dump();
}

RunSummary RunSummary::from_json_line(const std::string& line) {
  const json j = json::parse(line);
  RunSummary s;
  s.algorithm = j.at("algorithm").get<std::string>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.horizon = j.at("horizon").get<std::size_t>();
  s.num_arms = j.value("K", std::size_t{0});
  s.dim = j.value("d", std::size_t{0});
  s.delta = j.value("delta", 0.0);
  s.gamma = j.value("gamma", 1.0);
  s.rounds = j.value("rounds", std::size_t{0});
  s.truncated = j.value("truncated", false);
  s.phases_completed = j.value("phases_completed", 0);
  s.cum_per_round = j.at("cum_perround").get<double>();
  s.cum_oracle = j.at("cum_oracle").get<double>();
  s.cum_bar = j.at("cum_bar").get<double>();
  for (const auto& e : j.value("eliminations", json::array()))
    s.eliminations.push_back({e.at("arm").get<ArmIndex>(), e.at("phase").get<int>()});
  for (const auto& c : j.value("invariants", json::array()))
    s.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.value("hard", false),
                        c.value("detail", std::string())});
  s.flagged = j.value("flagged", false);
  s.hard_failure = j.value("hard_failure", false);
  return s;
}

std::vector<RunSummary> run_experiment(const ExperimentConfig& config) {
  validate(config);
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  std::vector<RunSummary> out;
  std::ofstream summary(fs::path(config.output_dir) / "summary.jsonl", std::ios::app);
  if (!summary) throw ConfigError("cannot write to output directory " + config.output_dir);
  for (std::uint64_t seed : config.seeds) {
    RunResult r = run_single(config, seed);
    if (config.write_transcripts) {
      const fs::path csv = fs::path(config.output_dir) /
                           (to_string(config.algorithm) + "-T" + std::to_string(config.horizon) + "-seed" +
                            std::to_string(seed) + ".csv");
      std::ofstream f(csv);
      if (!f) throw ConfigError("cannot write " + csv.string());
      write_transcript_csv(f, r.transcript);
    }
    summary << r.summary.to_json_line() << '\n';
    out.push_back(std::move(r.summary));
  }
  return out;
}

ScalingReport scaling_report(const std::vector<RunSummary>& summaries, double exponent, RegretColumn column,
                             std::size_t min_seeds, double ratio_limit) {
  std::map<std::size_t, std::vector<double>> by_t;
  for (const auto& s : summaries) {
    const double v = column == RegretColumn::per_round ? s.cum_per_round
                     : column == RegretColumn::oracle  ? s.cum_oracle
                                                       : s.cum_bar;
    by_t[s.horizon].push_back(v);
  }
  if (by_t.size() < 2) throw ConfigError("scaling report needs at least two horizons");
  ScalingReport rep;
  rep.exponent = exponent;
  rep.ratio_limit = ratio_limit > 0.0 ? ratio_limit : (exponent <= 0.5 ? 1.8 : 1.9);
  for (const auto& [t, values] : by_t) {
    if (values.size() < min_seeds)
      throw ConfigError("horizon " + std::to_string(t) + " has " + std::to_string(values.size()) +
                        " runs; need at least " + std::to_string(min_seeds));
    ScalingPoint p;
    p.horizon = t;
    p.runs = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    p.mean_regret = sum / static_cast<double>(values.size());
    p.normalized = p.mean_regret / std::pow(static_cast<double>(t), exponent);
    p.per_round = p.mean_regret / static_cast<double>(t);
    rep.points.push_back(p);
  }
  for (std::size_t k = 1; k < rep.points.size(); ++k) {
    const ScalingPoint& lo = rep.points[k - 1];
    const ScalingPoint& hi = rep.points[k];
    const double doublings = std::log2(static_cast<double>(hi.horizon) / static_cast<double>(lo.horizon));
    const double ratio = std::pow(hi.mean_regret / lo.mean_regret, 1.0 / doublings);
    rep.max_adjacent_ratio = k == 1 ? ratio : std::max(rep.max_adjacent_ratio, ratio);
    rep.per_round_decreasing = rep.per_round_decreasing && hi.per_round < lo.per_round;
  }
  rep.flagged = !(rep.max_adjacent_ratio <= rep.ratio_limit) || !rep.per_round_decreasing;
  return rep;
}

std::vector<RunSummary> load_summaries(const std::string& directory) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) throw ConfigError("not a directory: " + directory);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(directory))
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<RunSummary> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) out.push_back(RunSummary::from_json_line(line));
  }
  return out;
}

double default_exponent(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::iid_online:
    case Algorithm::iid_offline:
    case Algorithm::oracle_explore:
      return 0.5;
    case Algorithm::explore:
    case Algorithm::linear:
      return 2.0 / 3.0;
  }
  return 0.5;
}

}  // namespace pagame
