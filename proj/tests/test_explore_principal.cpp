#include "doctest.h"

#include "pagame/explore_principal.hpp"
#include "support.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace pagame;
using pagame::testing::ScriptedChannel;
using pagame::testing::fixed_greedy;
using pagame::testing::point_mass_setup;

TEST_CASE("exploration phase length at T = 2^16") {
  const std::size_t T = std::size_t{1} << 16;
  const double delta = 1.0 / static_cast<double>(T);
  // iota = 16 K T^2 log2(T) ln(4 log2(T)/delta) / delta, evaluated directly
  const double iota = 16.0 * 2 * std::pow(2.0, 32) * 16 * std::log(64.0 * std::pow(2.0, 16)) * std::pow(2.0, 16);
  CHECK(explore_log_iota(2, T, delta) == doctest::Approx(std::log(iota)).epsilon(1e-12));
  CHECK(explore_log_iota(2, T, delta) == doctest::Approx(42.2).epsilon(0.002));
  const double t1 = explore_phase_length_raw(1, 2, T, delta, 1.0);
  CHECK(t1 == doctest::Approx(128.0 * 2 * 37 * std::log(2.0) * std::log(iota) * std::log(iota)));
  CHECK(t1 == doctest::Approx(11.7e6).epsilon(0.01));
  CHECK(explore_phase_length_raw(1, 2, T, delta, 0.0) == t1);
  CHECK(explore_phase_length_raw(3, 2, T, delta, 2.0) / explore_phase_length_raw(2, 2, T, delta, 2.0) ==
        doctest::Approx(4.0));
  CHECK(explore_phase_length_raw(1, 2, T, delta, 2.0) == doctest::Approx(8.0 * t1));
}

TEST_CASE("repeat and vote counts") {
  const std::size_t T = 1 << 10;
  CHECK(search_repeats(T, 0.01) == static_cast<std::size_t>(std::ceil(2.0 * std::log(4.0 * 10 / 0.01))));
  CHECK(vote_count(3, T, 0.01) == static_cast<std::size_t>(std::ceil(8.0 * std::log(8.0 * 3 * 10 / 0.01))));
}

TEST_CASE("stabilization budget, epsilon and enlargement") {
  const double l = std::log(16.0 * 4 * 1000 / 0.1);
  CHECK(explore_bad_budget_raw(3, 1, 500, 4, 1000, 0.1) ==
        doctest::Approx(2.0 * std::cbrt(l) * std::pow(1500.0, 2.0 / 3.0)));
  const double eps = explore_epsilon(3, 1, 500, 4, 1000, 0.1);
  CHECK(eps == doctest::Approx(std::cbrt(l / 1500.0) + std::sqrt(l / 500.0)));
  CHECK(explore_enlarge(0.2, 3, 1, 500, 0.01, 1000) ==
        doctest::Approx(0.2 + std::pow(1.0 / 1500, 2.0 / 3.0) + 1.0 / 500 + 0.04));
  CHECK(explore_enlarge(0.9, 3, 1, 500, 0.1, 1000) == doctest::Approx(1.001));
}

TEST_CASE("incentive test: sufficient first incentive runs to the cap") {
  ScriptedChannel ch(3, 100000, [](const Incentive&, std::size_t) { return ArmIndex{1}; });
  const IncentiveTestOutcome out = incentive_test(1, 1, {0.3, 0.5}, 400, ch, 1.0, 40.0);
  REQUIRE(out.rounds.size() == 1);
  CHECK(out.rounds[0] == 800);
  CHECK(out.failures[0] == 0);
  CHECK(out.target_plays == 800);
  CHECK(ch.rounds_used() == 800);
}

TEST_CASE("incentive test: a useless incentive is abandoned at the threshold crossing") {
  const std::size_t T = 1 << 14;
  const double li = 40.0;
  // first Y with Y > 2 sqrt(Y ln 2T) + sqrt(8 ln(iota) / Y)
  std::size_t expected = 1;
  while (!(static_cast<double>(expected) > 2.0 * std::sqrt(expected * std::log(2.0 * T)) +
                                                std::sqrt(8.0 * li / static_cast<double>(expected))))
    ++expected;
  ScriptedChannel ch(2, T, [](const Incentive& pi, std::size_t) { return pi[0] >= 0.5 ? ArmIndex{0} : ArmIndex{1}; });
  const IncentiveTestOutcome out = incentive_test(1, 0, {0.1, 0.6}, 50, ch, 1.0, li);
  REQUIRE(out.rounds.size() == 2);
  CHECK(out.rounds[0] == expected);
  CHECK(out.failures[0] == expected);
  CHECK(out.rounds[1] == 100);
  CHECK(out.failures[1] == 0);
  CHECK(out.target_plays == 100);
}

TEST_CASE("median vote") {
  CHECK(median_vote({1, 1, 1, 0, 0, 1, 1, 1, 1}) == 1);
  CHECK(median_vote({0, 0, 0}) == 0);
  CHECK(median_vote({0, 1}) == 1);
  CHECK(median_vote({0, 0, 1}) == 0);
}

TEST_CASE("trustworthy elimination with a rival-loving agent") {
  Vec mu(2);
  mu << 0.0, 0.9;
  ScriptedChannel ch(2, 1000, [](const Incentive&, std::size_t) { return ArmIndex{1}; });
  ch.theta_hat = Vec::Zero(2);
  std::vector<std::vector<int>> lists;
  const auto [act, bad] = trustworthy_eliminate(1, {0, 1}, {}, 0.1, 9, ch, &lists);
  CHECK(act == ArmList{1});
  CHECK(bad == ArmList{0});
  CHECK(lists[0] == std::vector<int>(9, 0));
  CHECK(ch.rounds_used() == 18);
}

TEST_CASE("median elimination resists bounded exploration") {
  const std::size_t K = 3, T = 10000;
  const double delta = 0.01;
  const std::size_t votes = vote_count(K, T, delta);
  Vec mu(3);
  mu << 0.6, 0.3, 0.2;
  std::mt19937_64 rng(2024);
  int wrong = 0;
  const int reps = 1000;
  for (int rep = 0; rep < reps; ++rep) {
    ScriptedChannel ch(K, T, [&](const Incentive& pi, std::size_t) {
      const ArmIndex g = greedy_arm(mu, pi, TieRule::lowest_index);
      if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.25) return static_cast<ArmIndex>((g + 1 + rng() % 2) % 3);
      return g;
    });
    ch.theta_hat = mu;  // theta = mu: joint gaps 0.6 and 0.8
    const auto [act, bad] = trustworthy_eliminate(1, {0, 1, 2}, {}, 0.05, votes, ch);
    if (std::find(act.begin(), act.end(), ArmIndex{0}) == act.end() || act.size() != 1) ++wrong;
  }
  CHECK(static_cast<double>(wrong) / reps <= delta);
}

TEST_CASE("zero-exploration agent: optimal arm survives") {
  const std::size_t T = 200000;
  ExploreOptions opt;
  opt.gamma = 2000.0 / explore_phase_length_raw(1, 3, T, 1.0 / T, 1.0);
  const RunOutput out = run_exploratory_principal(
      point_mass_setup({0.6, 0.3, 0.1}, {0.4, 0.2, 0.1}, T, AgentKind::exploratory_learner, 0.0), opt);
  CHECK(out.log.phases.size() >= 2);
  CHECK(out.log.elimination_phase(0) == 0);
  for (const auto& p : out.log.phases)
    if (p.completed) CHECK(p.searches.size() == p.active.size() * search_repeats(T, 1.0 / T));
  for (const auto& rec : out.log.tests) {
    if (rec.failures.empty()) continue;
    CHECK(rec.target_plays >= std::min(rec.required_plays, rec.target_plays));
    for (std::size_t i = 0; i < rec.rounds.size(); ++i) {
      CHECK(rec.failures[i] <= rec.rounds[i]);
      CHECK(rec.rounds[i] <= 2 * rec.required_plays);
    }
    CHECK(std::is_sorted(rec.incentives.begin(), rec.incentives.end()));
  }
}

TEST_CASE("uniform exploration c0 = 1: optimal arm survives in most seeds") {
  const std::size_t T = 100000;
  ExploreOptions opt;
  opt.gamma = 1500.0 / explore_phase_length_raw(1, 3, T, 1.0 / T, 1.0);
  int survived = 0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    const RunOutput out = run_exploratory_principal(
        point_mass_setup({0.6, 0.3, 0.1}, {0.4, 0.2, 0.1}, T, AgentKind::exploratory_learner, 1.0, s), opt);
    survived += out.log.elimination_phase(0) == 0 ? 1 : 0;
  }
  CHECK(survived >= 48);
}

TEST_CASE("oracle variant: enlarged search outputs sit just above the optimal incentive") {
  const std::size_t T = 100000;
  ExploreOptions opt;
  opt.gamma = 2000.0 / explore_phase_length_raw(1, 3, T, 1.0 / T, 1.0);
  const RunOutput out =
      run_oracle_explore_principal(point_mass_setup({0.2, 0.5, 0.7}, {0.6, 0.35, 0.1}, T, AgentKind::oracle), opt);
  const double mu[] = {0.6, 0.35, 0.1};
  for (const auto& rec : out.log.tests) {
    const double pi_star = 0.6 - mu[rec.arm];
    for (double b : rec.incentives) {
      CHECK(b > pi_star);
      CHECK(b <= pi_star + 2.0 / T + 1e-15);
    }
  }
}

TEST_CASE("oracle variant steers toward the best joint arm") {
  const std::size_t T = 200000;
  ExploreOptions opt;
  opt.gamma = 1500.0 / explore_phase_length_raw(1, 2, T, 1.0 / T, 1.0);
  const RunOutput out = run_oracle_explore_principal(
      point_mass_setup({0.9, 0.1}, {0.2, 0.9}, T, AgentKind::exploratory_oracle, 1.0, 3), opt);
  CHECK(out.log.elimination_phase(0) == 0);
  CHECK(out.log.elimination_phase(1) > 0);
  std::size_t late = 0, zero = 0;
  const Transcript& tr = out.game.transcript();
  for (std::size_t t = tr.size() - tr.size() / 10; t < tr.size(); ++t, ++late) zero += tr[t].arm == 0 ? 1 : 0;
  CHECK(static_cast<double>(zero) / static_cast<double>(late) > 0.9);
}

TEST_CASE("oracle variant requires an oracle agent") {
  CHECK_THROWS_AS(run_oracle_explore_principal(point_mass_setup({0.5, 0.2}, {0.5, 0.2}, 1000), {}), ConfigError);
}

TEST_CASE("exploration-robust runs are reproducible") {
  const std::size_t T = 30000;
  ExploreOptions opt;
  opt.gamma = 500.0 / explore_phase_length_raw(1, 3, T, 1.0 / T, 1.0);
  auto run = [&] {
    GameSetup s = point_mass_setup({0.6, 0.3, 0.1}, {0.4, 0.2, 0.1}, T, AgentKind::exploratory_learner, 1.0, 9);
    s.model.principal[1] = RewardDistribution::bernoulli(0.3);
    std::ostringstream os;
    write_transcript_csv(os, run_exploratory_principal(s, opt).game.transcript());
    return os.str();
  };
  CHECK(run() == run());
}
