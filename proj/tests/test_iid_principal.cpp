#include "doctest.h"

#include "pagame/iid_principal.hpp"
#include "support.hpp"

#include <cmath>
#include <sstream>

using namespace pagame;
using pagame::testing::ScriptedChannel;
using pagame::testing::fixed_greedy;
using pagame::testing::point_mass_setup;

TEST_CASE("phase length") {
  CHECK(phase_length(2, 4, std::size_t{1} << 20, 4, std::ldexp(1.0, -10)) == 12067);
  CHECK(phase_length_raw(2, 4, std::size_t{1} << 20, 4, std::ldexp(1.0, -10)) ==
        doctest::Approx(512.0 * 34.0 * std::log(2.0)));
  // the |A| log T branch binds once the first branch is small
  CHECK(phase_length_raw(1, 1000, 1000, 1, 0.999) == doctest::Approx(1000.0 * std::log(1000.0)));
  for (int m = 1; m < 6; ++m)
    CHECK(phase_length_raw(m + 1, 3, 50000, 5, 1e-4) / phase_length_raw(m, 3, 50000, 5, 1e-4) ==
          doctest::Approx(4.0));
}

TEST_CASE("bad-arm budget and confidence radius") {
  CHECK(bad_arm_budget(3, 2, 600) == 30);
  CHECK(bad_arm_budget(1, 1, 1) == 1);
  CHECK(bad_arm_budget_raw(2, 0, 8) == doctest::Approx(4.0));
  CHECK(confidence_radius(4, 1000, 0.01, 50) == doctest::Approx(std::sqrt(std::log(4.0 * 4 * 1000 / 0.01) / 100)));
}

TEST_CASE("incentive enlargement") {
  CHECK(enlarge_incentive(0.4, 0.1, 50, 1000000) == doctest::Approx(0.82));
  CHECK(enlarge_incentive(0.99, 0.25, 1, 100) == doctest::Approx(1.01));
  CHECK(enlarge_incentive(0.0, 0.0, 1e300, 100) == doctest::Approx(0.0));
}

TEST_CASE("online elimination") {
  PhaseState ph;
  ph.m = 2;
  ph.active = {0, 1};
  SUBCASE("clear gap removes the worse arm") {
    Vec mu(2), th(2);
    mu << 0.6, 0.3;
    th << 0.5, 0.3;  // joint gap 0.5 > 3 * 2^-2
    ScriptedChannel ch(2, 100, fixed_greedy(mu));
    ch.theta_hat = th;
    const auto [act, bad] = online_eliminate(ph, ch);
    CHECK(act == ArmList{0});
    CHECK(bad == ArmList{1});
    CHECK(ch.rounds_used() == 2);
  }
  SUBCASE("symmetric arms both keep their own test") {
    Vec mu(2), th(2);
    mu << 0.4, 0.6;
    th << 0.6, 0.4;
    ScriptedChannel ch(2, 100, fixed_greedy(mu));
    ch.theta_hat = th;
    const auto [act, bad] = online_eliminate(ph, ch);
    CHECK(act == ArmList{0, 1});
    CHECK(bad.empty());
  }
  SUBCASE("singleton active set") {
    ph.active = {1};
    ph.bad = {0};
    Vec mu(2);
    mu << 0.9, 0.1;
    ScriptedChannel ch(2, 100, fixed_greedy(mu));
    ch.theta_hat = Vec::Zero(2);
    const auto [act, bad] = online_eliminate(ph, ch);
    CHECK(act == ArmList{1});
    CHECK(ch.offers.front()[0] == 0.0);  // bad arms get nothing
  }
}

TEST_CASE("offline elimination threshold is strict") {
  PhaseState ph;
  ph.m = 8;
  ph.active = {0, 1};
  ph.exploration_budget = 1000000;
  ph.previous_budget = 1000000;
  const std::size_t T = 1 << 20;
  const double threshold = 1.5 * std::ldexp(1.0, -8) + offline_slack(ph, T);
  CHECK(offline_slack(ph, T) == doctest::Approx(4.0 / T + 22.0 / 1e6));

  std::map<ArmIndex, double> b{{0, 0.3}, {1, 0.3}};
  Vec th(2);
  SUBCASE("gap below the threshold") {
    th << 0.5, 0.5 - std::ldexp(1.0, -8);
    const auto [act, bad] = offline_eliminate(ph, b, {{0, th}, {1, th}}, T);
    CHECK(act.size() == 2);
  }
  SUBCASE("large gap") {
    th << 1.0, 0.0;
    const auto [act, bad] = offline_eliminate(ph, b, {{0, th}, {1, th}}, T);
    CHECK(act == ArmList{0});
    CHECK(bad == ArmList{1});
  }
  SUBCASE("gap exactly at the threshold") {
    th << 0.0, 0.0;
    const std::map<ArmIndex, double> tied{{0, 0.0}, {1, threshold}};
    const auto [act, bad] = offline_eliminate(ph, tied, {{0, th}, {1, th}}, T);
    CHECK(act.size() == 2);
    const std::map<ArmIndex, double> over{{0, 0.0}, {1, std::nextafter(threshold, 1.0)}};
    CHECK(offline_eliminate(ph, over, {{0, th}, {1, th}}, T).first == ArmList{0});
  }
}

TEST_CASE("symmetric instance: nobody is eliminated") {
  const RunOutput out = run_iid_principal(point_mass_setup({0.9, 0.1}, {0.1, 0.9}, 1 << 14), {});
  CHECK(out.log.elimination_phase(0) == 0);
  CHECK(out.log.elimination_phase(1) == 0);
  CHECK(out.game.transcript().size() == std::size_t{1} << 14);
  CHECK(out.log.truncated);
}

TEST_CASE("zero-noise gaps: worse arms leave by their phase bound") {
  for (auto variant : {EliminationVariant::online, EliminationVariant::offline}) {
    IidOptions opt;
    opt.variant = variant;
    const RunOutput out = run_iid_principal(point_mass_setup({0.5, 0.25, 0.2}, {0.5, 0.25, 0.2}, 1 << 18), opt);
    CHECK(out.log.elimination_phase(0) == 0);
    const double gaps[] = {0.0, 0.5, 0.6};
    for (ArmIndex a : {ArmIndex{1}, ArmIndex{2}}) {
      int bound = 1;
      while (!(gaps[a] / 2 > std::ldexp(1.0, -bound))) ++bound;
      const int m = out.log.elimination_phase(a);
      CHECK(m >= 1);
      CHECK(m <= bound);
      CHECK(gaps[a] >= std::ldexp(1.0, -m));
    }
  }
}

TEST_CASE("online phases account for every round") {
  const RunOutput out = run_iid_principal(point_mass_setup({0.5, 0.25, 0.2}, {0.5, 0.25, 0.2}, 1 << 17), {});
  for (const PhaseLog& p : out.log.phases) {
    if (!p.completed) continue;
    std::size_t search = 0;
    for (const auto& s : p.searches) search += s.rounds;
    CHECK(p.end_round - p.start_round ==
          p.bad.size() * p.bad_budget + search + p.active.size() * (p.exploration_budget + 1));
  }
}

TEST_CASE("target arm is played in every scheduled round under zero noise") {
  const RunOutput out = run_iid_principal(point_mass_setup({0.6, 0.3, 0.2}, {0.3, 0.5, 0.2}, 1 << 16), {});
  for (const RoundRecord& r : out.game.transcript())
    if (r.target && (r.block == Block::explore || r.block == Block::stabilize)) CHECK(r.arm == *r.target);
}

TEST_CASE("seeded Bernoulli runs are reproducible") {
  auto setup = [] {
    GameSetup s;
    s.arms = ArmSet::iid(3);
    s.model = RewardModel::iid(
        {RewardDistribution::bernoulli(0.7), RewardDistribution::bernoulli(0.4), RewardDistribution::bernoulli(0.2)},
        {RewardDistribution::bernoulli(0.3), RewardDistribution::bernoulli(0.6), RewardDistribution::bernoulli(0.5)});
    s.initial_state = AgentState::iid(3);
    s.horizon = 20000;
    s.seeder = StreamSeeder(17);
    return s;
  };
  std::ostringstream a, b;
  write_transcript_csv(a, run_iid_principal(setup(), {}).game.transcript());
  write_transcript_csv(b, run_iid_principal(setup(), {}).game.transcript());
  CHECK(a.str() == b.str());
}

TEST_CASE("exploring agents are rejected") {
  CHECK_THROWS_AS(
      run_iid_principal(point_mass_setup({0.5, 0.2}, {0.5, 0.2}, 1000, AgentKind::exploratory_learner, 1.0), {}),
      ConfigError);
}

TEST_CASE("schedule multiplier") {
  CHECK(scaled_count(100.0, 0.5) == 50);
  CHECK(scaled_count(0.2, 0.1) == 1);
  CHECK(scaled_count(10.01, 1.0) == 11);
}
