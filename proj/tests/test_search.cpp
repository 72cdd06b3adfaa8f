#include "doctest.h"

#include "pagame/search.hpp"
#include "support.hpp"

#include <random>

using namespace pagame;
using pagame::testing::ScriptedChannel;
using pagame::testing::fixed_greedy;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("search against a settled greedy agent lands just above the optimal incentive") {
  const std::size_t T = 1024;
  ScriptedChannel ch(2, T, fixed_greedy(vec2(0.2, 0.9)), 10000);
  const SearchResult r = noisy_binary_search(0, ch);
  CHECK(r.value > 0.7);
  CHECK(r.value <= 0.7 + 4.0 / T + 10.0 / 1e4 + 2.0 / 1e4);
  CHECK(r.rounds <= 20);
  CHECK(r.end_round == ch.rounds_used());
}

TEST_CASE("target already preferred: every probe succeeds and bisection converges") {
  const std::size_t T = 1024;
  ScriptedChannel ch(2, T, fixed_greedy(vec2(0.9, 0.2)));
  const SearchResult r = noisy_binary_search(0, ch);
  CHECK(r.exit == SearchExit::bisection_converged);
  CHECK(r.rounds == 10);
  CHECK(r.value > 0.0);
  CHECK(r.value <= 4.0 / T);
  CHECK(r.value == doctest::Approx(std::ldexp(1.0, -10) + 1.0 / T));
}

TEST_CASE("re-probes that keep succeeding end through the check counter") {
  const std::size_t T = 1024;
  // only the full incentive is accepted, so every fresh midpoint fails and every re-probe succeeds
  ScriptedChannel ch(2, T, [](const Incentive& pi, std::size_t) { return pi[0] >= 1.0 ? ArmIndex{0} : ArmIndex{1}; });
  const SearchResult r = noisy_binary_search(0, ch);
  CHECK(r.exit == SearchExit::check_converged);
  CHECK(r.rounds == 20);
  CHECK(r.value == doctest::Approx(1.0 + 2.0 / T));
  // alternating probe sequence: midpoint, y_upper, midpoint, ...
  for (std::size_t k = 1; k < ch.offers.size(); k += 2) CHECK(ch.offers[k][0] == 1.0);
}

TEST_CASE("a failed re-probe ends the search with the count-based slack") {
  const std::size_t T = 1024;
  ScriptedChannel ch(3, T, [](const Incentive&, std::size_t) { return ArmIndex{2}; }, 0);
  const SearchResult r = noisy_binary_search(0, ch);
  CHECK(r.exit == SearchExit::check_failed);
  CHECK(r.rounds == 2);
  CHECK(r.value == doctest::Approx(1.0 + 1.0 / T + 1.0 + 2.0));

  ScriptedChannel counted(3, T, [](const Incentive&, std::size_t) { return ArmIndex{2}; }, 50);
  const SearchResult q = noisy_binary_search(0, counted);
  CHECK(q.value == doctest::Approx(1.0 + 1.0 / T + 1.0 / 50 + 2.0 / 50));
}

TEST_CASE("a failed last bisection probe is settled by one re-probe") {
  const std::size_t T = 1024;
  // accepts every round except the tenth, which is the last fresh bisection probe
  ScriptedChannel ch(2, T, [](const Incentive&, std::size_t t) { return t == 9 ? ArmIndex{1} : ArmIndex{0}; });
  const SearchResult r = noisy_binary_search(0, ch);
  CHECK(r.exit == SearchExit::check_converged);
  CHECK(r.rounds == 11);
  CHECK(r.value == doctest::Approx(std::ldexp(1.0, -9) + 2.0 / T));
}

TEST_CASE("duration bound holds against arbitrary scripted answers") {
  std::mt19937_64 rng(99);
  for (std::size_t T : {std::size_t{1024}, std::size_t{1} << 14, std::size_t{1000}}) {
    const std::size_t cap = 2 * ceil_log2(T);
    for (int trial = 0; trial < 400; ++trial) {
      const std::uint64_t script = rng();
      const int mode = trial % 4;
      ScriptedChannel ch(4, T, [&, script, mode](const Incentive& pi, std::size_t t) -> ArmIndex {
        const ArmIndex target = pi[0] > 0 ? 0 : 1;
        switch (mode) {
          case 0: return (script >> (t % 64)) & 1 ? target : 3;
          case 1: return t % 2 ? target : 2;
          case 2: return pi.maxCoeff() > 0.6 ? target : 1;
          default: return (script * (t + 1)) % 3 == 0 ? 3 : target;
        }
      });
      const SearchResult r = noisy_binary_search(0, ch);
      CHECK(r.rounds <= cap);
      CHECK(r.value >= 0.0);
      for (const Incentive& pi : ch.offers) {
        CHECK(pi[0] >= 0.0);
        CHECK(pi[0] <= 1.0);
      }
    }
  }
}

TEST_CASE("search propagates the end of the horizon") {
  ScriptedChannel ch(2, 3, [](const Incentive& pi, std::size_t) { return pi[0] >= 1.0 ? ArmIndex{0} : ArmIndex{1}; });
  CHECK_THROWS_AS(noisy_binary_search(0, ch), HorizonReached);
}

TEST_CASE("plain bisection brackets a pinned agent's optimal incentive") {
  const std::size_t T = 1 << 12;
  ScriptedChannel ch(2, T, fixed_greedy(vec2(0.2, 0.9)));
  const SearchResult r = plain_binary_search(0, ch);
  CHECK(r.rounds == 12);
  CHECK(r.value > 0.7);
  CHECK(r.value <= 0.7 + 1.0 / T);
}
