#include "doctest.h"

#include <map>

#include "bipart/error.hpp"
#include "bipart/prng.hpp"
#include "bipart/protocols.hpp"
#include "bipart/scheduler.hpp"
#include "bipart/verifier.hpp"

using namespace bipart;

namespace {

Interaction ia(std::size_t x, std::size_t y) { return {Endpoint::agent(x), Endpoint::agent(y)}; }

// With at most one token left no color can change any more, so the run can
// stop there; for odd n the last token never disappears.
StopCondition settled(const ProtocolSpec& p) {
  return StopCondition::when("tokens-le-1", [&p](const Configuration& c) { return count_tokens(p, c) <= 1; });
}

}  // namespace

TEST_CASE("prng golden values") {
  SplitMix64 rng(0);
  const auto v1 = rng.next();
  const auto v2 = rng.next();
  CHECK(v1 == 0xE220A8397B1DCDAFULL);
  CHECK(v2 == 0x6E789E6AA1B965F4ULL);
  CHECK(v1 != v2);
  CHECK(prng_next(42).second == 0xBDD732262FEB6E95ULL);
  SplitMix64 a(17), b(17);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  static_assert(prng_next(0).second == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("below is unbiased by rejection and stays in range") {
  SplitMix64 rng(5);
  std::map<std::uint64_t, int> counts;
  for (int i = 0; i < 60000; ++i) {
    const auto v = rng.below(6);
    REQUIRE(v < 6);
    counts[v]++;
  }
  for (auto [v, k] : counts) CHECK(k == doctest::Approx(10000).epsilon(0.05));
}

TEST_CASE("uniform_random golden pairs on ring(3)") {
  const auto g = build(GraphKind::Ring, 3);
  const auto p = nobs_asym4();
  const auto c = initial_configuration(p, g);
  auto sched = Schedule::uniform_random(42);
  const std::vector<Interaction> expected{ia(0, 2), ia(0, 2), ia(0, 1), ia(0, 1),
                                          ia(2, 0), ia(0, 1), ia(0, 2), ia(1, 0)};
  for (std::size_t t = 0; t < expected.size(); ++t) CHECK(sched.next_interaction(g, c, t) == expected[t]);
}

TEST_CASE("random connected graph golden edges") {
  using Edges = std::vector<CommGraph::Edge>;
  CHECK(build(GraphKind::RandomConnected, 6, 7).edges() ==
        Edges{{0, 3}, {0, 5}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}});
  CHECK(build(GraphKind::RandomConnected, 8, 1).edges() ==
        Edges{{0, 2}, {0, 3}, {0, 4}, {0, 6}, {0, 7}, {1, 2}, {1, 3}, {1, 4},
              {1, 5}, {1, 6}, {1, 7}, {3, 5}, {3, 6}, {4, 5}, {4, 6}, {4, 7}});
}

TEST_CASE("round_robin period and scripted schedules") {
  const auto g = build(GraphKind::Ring, 3);
  const auto period = round_robin_period(g);
  CHECK(period == std::vector<Interaction>{ia(0, 1), ia(0, 2), ia(1, 0), ia(1, 2), ia(2, 0), ia(2, 1)});
  auto shuffled = round_robin_period(g, 9);
  CHECK(shuffled != period);
  std::sort(shuffled.begin(), shuffled.end());
  CHECK(shuffled == period);

  const auto p = nobs_asym4();
  const auto c = initial_configuration(p, g);
  auto script = Schedule::scripted({ia(0, 1)});
  CHECK(script.next_interaction(g, c, 0) == ia(0, 1));
  try {
    script.next_interaction(g, c, 1);
    FAIL("exhausted script returned a pair");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScheduleExhausted);
  }
}

TEST_CASE("property: round-robin traces of k periods contain each pair k times") {
  const auto p = nobs_sym5();
  for (std::uint64_t seed : {0, 1, 77}) {
    for (auto kind : {GraphKind::Ring, GraphKind::Star, GraphKind::Complete}) {
      const auto g = build(kind, 5);
      const std::size_t m = g.ordered_pairs().size();
      for (std::size_t k = 1; k <= 4; ++k) {
        auto sched = Schedule::round_robin(seed);
        const auto trace = run(p, g, sched, k * m, StopCondition::budget_only());
        REQUIRE(trace.steps.size() == k * m);
        std::map<Interaction, std::size_t> counts;
        for (const auto& s : trace.steps) counts[s.interaction]++;
        CHECK(counts.size() == m);
        for (const auto& [i, n] : counts) CHECK(n == k);
      }
    }
  }
}

TEST_CASE("run examples") {
  const auto p4 = nobs_asym4();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto sched = Schedule::uniform_random(seed);
    const auto trace = run(p4, build(GraphKind::Ring, 3), sched, 100000, settled(p4));
    CHECK(color_counts(p4, trace.final) == ColorCounts{2, 1});
  }
  const auto p3 = bs_global3();
  const auto star = build(GraphKind::Star, 4, 0, std::vector<std::size_t>{0});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto sched = Schedule::uniform_random(seed);
    const auto trace = run(p3, star, sched, 100000, StopCondition::silent());
    CHECK(trace.stop_reason == StopReason::Silent);
    CHECK(std::labs(color_counts(p3, trace.final).imbalance()) <= 1);
  }
  auto sched = Schedule::uniform_random(1);
  const auto empty = run(p4, build(GraphKind::Ring, 4), sched, 0, StopCondition::silent());
  CHECK(empty.steps.empty());
  CHECK(empty.final == empty.initial);
  CHECK(empty.stop_reason == StopReason::StepBudget);
}

TEST_CASE("silent stop on even rings and window stop is labeled heuristic") {
  const auto p = nobs_asym4();
  auto sched = Schedule::uniform_random(3);
  const auto silent = run(p, build(GraphKind::Ring, 4), sched, 100000, StopCondition::silent());
  CHECK(silent.stop_reason == StopReason::Silent);
  CHECK_FALSE(silent.heuristic);
  CHECK(is_silent(p, build(GraphKind::Ring, 4), silent.final));

  auto sched2 = Schedule::uniform_random(3);
  const auto windowed = run(p, build(GraphKind::Ring, 5), sched2, 100000, StopCondition::color_window(200));
  CHECK(windowed.stop_reason == StopReason::ConvergedWindow);
  CHECK(windowed.heuristic);
}

TEST_CASE("property: replay determinism and trace replay") {
  for (const char* name : {"bs-global3", "bs-weak3p1:5", "nobs-asym4", "nobs-sym5"}) {
    const auto p = protocol_by_name(name);
    const auto g = p.uses_bs() ? build(GraphKind::RandomConnected, 5, 11, std::vector<std::size_t>{2})
                               : build(GraphKind::RandomConnected, 5, 11);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto s1 = Schedule::uniform_random(seed);
      auto s2 = Schedule::uniform_random(seed);
      const auto t1 = run(p, g, s1, 500, StopCondition::budget_only());
      const auto t2 = run(p, g, s2, 500, StopCondition::budget_only());
      CHECK(t1 == t2);
      CHECK(replay(p, g, t1) == t1.final);
      auto script = Schedule::scripted(interactions_of(t1));
      CHECK(run(p, g, script, t1.steps.size(), StopCondition::budget_only()) == t1);
    }
  }
}

TEST_CASE("replay rejects a tampered trace") {
  const auto p = nobs_asym4();
  const auto g = build(GraphKind::Ring, 3);
  auto sched = Schedule::uniform_random(4);
  auto trace = run(p, g, sched, 10, StopCondition::budget_only());
  REQUIRE_FALSE(trace.steps.empty());
  trace.steps[0].pre.first = asym4::kBlue;
  CHECK_THROWS_AS(replay(p, g, trace), Error);
}

TEST_CASE("property: token protocols balance on every connected graph with 3 to 5 agents") {
  for (const auto& p : {nobs_asym4(), nobs_sym5()}) {
    std::size_t runs = 0;
    for (std::size_t n = 3; n <= 5; ++n) {
      for (const auto& g : enumerate_connected(n, false)) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
          auto sched = Schedule::uniform_random(seed);
          const bool even = n % 2 == 0;
          const auto trace = run(p, g, sched, 1'000'000, even ? StopCondition::silent() : settled(p));
          REQUIRE(trace.stop_reason == (even ? StopReason::Silent : StopReason::Predicate));
          REQUIRE(std::labs(color_counts(p, trace.final).imbalance()) <= 1);
          ++runs;
        }
      }
    }
    CHECK(runs == 77000);
  }
}
