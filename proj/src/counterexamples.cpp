#include "bipart/counterexamples.hpp"

#include <algorithm>
#include <memory>

#include "bipart/error.hpp"
#include "bipart/protocols.hpp"

namespace bipart {

namespace {

constexpr std::size_t kVictim = 2;

CommGraph starvation_graph() { return build(GraphKind::Line, 3, 0, std::vector<std::size_t>{0}); }

// Outward sweep from the base station, then the inward sweep. Every ordered
// pair appears once. In lexicographic order (1,0) would pull `initial` back
// before (1,2) runs, and the victim would starve without the adversary
// ever acting; this order hands the victim a color each period.
std::vector<Interaction> starvation_period() {
  auto a = [](std::size_t i) { return Endpoint::agent(i); };
  const Endpoint bs = Endpoint::base_station();
  return {{bs, a(0)}, {a(0), a(1)}, {a(1), a(2)}, {a(0), bs}, {a(1), a(0)}, {a(2), a(1)}};
}

bool involves(const Interaction& i, std::size_t agent) {
  return (!i.initiator.is_base_station() && i.initiator.agent_index() == agent) ||
         (!i.responder.is_base_station() && i.responder.agent_index() == agent);
}

struct StarvationAdversary {
  std::vector<Interaction> period;
  std::size_t scheduled = 0;
  std::size_t undo_steps = 0;
  std::optional<Interaction> last;
  bool victim_was_initial = true;
  bool last_was_undo = false;
  std::vector<std::vector<std::size_t>> per_period;

  bool must_undo(const Configuration& c) const {
    return last && !last_was_undo && involves(*last, kVictim) && victim_was_initial &&
           c.agents[kVictim] != global3::kInitial;
  }

  Interaction next(const Configuration& c) {
    const bool undo = must_undo(c);
    const Interaction i = undo ? *last : period[scheduled % period.size()];
    if (undo) {
      ++undo_steps;
    } else {
      const std::size_t slot = scheduled % period.size();
      if (slot == 0) per_period.emplace_back(period.size(), 0);
      per_period.back()[slot]++;
      ++scheduled;
    }
    last_was_undo = undo;
    victim_was_initial = c.agents[kVictim] == global3::kInitial;
    last = i;
    return i;
  }
};

long imbalance(const ProtocolSpec& p, const Configuration& c) { return color_counts(p, c).imbalance(); }

// Lockstep check: after base step k and doubled steps 2k, 2k+1, doubled agent
// a must hold the state of base agent mirror_of(a).
template <typename MirrorOf>
void check_equivalence(const ProtocolSpec& p, DoubledTraceReport& report, MirrorOf mirror_of) {
  Configuration base = report.base_trace.initial;
  Configuration doubled = report.doubled_trace.initial;
  auto equivalent = [&] {
    for (std::size_t a = 0; a < doubled.agents.size(); ++a) {
      if (doubled.agents[a] != base.agents[mirror_of(a)]) return false;
    }
    return true;
  };
  if (!equivalent()) {
    report.first_violation = 0;
    return;
  }
  const auto& dsteps = report.doubled_trace.steps;
  for (std::size_t k = 0; k < report.base_trace.steps.size(); ++k) {
    const auto& bi = report.base_trace.steps[k].interaction;
    assign_endpoints(base, bi, transition(p, base, bi));
    for (std::size_t j = 2 * k; j < 2 * k + 2; ++j) {
      const auto& di = dsteps[j].interaction;
      assign_endpoints(doubled, di, transition(p, doubled, di));
    }
    if (!equivalent()) {
      report.first_violation = 2 * k + 1;
      return;
    }
    report.equivalence_held_through = 2 * k + 2;
  }
}

Configuration duplicate(const Configuration& c) {
  Configuration out;
  out.agents = c.agents;
  out.agents.insert(out.agents.end(), c.agents.begin(), c.agents.end());
  return out;
}

}  // namespace

StarvationReport starvation_run(std::size_t periods) {
  if (periods == 0) throw Error(ErrorCode::InvalidSize, "need at least one period");
  const ProtocolSpec p = bs_global3();
  const CommGraph g = starvation_graph();
  auto adversary = std::make_shared<StarvationAdversary>();
  adversary->period = starvation_period();
  const std::size_t m = adversary->period.size();

  Schedule sched = Schedule::adaptive(
      "starve", [adversary](const CommGraph&, const Configuration& c, std::size_t) { return adversary->next(c); });
  auto done = [adversary, periods, m](const Configuration& c) {
    return adversary->scheduled >= periods * m && !adversary->must_undo(c);
  };
  StarvationReport report;
  report.trace = run(p, g, sched, 2 * periods * m + 2, StopCondition::when("periods-done", done));
  report.periods = adversary->scheduled / m;
  report.undo_steps = adversary->undo_steps;
  report.victim_still_initial = report.trace.final.agents[kVictim] == global3::kInitial;

  report.pair_counts.assign(m, 0);
  for (const auto& step : report.trace.steps) {
    auto it = std::find(adversary->period.begin(), adversary->period.end(), step.interaction);
    report.pair_counts[static_cast<std::size_t>(it - adversary->period.begin())]++;
  }
  bool covered = adversary->per_period.size() == periods;
  for (const auto& counts : adversary->per_period) {
    covered &= std::all_of(counts.begin(), counts.end(), [](std::size_t k) { return k >= 1; });
  }
  covered &= std::all_of(report.pair_counts.begin(), report.pair_counts.end(),
                         [periods](std::size_t k) { return k >= periods; });
  report.pairs_covered_per_period = covered;
  return report;
}

StarvationContrast starvation_contrast(std::uint64_t seed, std::size_t max_steps) {
  const ProtocolSpec p = bs_global3();
  const CommGraph g = starvation_graph();
  Schedule sched = Schedule::uniform_random(seed);
  StarvationContrast out;
  out.trace = run(p, g, sched, max_steps, StopCondition::silent());
  out.victim_left_initial = out.trace.final.agents[kVictim] != global3::kInitial;
  return out;
}

DoubledTraceReport replay_double_bridge(const ProtocolSpec& p, const CommGraph& g, const ExecutionTrace& trace,
                                        std::size_t alpha, std::size_t beta) {
  if (g.has_bs()) throw Error(ErrorCode::IncompatibleTrace, "bridge doubling needs a graph without base station");
  if (trace.initial.agents.size() != g.n_agents() || trace.initial.bs) {
    throw Error(ErrorCode::IncompatibleTrace, "trace initial configuration does not fit the graph");
  }
  if (replay(p, g, trace) != trace.final) {
    throw Error(ErrorCode::IncompatibleTrace, "trace does not replay to its final configuration");
  }
  const CommGraph doubled_graph = double_bridge(g, alpha, beta);
  const std::size_t n = g.n_agents();

  std::vector<Interaction> script;
  script.reserve(2 * trace.steps.size());
  for (const auto& step : trace.steps) {
    const auto& i = step.interaction;
    script.push_back(i);
    script.push_back({Endpoint::agent(i.initiator.agent_index() + n), Endpoint::agent(i.responder.agent_index() + n)});
  }
  DoubledTraceReport report;
  report.base_trace = trace;
  Schedule sched = Schedule::scripted(script);
  report.doubled_trace =
      run(p, doubled_graph, sched, script.size(), StopCondition::budget_only(), duplicate(trace.initial));
  check_equivalence(p, report, [n](std::size_t a) { return a % n; });
  report.base_imbalance = imbalance(p, trace.final);
  report.final_imbalance = imbalance(p, report.doubled_trace.final);
  return report;
}

std::pair<Interaction, Interaction> ring_double_steps(const Interaction& base) {
  const std::size_t x = base.initiator.agent_index();
  const std::size_t y = base.responder.agent_index();
  if (x == 0 || y == 0) {
    return {base, {Endpoint::agent(x + 3), Endpoint::agent(y + 3)}};
  }
  // The 1-2 edge is split across the copies: 1 meets the copy of 2 (agent 5),
  // and the copy of 1 (agent 4) meets 2.
  auto first = [](std::size_t v) { return Endpoint::agent(v == 2 ? 5 : v); };
  auto second = [](std::size_t v) { return Endpoint::agent(v == 1 ? 4 : v); };
  return {{first(x), first(y)}, {second(x), second(y)}};
}

DoubledTraceReport ring_doubling_demo(const ProtocolSpec& p, std::uint64_t seed, std::size_t settle_steps) {
  if (p.uses_bs()) throw Error(ErrorCode::IncompatibleTrace, "ring doubling applies to protocols without base station");
  const CommGraph ring3 = build(GraphKind::Ring, 3);
  const CommGraph ring6 = ring_interleave_double();
  Schedule base_sched = Schedule::round_robin(seed);
  DoubledTraceReport report;
  report.base_trace = run(p, ring3, base_sched, settle_steps, StopCondition::budget_only());

  std::vector<Interaction> script;
  script.reserve(2 * report.base_trace.steps.size());
  for (const auto& step : report.base_trace.steps) {
    auto [a, b] = ring_double_steps(step.interaction);
    script.push_back(a);
    script.push_back(b);
  }
  Schedule sched = Schedule::scripted(script);
  report.doubled_trace =
      run(p, ring6, sched, script.size(), StopCondition::budget_only(), duplicate(report.base_trace.initial));
  check_equivalence(p, report, [](std::size_t a) { return a % 3; });
  report.base_imbalance = imbalance(p, report.base_trace.final);
  report.final_imbalance = imbalance(p, report.doubled_trace.final);
  return report;
}

}  // namespace bipart
