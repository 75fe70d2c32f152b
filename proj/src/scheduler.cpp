#include "bipart/scheduler.hpp"

#include <algorithm>
#include <utility>

#include "bipart/error.hpp"

namespace bipart {

std::vector<Interaction> round_robin_period(const CommGraph& g, std::uint64_t permutation_seed) {
  std::vector<Interaction> period = g.ordered_pairs();
  if (permutation_seed != 0 && period.size() > 1) {
    SplitMix64 rng(permutation_seed);
    for (std::size_t i = period.size() - 1; i > 0; --i) {
      std::swap(period[i], period[rng.below(i + 1)]);
    }
  }
  return period;
}

Schedule Schedule::uniform_random(std::uint64_t seed) {
  Schedule s(ScheduleKind::UniformRandom);
  s.seed_ = seed;
  s.rng_ = SplitMix64(seed);
  return s;
}

Schedule Schedule::round_robin(std::uint64_t permutation_seed) {
  Schedule s(ScheduleKind::RoundRobin);
  s.seed_ = permutation_seed;
  return s;
}

Schedule Schedule::scripted(std::vector<Interaction> steps) {
  Schedule s(ScheduleKind::Scripted);
  s.script_ = std::move(steps);
  return s;
}

Schedule Schedule::adaptive(std::string adversary_id, AdaptiveFn fn) {
  Schedule s(ScheduleKind::Adaptive);
  s.adversary_id_ = std::move(adversary_id);
  s.adaptive_ = std::move(fn);
  return s;
}

std::string Schedule::describe() const {
  switch (kind_) {
    case ScheduleKind::UniformRandom: return "random";
    case ScheduleKind::RoundRobin: return "roundrobin";
    case ScheduleKind::Scripted: return "script";
    case ScheduleKind::Adaptive: return "adaptive:" + adversary_id_;
  }
  return "unknown";
}

Interaction Schedule::next_interaction(const CommGraph& g, const Configuration& c, std::size_t step) {
  switch (kind_) {
    case ScheduleKind::UniformRandom: {
      const auto& pairs = g.ordered_pairs();
      if (pairs.empty()) throw Error(ErrorCode::ScheduleExhausted, "graph has no adjacent pairs");
      return pairs[rng_.below(pairs.size())];
    }
    case ScheduleKind::RoundRobin: {
      if (period_graph_ != &g || period_.size() != g.ordered_pairs().size()) {
        period_ = round_robin_period(g, seed_);
        period_graph_ = &g;
      }
      if (period_.empty()) throw Error(ErrorCode::ScheduleExhausted, "graph has no adjacent pairs");
      return period_[step % period_.size()];
    }
    case ScheduleKind::Scripted:
      if (step >= script_.size()) {
        throw Error(ErrorCode::ScheduleExhausted, "script has " + std::to_string(script_.size()) + " steps");
      }
      return script_[step];
    case ScheduleKind::Adaptive:
      return adaptive_(g, c, step);
  }
  throw Error(ErrorCode::ScheduleExhausted, "unknown schedule kind");
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Silent: return "silent";
    case StopReason::StepBudget: return "step_budget";
    case StopReason::Predicate: return "predicate";
    case StopReason::ConvergedWindow: return "converged_window";
  }
  return "unknown";
}

ExecutionTrace run(const ProtocolSpec& p, const CommGraph& g, Schedule& sched, std::size_t max_steps,
                   const StopCondition& stop, std::optional<Configuration> start) {
  ExecutionTrace trace;
  trace.initial = start ? std::move(*start) : initial_configuration(p, g);
  check_configuration(p, g, trace.initial);
  Configuration c = trace.initial;

  const std::size_t window =
      stop.window != 0 ? stop.window : 50 * std::max<std::size_t>(g.ordered_pairs().size(), 1);
  std::size_t unchanged_colors = 0;
  // Silence can only start after a state change, so it is rechecked only then.
  bool recheck_silence = true;

  for (std::size_t t = 0;; ++t) {
    if (stop.kind == StopCondition::Kind::Silent && recheck_silence) {
      recheck_silence = false;
      if (is_silent(p, g, c)) {
        trace.stop_reason = StopReason::Silent;
        break;
      }
    }
    if (stop.kind == StopCondition::Kind::Predicate && stop.predicate(c)) {
      trace.stop_reason = StopReason::Predicate;
      break;
    }
    if (stop.kind == StopCondition::Kind::Window && unchanged_colors >= window) {
      trace.stop_reason = StopReason::ConvergedWindow;
      trace.heuristic = true;
      break;
    }
    if (t >= max_steps) {
      trace.stop_reason = StopReason::StepBudget;
      break;
    }

    const Interaction i = sched.next_interaction(g, c, t);
    if (i.initiator == i.responder || !g.adjacent(i.initiator, i.responder)) {
      throw Error(ErrorCode::IllegalInteraction,
                  "schedule produced (" + i.initiator.to_string() + "," + i.responder.to_string() + ")");
    }
    const StatePair pre = endpoint_states(c, i);
    const StatePair post = transition(p, c, i);
    trace.steps.push_back({t, i, pre, post});
    if (pre == post) {
      ++unchanged_colors;
      continue;
    }
    recheck_silence = true;
    bool color_changed = false;
    if (!i.initiator.is_base_station()) color_changed |= p.color_of(pre.first) != p.color_of(post.first);
    if (!i.responder.is_base_station()) color_changed |= p.color_of(pre.second) != p.color_of(post.second);
    unchanged_colors = color_changed ? 0 : unchanged_colors + 1;
    assign_endpoints(c, i, post);
  }
  trace.final = std::move(c);
  return trace;
}

Configuration replay(const ProtocolSpec& p, const CommGraph& g, const ExecutionTrace& trace) {
  check_configuration(p, g, trace.initial);
  Configuration c = trace.initial;
  for (const auto& step : trace.steps) {
    if (!g.adjacent(step.interaction.initiator, step.interaction.responder)) {
      throw Error(ErrorCode::IncompatibleTrace, "step " + std::to_string(step.t) + " is not an edge");
    }
    if (endpoint_states(c, step.interaction) != step.pre) {
      throw Error(ErrorCode::IncompatibleTrace, "pre-states differ at step " + std::to_string(step.t));
    }
    assign_endpoints(c, step.interaction, transition(p, c, step.interaction));
  }
  return c;
}

std::vector<Interaction> interactions_of(const ExecutionTrace& trace) {
  std::vector<Interaction> out;
  out.reserve(trace.steps.size());
  for (const auto& s : trace.steps) out.push_back(s.interaction);
  return out;
}

}  // namespace bipart
