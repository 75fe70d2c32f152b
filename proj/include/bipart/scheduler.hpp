#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bipart/core.hpp"
#include "bipart/graph.hpp"
#include "bipart/prng.hpp"

namespace bipart {

enum class ScheduleKind { UniformRandom, RoundRobin, Scripted, Adaptive };

/// Adversary callback: picks the next interaction from the current
/// configuration. May keep its own state between calls.
using AdaptiveFn =
    std::function<Interaction(const CommGraph&, const Configuration&, std::size_t step)>;

/// Every ordered adjacent pair once, lexicographic (base station first).
/// A nonzero seed shuffles that list with SplitMix64-driven Fisher-Yates.
std::vector<Interaction> round_robin_period(const CommGraph& g, std::uint64_t permutation_seed = 0);

class Schedule {
 public:
  static Schedule uniform_random(std::uint64_t seed);
  static Schedule round_robin(std::uint64_t permutation_seed = 0);
  static Schedule scripted(std::vector<Interaction> steps);
  static Schedule adaptive(std::string adversary_id, AdaptiveFn fn);

  ScheduleKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  std::string describe() const;

  /// Interaction for `step`. Uniform draws consume the generator, so a
  /// uniform schedule must be queried with consecutive steps.
  Interaction next_interaction(const CommGraph& g, const Configuration& c, std::size_t step);

 private:
  explicit Schedule(ScheduleKind kind) : kind_(kind) {}

  ScheduleKind kind_;
  std::uint64_t seed_ = 0;
  SplitMix64 rng_{0};
  std::vector<Interaction> script_;
  std::string adversary_id_;
  AdaptiveFn adaptive_;
  // Round-robin period cached for the last graph seen.
  const CommGraph* period_graph_ = nullptr;
  std::vector<Interaction> period_;
};

struct StopCondition {
  enum class Kind { BudgetOnly, Silent, Predicate, Window };

  Kind kind = Kind::Silent;
  std::string predicate_id;
  std::function<bool(const Configuration&)> predicate;
  std::size_t window = 0;  // 0 selects 50 * |ordered pairs|

  static StopCondition budget_only() { return {Kind::BudgetOnly, {}, {}, 0}; }
  static StopCondition silent() { return {Kind::Silent, {}, {}, 0}; }
  static StopCondition when(std::string id, std::function<bool(const Configuration&)> pred) {
    return {Kind::Predicate, std::move(id), std::move(pred), 0};
  }
  static StopCondition color_window(std::size_t w = 0) { return {Kind::Window, {}, {}, w}; }
};

enum class StopReason { Silent, StepBudget, Predicate, ConvergedWindow };

std::string to_string(StopReason reason);

struct TraceStep {
  std::size_t t = 0;
  Interaction interaction;
  StatePair pre;
  StatePair post;

  bool operator==(const TraceStep&) const = default;
};

struct ExecutionTrace {
  std::vector<TraceStep> steps;
  Configuration initial;
  Configuration final;
  StopReason stop_reason = StopReason::StepBudget;
  // Set when the run ended on the color window, which is a heuristic.
  bool heuristic = false;

  bool operator==(const ExecutionTrace&) const = default;
};

/// Runs `p` on `g` from `start` (default: designated initial configuration)
/// until the stop condition holds or `max_steps` interactions were applied.
ExecutionTrace run(const ProtocolSpec& p, const CommGraph& g, Schedule& sched, std::size_t max_steps,
                   const StopCondition& stop,
                   std::optional<Configuration> start = std::nullopt);

/// Re-applies the recorded interactions from `trace.initial`; throws
/// IncompatibleTrace if any recorded pre-state disagrees.
Configuration replay(const ProtocolSpec& p, const CommGraph& g, const ExecutionTrace& trace);

std::vector<Interaction> interactions_of(const ExecutionTrace& trace);

}  // namespace bipart
