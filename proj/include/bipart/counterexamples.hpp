#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bipart/core.hpp"
#include "bipart/graph.hpp"
#include "bipart/scheduler.hpp"

namespace bipart {

struct StarvationReport {
  bool victim_still_initial = false;
  bool pairs_covered_per_period = false;
  std::size_t periods = 0;
  std::size_t undo_steps = 0;
  // Occurrences of each ordered pair over the whole run, in period order.
  std::vector<std::size_t> pair_counts;
  ExecutionTrace trace;
};

/// bs-global3 on a 3-agent line with the base station at agent 0. A
/// periodic schedule (outward sweep, then inward sweep) pulls agent 2 out of
/// `initial` and pushes it back within every period. Runs `periods` full
/// periods.
StarvationReport starvation_run(std::size_t periods);

struct StarvationContrast {
  bool victim_left_initial = false;
  ExecutionTrace trace;
};

/// Same setting under a uniform random schedule, up to `max_steps`.
StarvationContrast starvation_contrast(std::uint64_t seed, std::size_t max_steps);

struct DoubledTraceReport {
  ExecutionTrace base_trace;
  ExecutionTrace doubled_trace;
  // Doubled steps after which both copies still mirrored the base run.
  std::size_t equivalence_held_through = 0;
  std::optional<std::size_t> first_violation;
  long base_imbalance = 0;
  long final_imbalance = 0;
};

/// Replays `trace` (recorded on `g`) on double_bridge(g, alpha, beta), each
/// base step (x,y) becoming (x,y) then (x+n,y+n).
DoubledTraceReport replay_double_bridge(const ProtocolSpec& p, const CommGraph& g,
                                        const ExecutionTrace& trace, std::size_t alpha, std::size_t beta);

/// Runs `p` on a 3-ring under a round-robin schedule seeded by `seed` for
/// `settle_steps`, then replays it on ring_interleave_double().
DoubledTraceReport ring_doubling_demo(const ProtocolSpec& p, std::uint64_t seed, std::size_t settle_steps);

/// The two 6-ring interactions that stand in for one 3-ring interaction.
std::pair<Interaction, Interaction> ring_double_steps(const Interaction& base);

}  // namespace bipart
