#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bipart/graph.hpp"
#include "bipart/scheduler.hpp"

namespace bipart::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTooLarge = 3;

/// `ring:5`, `line:4`, `complete:6`, `star:5`, `random:7:SEED`, `file:PATH`.
struct GraphSpec {
  std::optional<GraphKind> kind;  // empty for file:
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string path;
};

GraphSpec parse_graph_spec(const std::string& text);
std::string format(const GraphSpec& spec);

/// `none` or `attach:0,1,...`.
std::optional<std::vector<std::size_t>> parse_bs_spec(const std::string& text);
std::string format_bs_spec(const std::optional<std::vector<std::size_t>>& attach);

CommGraph make_graph(const GraphSpec& spec, const std::optional<std::vector<std::size_t>>& attach);

/// `random`, `roundrobin`, `script:PATH`.
struct SchedulerSpec {
  ScheduleKind kind = ScheduleKind::UniformRandom;
  std::string script_path;
};

SchedulerSpec parse_scheduler_spec(const std::string& text);
std::string format(const SchedulerSpec& spec);

/// `silent`, `window`, `window:W`, `predicate:no-ini`, `predicate:tokens-le-1`.
struct StopSpec {
  StopCondition::Kind kind = StopCondition::Kind::Silent;
  std::size_t window = 0;
  std::string predicate;
};

StopSpec parse_stop_spec(const std::string& text);
std::string format(const StopSpec& spec);

struct RunConfig {
  std::string protocol;
  GraphSpec graph;
  std::optional<std::vector<std::size_t>> bs;
  SchedulerSpec scheduler;
  std::uint64_t seed = 0;
  std::size_t max_steps = 1'000'000;
  StopSpec stop;
  std::string out;
  std::string format = "table";
};

/// Canonical flag string for a run; parsing it back yields the same config.
std::string format(const RunConfig& config);
RunConfig parse_run_config(const std::vector<std::string>& args);

/// Entry point shared by the binary and the tests. `args` excludes argv[0].
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bipart::cli
