#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "bipart/core.hpp"
#include "bipart/scheduler.hpp"

namespace bipart {

/// {"agents": [state names...], "bs": "<name>"}; "bs" only with a base station.
nlohmann::json to_json(const ProtocolSpec& p, const Configuration& c);
Configuration configuration_from_json(const ProtocolSpec& p, const nlohmann::json& j);

struct TraceHeader {
  std::string protocol;
  std::string graph;
  std::uint64_t seed = 0;
  std::string schedule;
};

/// JSON Lines: one header record, then one record per step:
/// {"t":N,"i":"<endpoint>","r":"<endpoint>","pre":[..],"post":[..]}.
void write_trace_jsonl(std::ostream& out, const ProtocolSpec& p, const TraceHeader& header,
                       const ExecutionTrace& trace);

/// Interactions of every step record in a JSON Lines trace; records without
/// "i"/"r" (such as the header) are skipped.
std::vector<Interaction> read_script_jsonl(std::istream& in);

}  // namespace bipart
