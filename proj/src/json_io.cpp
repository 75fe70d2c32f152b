#include "bipart/json_io.hpp"

#include <istream>
#include <ostream>

#include "bipart/error.hpp"

namespace bipart {

using nlohmann::json;

json to_json(const ProtocolSpec& p, const Configuration& c) {
  json agents = json::array();
  for (auto s : c.agents) agents.push_back(p.agent_state_name(s));
  json j = {{"agents", std::move(agents)}};
  if (c.bs) j["bs"] = p.bs_state_name(*c.bs);
  return j;
}

Configuration configuration_from_json(const ProtocolSpec& p, const json& j) {
  Configuration c;
  try {
    for (const auto& name : j.at("agents")) {
      auto s = p.find_agent_state(name.get<std::string>());
      if (!s) throw Error(ErrorCode::CorruptConfiguration, "unknown agent state " + name.dump());
      c.agents.push_back(*s);
    }
    if (j.contains("bs")) {
      auto s = p.find_bs_state(j.at("bs").get<std::string>());
      if (!s) throw Error(ErrorCode::CorruptConfiguration, "unknown base-station state " + j.at("bs").dump());
      c.bs = *s;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  return c;
}

namespace {

std::string state_name(const ProtocolSpec& p, Endpoint e, StateId s) {
  return e.is_base_station() ? p.bs_state_name(s) : p.agent_state_name(s);
}

}  // namespace

void write_trace_jsonl(std::ostream& out, const ProtocolSpec& p, const TraceHeader& header,
                       const ExecutionTrace& trace) {
  json head = {{"protocol", header.protocol},
               {"graph", header.graph},
               {"seed", header.seed},
               {"schedule", header.schedule},
               {"initial", to_json(p, trace.initial)}};
  out << head.dump() << '\n';
  for (const auto& step : trace.steps) {
    const auto& i = step.interaction;
    json rec = {{"t", step.t},
                {"i", i.initiator.to_string()},
                {"r", i.responder.to_string()},
                {"pre", {state_name(p, i.initiator, step.pre.first), state_name(p, i.responder, step.pre.second)}},
                {"post",
                 {state_name(p, i.initiator, step.post.first), state_name(p, i.responder, step.post.second)}}};
    out << rec.dump() << '\n';
  }
}

std::vector<Interaction> read_script_jsonl(std::istream& in) {
  std::vector<Interaction> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Parse, "script line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!rec.is_object() || !rec.contains("i") || !rec.contains("r")) continue;
    try {
      out.push_back({Endpoint::parse(rec["i"].get<std::string>()), Endpoint::parse(rec["r"].get<std::string>())});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Parse, "script line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace bipart
