#include "bipart/core.hpp"

#include <algorithm>

#include "bipart/error.hpp"

namespace bipart {

ProtocolSpec::ProtocolSpec(std::string name, std::vector<std::string> agent_states,
                           std::vector<Color> colors, StateId agent_init,
                           std::vector<std::string> bs_states, std::optional<StateId> bs_init)
    : name_(std::move(name)),
      agent_states_(std::move(agent_states)),
      colors_(std::move(colors)),
      agent_init_(agent_init),
      bs_states_(std::move(bs_states)),
      bs_init_(bs_init) {
  const std::size_t qa = agent_states_.size();
  const std::size_t qb = bs_states_.size();
  if (qa == 0) throw Error(ErrorCode::InvalidSize, "protocol needs at least one agent state");
  if (colors_.size() != qa) throw Error(ErrorCode::InvalidSize, "color map must cover every state");
  if (agent_init_ >= qa) throw Error(ErrorCode::InvalidIndex, "agent initial state out of range");
  if (bs_init_ && *bs_init_ >= qb) throw Error(ErrorCode::InvalidIndex, "bs initial state out of range");

  agent_table_.resize(qa * qa);
  for (std::size_t p = 0; p < qa; ++p)
    for (std::size_t q = 0; q < qa; ++q)
      agent_table_[p * qa + q] = {static_cast<StateId>(p), static_cast<StateId>(q)};
  bs_agent_table_.resize(qb * qa);
  agent_bs_table_.resize(qa * qb);
  for (std::size_t b = 0; b < qb; ++b) {
    for (std::size_t a = 0; a < qa; ++a) {
      bs_agent_table_[b * qa + a] = {static_cast<StateId>(b), static_cast<StateId>(a)};
      agent_bs_table_[a * qb + b] = {static_cast<StateId>(a), static_cast<StateId>(b)};
    }
  }
}

std::optional<StateId> ProtocolSpec::find_agent_state(const std::string& name) const {
  auto it = std::find(agent_states_.begin(), agent_states_.end(), name);
  if (it == agent_states_.end()) return std::nullopt;
  return static_cast<StateId>(it - agent_states_.begin());
}

std::optional<StateId> ProtocolSpec::find_bs_state(const std::string& name) const {
  auto it = std::find(bs_states_.begin(), bs_states_.end(), name);
  if (it == bs_states_.end()) return std::nullopt;
  return static_cast<StateId>(it - bs_states_.begin());
}

std::vector<StateId> ProtocolSpec::bs_initial_states() const {
  if (bs_init_) return {*bs_init_};
  std::vector<StateId> all(bs_states_.size());
  for (std::size_t b = 0; b < all.size(); ++b) all[b] = static_cast<StateId>(b);
  return all;
}

void ProtocolSpec::validate() const {
  const std::size_t qa = agent_states_.size();
  const std::size_t qb = bs_states_.size();
  for (auto [p, q] : agent_table_) {
    if (p >= qa || q >= qa) throw Error(ErrorCode::CorruptConfiguration, name_ + ": agent rule leaves Q_p");
  }
  for (auto [b, a] : bs_agent_table_) {
    if (b >= qb || a >= qa) throw Error(ErrorCode::CorruptConfiguration, name_ + ": bs rule leaves Q");
  }
  for (auto [a, b] : agent_bs_table_) {
    if (b >= qb || a >= qa) throw Error(ErrorCode::CorruptConfiguration, name_ + ": bs rule leaves Q");
  }
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  auto mix = [&h](std::size_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  for (auto s : c.agents) mix(s);
  mix(c.bs ? static_cast<std::size_t>(*c.bs) + 1 : 0);
  return h;
}

Configuration initial_configuration(const ProtocolSpec& p, const CommGraph& g,
                                    std::optional<StateId> bs_start) {
  Configuration c;
  c.agents.assign(g.n_agents(), p.agent_init());
  if (g.has_bs()) {
    if (!p.uses_bs()) throw Error(ErrorCode::CorruptConfiguration, p.name() + " has no base-station states");
    c.bs = bs_start ? *bs_start : p.bs_init().value_or(0);
  }
  check_configuration(p, g, c);
  return c;
}

void check_configuration(const ProtocolSpec& p, const CommGraph& g, const Configuration& c) {
  if (c.agents.size() != g.n_agents()) {
    throw Error(ErrorCode::CorruptConfiguration, "configuration length does not match the graph");
  }
  if (c.bs.has_value() != g.has_bs()) {
    throw Error(ErrorCode::CorruptConfiguration, "base-station state presence does not match the graph");
  }
  for (auto s : c.agents) {
    if (s >= p.agent_state_count()) throw Error(ErrorCode::CorruptConfiguration, "unknown agent state");
  }
  if (c.bs && *c.bs >= p.bs_state_count()) {
    throw Error(ErrorCode::CorruptConfiguration, "unknown base-station state");
  }
}

StatePair endpoint_states(const Configuration& c, const Interaction& i) {
  auto state = [&c](Endpoint e) { return e.is_base_station() ? *c.bs : c.agents[e.agent_index()]; };
  return {state(i.initiator), state(i.responder)};
}

StatePair transition(const ProtocolSpec& p, const Configuration& c, const Interaction& i) {
  if (i.initiator.is_base_station()) {
    return p.bs_agent_delta(*c.bs, c.agents[i.responder.agent_index()]);
  }
  if (i.responder.is_base_station()) {
    return p.agent_bs_delta(c.agents[i.initiator.agent_index()], *c.bs);
  }
  return p.agent_delta(c.agents[i.initiator.agent_index()], c.agents[i.responder.agent_index()]);
}

void assign_endpoints(Configuration& c, const Interaction& i, StatePair states) {
  auto slot = [&c](Endpoint e) -> StateId& {
    return e.is_base_station() ? *c.bs : c.agents[e.agent_index()];
  };
  slot(i.initiator) = states.first;
  slot(i.responder) = states.second;
}

Configuration apply(const ProtocolSpec& p, const CommGraph& g, const Configuration& c,
                    const Interaction& i) {
  if (i.initiator == i.responder || !g.adjacent(i.initiator, i.responder)) {
    throw Error(ErrorCode::IllegalInteraction,
                "(" + i.initiator.to_string() + "," + i.responder.to_string() + ") is not an edge");
  }
  check_configuration(p, g, c);
  Configuration next = c;
  assign_endpoints(next, i, transition(p, c, i));
  return next;
}

std::vector<Interaction> enabled(const ProtocolSpec& p, const CommGraph& g, const Configuration& c) {
  check_configuration(p, g, c);
  std::vector<Interaction> out;
  for (const auto& i : g.ordered_pairs()) {
    if (transition(p, c, i) != endpoint_states(c, i)) out.push_back(i);
  }
  return out;
}

bool is_silent(const ProtocolSpec& p, const CommGraph& g, const Configuration& c) {
  for (const auto& i : g.ordered_pairs()) {
    if (transition(p, c, i) != endpoint_states(c, i)) return false;
  }
  return true;
}

ColorCounts color_counts(const ProtocolSpec& p, const Configuration& c) {
  ColorCounts counts;
  for (auto s : c.agents) {
    if (p.color_of(s) == Color::Red) {
      ++counts.red;
    } else {
      ++counts.blue;
    }
  }
  return counts;
}

bool is_symmetric(const ProtocolSpec& p) {
  const auto qa = static_cast<StateId>(p.agent_state_count());
  const auto qb = static_cast<StateId>(p.bs_state_count());
  for (StateId a = 0; a < qa; ++a) {
    for (StateId b = 0; b < qa; ++b) {
      auto [a2, b2] = p.agent_delta(a, b);
      if (p.agent_delta(b, a) != StatePair{b2, a2}) return false;
    }
  }
  for (StateId bs = 0; bs < qb; ++bs) {
    for (StateId a = 0; a < qa; ++a) {
      auto [bs2, a2] = p.bs_agent_delta(bs, a);
      if (p.agent_bs_delta(a, bs) != StatePair{a2, bs2}) return false;
    }
  }
  return true;
}

std::string format_configuration(const ProtocolSpec& p, const Configuration& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.agents.size(); ++i) {
    if (i) out += ' ';
    out += p.agent_state_name(c.agents[i]);
  }
  out += ']';
  if (c.bs) out += " bs=" + p.bs_state_name(*c.bs);
  return out;
}

}  // namespace bipart
