#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bipart/graph.hpp"

namespace bipart {

using StateId = std::uint16_t;
using StatePair = std::pair<StateId, StateId>;

enum class Color : std::uint8_t { Red, Blue };

/// Which of the built-in protocol families a spec belongs to. Invariant
/// predicates are only meaningful for their own family.
enum class Family { Custom, BsGlobal3, BsWeak, BsWeakModL, NobsAsym4, NobsSym5 };

/// Finite-state protocol with a total, deterministic transition table over
/// ordered (initiator, responder) pairs. Null transitions are stored
/// explicitly.
class ProtocolSpec {
 public:
  ProtocolSpec(std::string name, std::vector<std::string> agent_states, std::vector<Color> colors,
               StateId agent_init, std::vector<std::string> bs_states = {},
               std::optional<StateId> bs_init = std::nullopt);

  const std::string& name() const { return name_; }
  Family family() const { return family_; }
  int param() const { return param_; }
  void set_family(Family family, int param = 0) {
    family_ = family;
    param_ = param;
  }

  std::size_t agent_state_count() const { return agent_states_.size(); }
  std::size_t bs_state_count() const { return bs_states_.size(); }
  bool uses_bs() const { return !bs_states_.empty(); }

  const std::string& agent_state_name(StateId s) const { return agent_states_.at(s); }
  const std::string& bs_state_name(StateId s) const { return bs_states_.at(s); }
  std::optional<StateId> find_agent_state(const std::string& name) const;
  std::optional<StateId> find_bs_state(const std::string& name) const;

  Color color_of(StateId s) const { return colors_[s]; }
  StateId agent_init() const { return agent_init_; }

  /// Designated base-station start, or nullopt when the base station starts
  /// in an arbitrary state.
  std::optional<StateId> bs_init() const { return bs_init_; }

  /// Base-station start states the verifier must consider.
  std::vector<StateId> bs_initial_states() const;

  StatePair agent_delta(StateId initiator, StateId responder) const {
    return agent_table_[index(initiator, responder)];
  }
  /// Base station initiates: (bs, agent) -> (bs', agent').
  StatePair bs_agent_delta(StateId bs, StateId agent) const {
    return bs_agent_table_[bs * agent_states_.size() + agent];
  }
  /// Agent initiates: (agent, bs) -> (agent', bs').
  StatePair agent_bs_delta(StateId agent, StateId bs) const {
    return agent_bs_table_[agent * bs_states_.size() + bs];
  }

  void set_agent_rule(StateId p, StateId q, StatePair out) { agent_table_[index(p, q)] = out; }
  void set_bs_agent_rule(StateId bs, StateId agent, StatePair out) {
    bs_agent_table_[bs * agent_states_.size() + agent] = out;
  }
  void set_agent_bs_rule(StateId agent, StateId bs, StatePair out) {
    agent_bs_table_[agent * bs_states_.size() + bs] = out;
  }

  /// Installs `(p,q) -> out` and its mirror `(q,p) -> swap(out)`.
  void set_agent_rule_mirrored(StateId p, StateId q, StatePair out) {
    set_agent_rule(p, q, out);
    set_agent_rule(q, p, {out.second, out.first});
  }

  /// Checks totality and closure of every table entry. Throws on violation.
  void validate() const;

 private:
  std::size_t index(StateId p, StateId q) const { return p * agent_states_.size() + q; }

  std::string name_;
  Family family_ = Family::Custom;
  int param_ = 0;
  std::vector<std::string> agent_states_;
  std::vector<Color> colors_;
  StateId agent_init_;
  std::vector<std::string> bs_states_;
  std::optional<StateId> bs_init_;
  std::vector<StatePair> agent_table_;
  std::vector<StatePair> bs_agent_table_;
  std::vector<StatePair> agent_bs_table_;
};

struct Configuration {
  std::vector<StateId> agents;
  std::optional<StateId> bs;

  bool operator==(const Configuration&) const = default;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept;
};

/// All agents in the designated initial state; `bs_start` defaults to the
/// protocol's designated start, or its first base-station state.
Configuration initial_configuration(const ProtocolSpec& p, const CommGraph& g,
                                    std::optional<StateId> bs_start = std::nullopt);

/// Throws CorruptConfiguration if `c` does not fit `p` and `g`.
void check_configuration(const ProtocolSpec& p, const CommGraph& g, const Configuration& c);

/// States of (initiator, responder) as a pair, before or after a step.
StatePair endpoint_states(const Configuration& c, const Interaction& i);

/// Transition output for the two endpoints of `i` in `c`, without building a
/// new configuration. Assumes `i` and `c` are already validated.
StatePair transition(const ProtocolSpec& p, const Configuration& c, const Interaction& i);

/// Writes the two endpoint states of `i` into `c`.
void assign_endpoints(Configuration& c, const Interaction& i, StatePair states);

Configuration apply(const ProtocolSpec& p, const CommGraph& g, const Configuration& c,
                    const Interaction& i);

/// Ordered adjacent pairs whose transition is not null, in ordered_pairs order.
std::vector<Interaction> enabled(const ProtocolSpec& p, const CommGraph& g,
                                 const Configuration& c);

bool is_silent(const ProtocolSpec& p, const CommGraph& g, const Configuration& c);

struct ColorCounts {
  std::size_t red = 0;
  std::size_t blue = 0;

  long imbalance() const { return static_cast<long>(red) - static_cast<long>(blue); }
  bool operator==(const ColorCounts&) const = default;
};

ColorCounts color_counts(const ProtocolSpec& p, const Configuration& c);

bool is_symmetric(const ProtocolSpec& p);

std::string format_configuration(const ProtocolSpec& p, const Configuration& c);

}  // namespace bipart
