#pragma once

#include <cstdint>
#include <string>

#include "bipart/core.hpp"

namespace bipart {

/// Three-state protocol for a base station under global fairness. The base
/// station alternately paints `initial` agents red and blue; `initial`
/// travels by swapping with painted agents.
ProtocolSpec bs_global3();

enum class BsColor : std::uint8_t { Ini, R, B };

/// Agent state of the depth-based base-station protocols. depth == 0 is the
/// unset depth, which only pairs with color Ini.
struct BsWeakState {
  BsColor color = BsColor::Ini;
  int depth = 0;

  bool operator==(const BsWeakState&) const = default;
};

/// Index layout: 0 is (ini, unset), then 1 + 3*(depth-1) + color.
StateId bs_weak_id(BsWeakState s);
BsWeakState bs_weak_state(StateId id);

/// Base-station state for the depth protocols: the color handed out next.
inline constexpr StateId kNextRed = 0;
inline constexpr StateId kNextBlue = 1;

/// Weak-fairness protocol with 3P+1 agent states. Builds a BFS-like depth
/// tree rooted at the base station and moves `ini` toward depth 1, where the
/// base station assigns alternating colors. Depths saturate at P.
ProtocolSpec bs_weak_3p1(int max_agents);

/// Same protocol with depths kept modulo l (3l+1 agent states). Valid on
/// graphs where no agent-only cycle has length divisible by l.
ProtocolSpec bs_weak_mod_l(int l);

/// Asymmetric four-state token protocol with no base station.
ProtocolSpec nobs_asym4();

/// Symmetric five-state token protocol with no base station.
ProtocolSpec nobs_sym5();

/// State indices of the token protocols.
namespace asym4 {
inline constexpr StateId kRedToken = 0;
inline constexpr StateId kBlueToken = 1;
inline constexpr StateId kRed = 2;
inline constexpr StateId kBlue = 3;
}  // namespace asym4

namespace sym5 {
inline constexpr StateId kRedToken0 = 0;
inline constexpr StateId kRedToken1 = 1;
inline constexpr StateId kBlueToken = 2;
inline constexpr StateId kRed = 3;
inline constexpr StateId kBlue = 4;
}  // namespace sym5

namespace global3 {
inline constexpr StateId kInitial = 0;
inline constexpr StateId kRed = 1;
inline constexpr StateId kBlue = 2;
inline constexpr StateId kBsRed = 0;
inline constexpr StateId kBsBlue = 1;
}  // namespace global3

/// Parses `bs-global3`, `bs-weak3p1:P`, `bs-weak-mod:l`, `nobs-asym4`,
/// `nobs-sym5`.
ProtocolSpec protocol_by_name(const std::string& name);

/// Number of agent states the protocol is advertised to use.
std::size_t advertised_state_bound(const ProtocolSpec& p);

/// Copy of `p` with the agent rules on (initiator, responder) and
/// (responder, initiator) reset to null. Keeps the protocol family.
ProtocolSpec delete_rule(const ProtocolSpec& p, StateId initiator, StateId responder);

}  // namespace bipart
