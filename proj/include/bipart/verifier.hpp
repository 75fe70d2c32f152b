#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bipart/core.hpp"
#include "bipart/graph.hpp"

namespace bipart {

struct VerifyOptions {
  // Upper bound on |Q_p|^n * max(1, |Q_b|) before exploring.
  std::uint64_t state_cap = 50'000'000;
};

struct SuccessorEdge {
  std::uint32_t target;
  Interaction via;
};

/// Explicit configuration graph. Only non-null interactions produce edges;
/// a configuration with no edges is silent.
struct ReachabilityGraph {
  std::size_t n_agents = 0;
  std::vector<Configuration> configs;
  std::vector<std::vector<SuccessorEdge>> successors;
  // One start configuration per admissible base-station start state.
  std::vector<std::uint32_t> initials;
  // Tarjan numbering: every edge goes to an SCC with an id <= its own.
  std::vector<std::uint32_t> scc_of;
  std::vector<char> scc_terminal;

  std::size_t size() const { return configs.size(); }
  std::size_t scc_count() const { return scc_terminal.size(); }
  bool in_terminal_scc(std::uint32_t c) const { return scc_terminal[scc_of[c]] != 0; }
  std::optional<std::uint32_t> find(const Configuration& c) const;

  std::unordered_map<Configuration, std::uint32_t, ConfigurationHash> index;
};

/// Breadth-first exploration from every initial configuration. Throws
/// StateSpaceTooLarge when the a-priori bound exceeds the cap.
ReachabilityGraph reachable(const ProtocolSpec& p, const CommGraph& g, const VerifyOptions& opts = {});

/// Indices of every configuration reachable from `from` (including itself).
std::vector<std::uint32_t> reachable_from(const ReachabilityGraph& rg, std::uint32_t from);

struct StabilityCertificate {
  std::vector<Color> partition;  // per agent: H_r or H_b
  std::size_t red = 0;
  std::size_t blue = 0;
  bool balanced = false;
};

/// Certificate iff every agent keeps one color across everything reachable
/// from `c` and the induced partition differs in size by at most one.
std::optional<StabilityCertificate> is_stable(const ReachabilityGraph& rg, std::uint32_t c,
                                              const ProtocolSpec& p);

/// Stability of every configuration at once, by propagating per-agent color
/// sets over the SCC condensation.
std::vector<char> stable_configurations(const ReachabilityGraph& rg, const ProtocolSpec& p);

struct GlobalVerdict {
  bool solves = false;
  std::optional<std::uint32_t> witness;
  std::size_t configs = 0;
  std::size_t stable_count = 0;
};

/// Under global fairness a run eventually stays in a terminal SCC and visits
/// all of it, so the protocol solves uniform bipartition iff every reachable
/// configuration can reach a stable one.
GlobalVerdict verify_global(const ReachabilityGraph& rg, const ProtocolSpec& p);
GlobalVerdict verify_global(const ProtocolSpec& p, const CommGraph& g, const VerifyOptions& opts = {});

std::size_t reachable_agent_state_count(const ReachabilityGraph& rg);

enum class Predicate { Lem1, Lem2, Lem3, Lem4, Lem5, Lem6, Lem9, Cor12, Lem10, MonoIni, TokenParity };

std::string to_string(Predicate pred);
Predicate parse_predicate(const std::string& text);
const std::vector<Predicate>& all_predicates();
bool is_applicable(Predicate pred, const ProtocolSpec& p);

struct PredicateResult {
  Predicate predicate;
  bool holds = true;
  std::optional<Configuration> counterexample;
  std::string detail;
};

/// Universal predicates are checked on every configuration or edge; eventual
/// ones (LEM3, LEM5, LEM10) on every configuration of every terminal SCC.
PredicateResult check_predicate(const ReachabilityGraph& rg, const ProtocolSpec& p, const CommGraph& g,
                                Predicate pred);

/// Agents still holding the initial color (depth protocols and bs-global3).
std::size_t count_ini(const ProtocolSpec& p, const Configuration& c);
/// Agents holding a token (token protocols).
std::size_t count_tokens(const ProtocolSpec& p, const Configuration& c);

}  // namespace bipart
