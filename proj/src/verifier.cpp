#include "bipart/verifier.hpp"

#include <algorithm>
#include <deque>

#include "bipart/error.hpp"
#include "bipart/protocols.hpp"

namespace bipart {

std::optional<std::uint32_t> ReachabilityGraph::find(const Configuration& c) const {
  auto it = index.find(c);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

namespace {

void check_state_space(const ProtocolSpec& p, const CommGraph& g, const VerifyOptions& opts) {
  const std::uint64_t per_agent = p.agent_state_count();
  std::uint64_t bound = g.has_bs() ? std::max<std::uint64_t>(p.bs_state_count(), 1) : 1;
  for (std::size_t i = 0; i < g.n_agents(); ++i) {
    if (bound > opts.state_cap / per_agent) {
      throw Error(ErrorCode::StateSpaceTooLarge,
                  p.name() + " on " + std::to_string(g.n_agents()) + " agents exceeds the cap of " +
                      std::to_string(opts.state_cap));
    }
    bound *= per_agent;
  }
  if (bound > opts.state_cap) {
    throw Error(ErrorCode::StateSpaceTooLarge, p.name() + " exceeds the state cap");
  }
}

// Iterative Tarjan. SCC ids are assigned in completion order, so every edge
// points to an SCC whose id is not larger than the source's.
void compute_sccs(ReachabilityGraph& rg) {
  const std::size_t n = rg.size();
  constexpr std::uint32_t kUnvisited = UINT32_MAX;
  std::vector<std::uint32_t> order(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  rg.scc_of.assign(n, 0);
  rg.scc_terminal.clear();
  std::uint32_t counter = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t edge;
  };
  std::vector<Frame> call;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (order[root] != kUnvisited) continue;
    call.push_back({root, 0});
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& succ = rg.successors[f.v];
      if (f.edge < succ.size()) {
        const std::uint32_t w = succ[f.edge++].target;
        if (order[w] == kUnvisited) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], order[w]);
        }
        continue;
      }
      const std::uint32_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == order[v]) {
        const auto id = static_cast<std::uint32_t>(rg.scc_terminal.size());
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          rg.scc_of[w] = id;
        } while (w != v);
        rg.scc_terminal.push_back(1);
      }
    }
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    for (const auto& e : rg.successors[v]) {
      if (rg.scc_of[e.target] != rg.scc_of[v]) rg.scc_terminal[rg.scc_of[v]] = 0;
    }
  }
}

}  // namespace

ReachabilityGraph reachable(const ProtocolSpec& p, const CommGraph& g, const VerifyOptions& opts) {
  check_state_space(p, g, opts);
  ReachabilityGraph rg;
  rg.n_agents = g.n_agents();

  auto intern = [&rg](Configuration c) -> std::pair<std::uint32_t, bool> {
    auto [it, inserted] = rg.index.try_emplace(c, static_cast<std::uint32_t>(rg.configs.size()));
    if (inserted) {
      rg.configs.push_back(std::move(c));
      rg.successors.emplace_back();
    }
    return {it->second, inserted};
  };

  std::deque<std::uint32_t> frontier;
  std::vector<std::optional<StateId>> starts;
  if (g.has_bs()) {
    for (auto b : p.bs_initial_states()) starts.emplace_back(b);
  } else {
    starts.emplace_back(std::nullopt);
  }
  for (const auto& start : starts) {
    auto [id, inserted] = intern(initial_configuration(p, g, start));
    rg.initials.push_back(id);
    if (inserted) frontier.push_back(id);
  }

  while (!frontier.empty()) {
    const std::uint32_t v = frontier.front();
    frontier.pop_front();
    for (const auto& i : g.ordered_pairs()) {
      const Configuration& c = rg.configs[v];
      const StatePair post = transition(p, c, i);
      if (post == endpoint_states(c, i)) continue;
      Configuration next = c;
      assign_endpoints(next, i, post);
      auto [id, inserted] = intern(std::move(next));
      if (inserted) frontier.push_back(id);
      rg.successors[v].push_back({id, i});
    }
  }
  compute_sccs(rg);
  return rg;
}

std::vector<std::uint32_t> reachable_from(const ReachabilityGraph& rg, std::uint32_t from) {
  std::vector<char> seen(rg.size(), 0);
  std::vector<std::uint32_t> out{from};
  seen[from] = 1;
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (const auto& e : rg.successors[out[k]]) {
      if (!seen[e.target]) {
        seen[e.target] = 1;
        out.push_back(e.target);
      }
    }
  }
  return out;
}

std::optional<StabilityCertificate> is_stable(const ReachabilityGraph& rg, std::uint32_t c,
                                              const ProtocolSpec& p) {
  const auto& base = rg.configs.at(c);
  StabilityCertificate cert;
  for (auto s : base.agents) cert.partition.push_back(p.color_of(s));
  for (auto v : reachable_from(rg, c)) {
    const auto& other = rg.configs[v];
    for (std::size_t a = 0; a < rg.n_agents; ++a) {
      if (p.color_of(other.agents[a]) != cert.partition[a]) return std::nullopt;
    }
  }
  for (auto color : cert.partition) (color == Color::Red ? cert.red : cert.blue)++;
  const auto diff = static_cast<long>(cert.red) - static_cast<long>(cert.blue);
  cert.balanced = diff >= -1 && diff <= 1;
  if (!cert.balanced) return std::nullopt;
  return cert;
}

std::vector<char> stable_configurations(const ReachabilityGraph& rg, const ProtocolSpec& p) {
  if (rg.n_agents > 32) throw Error(ErrorCode::NotSupported, "stability masks support at most 32 agents");
  // Two bits per agent: bit 2a = seen red, bit 2a+1 = seen blue.
  std::vector<std::uint64_t> mask(rg.scc_count(), 0);
  for (std::uint32_t v = 0; v < rg.size(); ++v) {
    const auto& c = rg.configs[v];
    std::uint64_t m = 0;
    for (std::size_t a = 0; a < rg.n_agents; ++a) {
      m |= std::uint64_t{1} << (2 * a + (p.color_of(c.agents[a]) == Color::Red ? 0 : 1));
    }
    mask[rg.scc_of[v]] |= m;
  }
  // Members grouped by SCC; SCC ids ascend from sinks upward.
  std::vector<std::vector<std::uint32_t>> members(rg.scc_count());
  for (std::uint32_t v = 0; v < rg.size(); ++v) members[rg.scc_of[v]].push_back(v);
  for (std::uint32_t s = 0; s < rg.scc_count(); ++s) {
    for (auto v : members[s]) {
      for (const auto& e : rg.successors[v]) {
        if (rg.scc_of[e.target] != s) mask[s] |= mask[rg.scc_of[e.target]];
      }
    }
  }
  std::vector<char> stable(rg.size(), 0);
  for (std::uint32_t v = 0; v < rg.size(); ++v) {
    const std::uint64_t m = mask[rg.scc_of[v]];
    long red = 0, blue = 0;
    bool constant = true;
    for (std::size_t a = 0; a < rg.n_agents; ++a) {
      const auto bits = (m >> (2 * a)) & 3;
      if (bits == 3) {
        constant = false;
        break;
      }
      (bits == 1 ? red : blue)++;
    }
    stable[v] = constant && red - blue >= -1 && red - blue <= 1;
  }
  return stable;
}

GlobalVerdict verify_global(const ReachabilityGraph& rg, const ProtocolSpec& p) {
  const auto stable = stable_configurations(rg, p);
  std::vector<char> scc_ok(rg.scc_count(), 0);
  std::vector<std::vector<std::uint32_t>> members(rg.scc_count());
  for (std::uint32_t v = 0; v < rg.size(); ++v) members[rg.scc_of[v]].push_back(v);
  for (std::uint32_t s = 0; s < rg.scc_count(); ++s) {
    for (auto v : members[s]) {
      if (stable[v]) scc_ok[s] = 1;
      for (const auto& e : rg.successors[v]) scc_ok[s] |= scc_ok[rg.scc_of[e.target]];
    }
  }
  GlobalVerdict verdict;
  verdict.configs = rg.size();
  verdict.stable_count = static_cast<std::size_t>(std::count(stable.begin(), stable.end(), 1));
  verdict.solves = true;
  for (std::uint32_t v = 0; v < rg.size(); ++v) {
    if (!scc_ok[rg.scc_of[v]]) {
      verdict.solves = false;
      verdict.witness = v;
      break;
    }
  }
  return verdict;
}

GlobalVerdict verify_global(const ProtocolSpec& p, const CommGraph& g, const VerifyOptions& opts) {
  return verify_global(reachable(p, g, opts), p);
}

std::size_t reachable_agent_state_count(const ReachabilityGraph& rg) {
  std::vector<char> seen;
  std::size_t count = 0;
  for (const auto& c : rg.configs) {
    for (auto s : c.agents) {
      if (s >= seen.size()) seen.resize(s + 1, 0);
      if (!seen[s]) {
        seen[s] = 1;
        ++count;
      }
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Predicate catalog

namespace {

struct PredicateName {
  Predicate pred;
  const char* name;
};

constexpr PredicateName kNames[] = {
    {Predicate::Lem1, "LEM1"},   {Predicate::Lem2, "LEM2"},   {Predicate::Lem3, "LEM3"},
    {Predicate::Lem4, "LEM4"},   {Predicate::Lem5, "LEM5"},   {Predicate::Lem6, "LEM6"},
    {Predicate::Lem9, "LEM9"},   {Predicate::Cor12, "COR12"}, {Predicate::Lem10, "LEM10"},
    {Predicate::MonoIni, "MONO-INI"}, {Predicate::TokenParity, "TOKEN-PARITY"},
};

bool depth_family(const ProtocolSpec& p) {
  return p.family() == Family::BsWeak || p.family() == Family::BsWeakModL;
}

bool token_family(const ProtocolSpec& p) {
  return p.family() == Family::NobsAsym4 || p.family() == Family::NobsSym5;
}

struct ColorTally {
  long ini = 0, r = 0, b = 0;
  bool operator==(const ColorTally&) const = default;
};

ColorTally tally(const Configuration& c) {
  ColorTally t;
  for (auto s : c.agents) {
    switch (bs_weak_state(s).color) {
      case BsColor::Ini: ++t.ini; break;
      case BsColor::R: ++t.r; break;
      case BsColor::B: ++t.b; break;
    }
  }
  return t;
}

// Counts of (r, b, b-with-token) for the token protocols.
struct TokenTally {
  long r = 0, b = 0, bw = 0;
};

TokenTally token_tally(const ProtocolSpec& p, const Configuration& c) {
  TokenTally t;
  const bool asym = p.family() == Family::NobsAsym4;
  for (auto s : c.agents) {
    if (s == (asym ? asym4::kRed : sym5::kRed)) ++t.r;
    if (s == (asym ? asym4::kBlue : sym5::kBlue)) ++t.b;
    if (s == (asym ? asym4::kBlueToken : sym5::kBlueToken)) ++t.bw;
  }
  return t;
}

PredicateResult fail(PredicateResult r, const Configuration& c, std::string detail) {
  r.holds = false;
  r.counterexample = c;
  r.detail = std::move(detail);
  return r;
}

bool is_color_assignment(const Configuration& c, const Interaction& i) {
  if (!i.initiator.is_base_station() && !i.responder.is_base_station()) return false;
  const Endpoint agent = i.initiator.is_base_station() ? i.responder : i.initiator;
  const auto s = bs_weak_state(c.agents[agent.agent_index()]);
  return s.depth == 1 && s.color == BsColor::Ini;
}

}  // namespace

std::string to_string(Predicate pred) {
  for (const auto& [p, name] : kNames)
    if (p == pred) return name;
  return "?";
}

Predicate parse_predicate(const std::string& text) {
  for (const auto& [p, name] : kNames)
    if (text == name) return p;
  throw Error(ErrorCode::Parse, "unknown predicate '" + text + "'");
}

const std::vector<Predicate>& all_predicates() {
  static const std::vector<Predicate> all = [] {
    std::vector<Predicate> v;
    for (const auto& [p, name] : kNames) v.push_back(p);
    return v;
  }();
  return all;
}

bool is_applicable(Predicate pred, const ProtocolSpec& p) {
  switch (pred) {
    case Predicate::Lem1:
    case Predicate::Lem2:
    case Predicate::Lem3:
    case Predicate::Lem5:
    case Predicate::Lem6:
      return depth_family(p);
    case Predicate::Lem4:
      return p.family() == Family::BsWeak;
    case Predicate::MonoIni:
      return depth_family(p) || p.family() == Family::BsGlobal3;
    case Predicate::Lem9:
      return p.family() == Family::NobsAsym4;
    case Predicate::Cor12:
      return p.family() == Family::NobsSym5;
    case Predicate::Lem10:
    case Predicate::TokenParity:
      return token_family(p);
  }
  return false;
}

std::size_t count_ini(const ProtocolSpec& p, const Configuration& c) {
  if (p.family() == Family::BsGlobal3) {
    return static_cast<std::size_t>(std::count(c.agents.begin(), c.agents.end(), global3::kInitial));
  }
  if (!depth_family(p)) throw Error(ErrorCode::InapplicablePredicate, p.name() + " has no initial color");
  return static_cast<std::size_t>(tally(c).ini);
}

std::size_t count_tokens(const ProtocolSpec& p, const Configuration& c) {
  if (!token_family(p)) throw Error(ErrorCode::InapplicablePredicate, p.name() + " has no tokens");
  std::size_t tokens = 0;
  for (auto s : c.agents) {
    if (p.family() == Family::NobsAsym4) {
      tokens += s == asym4::kRedToken || s == asym4::kBlueToken;
    } else {
      tokens += s == sym5::kRedToken0 || s == sym5::kRedToken1 || s == sym5::kBlueToken;
    }
  }
  return tokens;
}

PredicateResult check_predicate(const ReachabilityGraph& rg, const ProtocolSpec& p, const CommGraph& g,
                                Predicate pred) {
  if (!is_applicable(pred, p)) {
    throw Error(ErrorCode::InapplicablePredicate, to_string(pred) + " does not apply to " + p.name());
  }
  PredicateResult result{pred, true, std::nullopt, {}};
  const auto n = rg.size();

  switch (pred) {
    case Predicate::Lem1:
      for (std::uint32_t v = 0; v < n; ++v) {
        const auto before = tally(rg.configs[v]);
        for (const auto& e : rg.successors[v]) {
          if (is_color_assignment(rg.configs[v], e.via)) continue;
          if (!(tally(rg.configs[e.target]) == before)) {
            return fail(result, rg.configs[v], "color counts change on a non-assignment interaction");
          }
        }
      }
      break;
    case Predicate::Lem2:
      for (std::uint32_t v = 0; v < n; ++v) {
        for (const auto& e : rg.successors[v]) {
          for (std::size_t a = 0; a < rg.n_agents; ++a) {
            const int d = bs_weak_state(rg.configs[v].agents[a]).depth;
            if (d != 0 && bs_weak_state(rg.configs[e.target].agents[a]).depth != d) {
              return fail(result, rg.configs[v], "agent " + std::to_string(a) + " changes a set depth");
            }
          }
        }
      }
      break;
    case Predicate::Lem3:
      for (std::uint32_t v = 0; v < n; ++v) {
        if (!rg.in_terminal_scc(v)) continue;
        for (auto s : rg.configs[v].agents) {
          if (bs_weak_state(s).depth == 0) return fail(result, rg.configs[v], "unset depth in a terminal SCC");
        }
      }
      break;
    case Predicate::Lem4:
      for (std::uint32_t v = 0; v < n; ++v) {
        const auto& c = rg.configs[v];
        for (std::size_t a = 0; a < rg.n_agents; ++a) {
          const int d = bs_weak_state(c.agents[a]).depth;
          if (d == 0) continue;
          bool ok = false;
          if (d == 1) {
            ok = g.bs_adjacent(a);
          } else {
            for (auto w : g.neighbors(a)) ok |= bs_weak_state(c.agents[w]).depth == d - 1;
          }
          if (!ok) return fail(result, c, "agent " + std::to_string(a) + " has no parent at depth-1");
        }
      }
      break;
    case Predicate::Lem5:
      for (std::uint32_t v = 0; v < n; ++v) {
        if (rg.in_terminal_scc(v) && tally(rg.configs[v]).ini != 0) {
          return fail(result, rg.configs[v], "#ini > 0 in a terminal SCC");
        }
      }
      break;
    case Predicate::Lem6:
      // Checked per start so the relation is anchored at that start's RB.
      for (auto root : rg.initials) {
        const StateId start = *rg.configs[root].bs;
        const long offset = start == kNextRed ? 1 : -1;
        for (auto v : reachable_from(rg, root)) {
          const auto& c = rg.configs[v];
          const auto t = tally(c);
          const long diff = t.r - t.b;
          const bool ok = *c.bs == start ? diff == 0 : diff == offset;
          if (!ok) return fail(result, c, "#r-#b = " + std::to_string(diff) + " disagrees with RB");
        }
      }
      break;
    case Predicate::Lem9:
    case Predicate::Cor12:
      for (std::uint32_t v = 0; v < n; ++v) {
        const auto t = token_tally(p, rg.configs[v]);
        if (t.r != t.b + 2 * t.bw) return fail(result, rg.configs[v], "#r != #b + 2*#bw");
      }
      break;
    case Predicate::Lem10:
      for (std::uint32_t v = 0; v < n; ++v) {
        if (rg.in_terminal_scc(v) && count_tokens(p, rg.configs[v]) > 1) {
          return fail(result, rg.configs[v], "#token > 1 in a terminal SCC");
        }
      }
      break;
    case Predicate::MonoIni:
      for (std::uint32_t v = 0; v < n; ++v) {
        const auto before = count_ini(p, rg.configs[v]);
        for (const auto& e : rg.successors[v]) {
          if (count_ini(p, rg.configs[e.target]) > before) {
            return fail(result, rg.configs[v], "#ini increases along an edge");
          }
        }
      }
      break;
    case Predicate::TokenParity:
      for (std::uint32_t v = 0; v < n; ++v) {
        if (count_tokens(p, rg.configs[v]) % 2 != rg.n_agents % 2) {
          return fail(result, rg.configs[v], "#token parity differs from n");
        }
      }
      break;
  }
  return result;
}

}  // namespace bipart
