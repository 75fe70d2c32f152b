#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bipart {

/// One side of an interaction: either an agent index or the base station.
/// The base station orders before agent 0.
class Endpoint {
 public:
  static constexpr Endpoint base_station() { return Endpoint(-1); }
  static constexpr Endpoint agent(std::size_t index) {
    return Endpoint(static_cast<std::int64_t>(index));
  }

  constexpr bool is_base_station() const { return value_ < 0; }
  constexpr std::size_t agent_index() const { return static_cast<std::size_t>(value_); }

  std::string to_string() const;
  static Endpoint parse(const std::string& text);

  constexpr auto operator<=>(const Endpoint&) const = default;

 private:
  explicit constexpr Endpoint(std::int64_t v) : value_(v) {}
  std::int64_t value_;
};

struct Interaction {
  Endpoint initiator;
  Endpoint responder;

  constexpr auto operator<=>(const Interaction&) const = default;
};

/// Undirected connected communication graph over agents 0..n-1, with an
/// optional base station kept outside the agent index space.
class CommGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  /// Edges are normalized to (min, max) and sorted. Throws bipart::Error on
  /// self-loops, duplicates, out-of-range indices, an empty base-station
  /// attachment, or a disconnected result.
  CommGraph(std::size_t n_agents, std::vector<Edge> edges,
            std::optional<std::vector<std::size_t>> bs_attach = std::nullopt);

  std::size_t n_agents() const { return n_agents_; }
  bool has_bs() const { return has_bs_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::size_t>& bs_edges() const { return bs_edges_; }

  const std::vector<std::size_t>& neighbors(std::size_t agent) const { return adjacency_[agent]; }
  bool bs_adjacent(std::size_t agent) const;
  bool has_edge(std::size_t u, std::size_t v) const;
  bool adjacent(Endpoint a, Endpoint b) const;

  /// Every ordered adjacent pair, sorted initiator-major (base station first).
  const std::vector<Interaction>& ordered_pairs() const { return ordered_pairs_; }

  bool operator==(const CommGraph& other) const {
    return n_agents_ == other.n_agents_ && has_bs_ == other.has_bs_ && edges_ == other.edges_ &&
           bs_edges_ == other.bs_edges_;
  }

 private:
  std::size_t n_agents_;
  bool has_bs_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> bs_edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<Interaction> ordered_pairs_;
};

enum class GraphKind { Complete, Ring, Line, Star, RandomConnected };

std::string to_string(GraphKind kind);

/// Builds a graph of the given family. `seed` is only read for
/// RandomConnected: a uniform spanning tree (Aldous-Broder walk on K_n) plus
/// each remaining pair, in lexicographic order, with probability 1/2.
CommGraph build(GraphKind kind, std::size_t n, std::uint64_t seed = 0,
                std::optional<std::vector<std::size_t>> bs_attach = std::nullopt);

/// Two disjoint copies of `g` joined by the single edge (alpha, n + beta).
CommGraph double_bridge(const CommGraph& g, std::size_t alpha, std::size_t beta);

/// Four disjoint copies of `g` with a 4-clique over the copies of `rep`.
CommGraph quad_clique(const CommGraph& g, std::size_t rep);

/// The 6-cycle 0-1-5-3-4-2-0 that interleaves two copies of a 3-ring.
CommGraph ring_interleave_double();

/// True iff some simple cycle made only of agents has length divisible by l.
/// Supported for n_agents <= 12.
bool violates_mod_l_condition(const CommGraph& g, int l);

/// All connected labeled graphs on n agents (n <= 6). With `with_bs`, every
/// graph on n agents plus a base station where the whole vertex set is
/// connected; agents alone need not be.
std::vector<CommGraph> enumerate_connected(std::size_t n, bool with_bs);

/// Text format: `n <count>`, `bs <indices|->`, then one `e <u> <v>` per edge.
std::string to_text(const CommGraph& g);
CommGraph parse_graph_text(const std::string& text);

}  // namespace bipart
