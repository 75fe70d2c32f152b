#include "bipart/graph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

#include "bipart/error.hpp"
#include "bipart/prng.hpp"

namespace bipart {

std::string Endpoint::to_string() const {
  return is_base_station() ? std::string("bs") : std::to_string(value_);
}

Endpoint Endpoint::parse(const std::string& text) {
  if (text == "bs") return base_station();
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::Parse, "bad endpoint '" + text + "'");
  }
  return agent(value);
}

CommGraph::CommGraph(std::size_t n_agents, std::vector<Edge> edges,
                     std::optional<std::vector<std::size_t>> bs_attach)
    : n_agents_(n_agents), has_bs_(bs_attach.has_value()) {
  if (n_agents == 0) throw Error(ErrorCode::InvalidSize, "graph needs at least one agent");

  for (auto& [u, v] : edges) {
    if (u >= n_agents || v >= n_agents) {
      throw Error(ErrorCode::InvalidIndex,
                  "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    }
    if (u == v) throw Error(ErrorCode::InvalidGraph, "self-loop at " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw Error(ErrorCode::InvalidGraph, "duplicate edge");
  }
  edges_ = std::move(edges);

  if (bs_attach) {
    if (bs_attach->empty()) {
      throw Error(ErrorCode::InvalidBsAttachment, "base station needs at least one neighbor");
    }
    bs_edges_ = std::move(*bs_attach);
    std::sort(bs_edges_.begin(), bs_edges_.end());
    if (std::adjacent_find(bs_edges_.begin(), bs_edges_.end()) != bs_edges_.end()) {
      throw Error(ErrorCode::InvalidBsAttachment, "duplicate base-station attachment");
    }
    if (bs_edges_.back() >= n_agents) {
      throw Error(ErrorCode::InvalidBsAttachment,
                  "attachment index " + std::to_string(bs_edges_.back()) + " out of range");
    }
  }

  adjacency_.assign(n_agents, {});
  for (auto [u, v] : edges_) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

  // Connectivity over agents plus the base station (index n_agents).
  std::vector<char> seen(n_agents + 1, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    auto visit = [&](std::size_t w) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    };
    if (v == n_agents) {
      for (auto w : bs_edges_) visit(w);
      continue;
    }
    for (auto w : adjacency_[v]) visit(w);
    if (has_bs_ && bs_adjacent(v)) visit(n_agents);
  }
  if (reached != n_agents + (has_bs_ ? 1 : 0)) {
    throw Error(ErrorCode::InvalidGraph, "graph is not connected");
  }

  for (auto a : bs_edges_) {
    ordered_pairs_.push_back({Endpoint::base_station(), Endpoint::agent(a)});
  }
  for (std::size_t u = 0; u < n_agents; ++u) {
    if (bs_adjacent(u)) ordered_pairs_.push_back({Endpoint::agent(u), Endpoint::base_station()});
    for (auto v : adjacency_[u]) ordered_pairs_.push_back({Endpoint::agent(u), Endpoint::agent(v)});
  }
}

bool CommGraph::bs_adjacent(std::size_t agent) const {
  return std::binary_search(bs_edges_.begin(), bs_edges_.end(), agent);
}

bool CommGraph::has_edge(std::size_t u, std::size_t v) const {
  if (u >= n_agents_ || v >= n_agents_) return false;
  return std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v);
}

bool CommGraph::adjacent(Endpoint a, Endpoint b) const {
  if (a.is_base_station() && b.is_base_station()) return false;
  if (a.is_base_station()) return b.agent_index() < n_agents_ && bs_adjacent(b.agent_index());
  if (b.is_base_station()) return a.agent_index() < n_agents_ && bs_adjacent(a.agent_index());
  return has_edge(a.agent_index(), b.agent_index());
}

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::Complete: return "complete";
    case GraphKind::Ring: return "ring";
    case GraphKind::Line: return "line";
    case GraphKind::Star: return "star";
    case GraphKind::RandomConnected: return "random";
  }
  return "unknown";
}

namespace {

std::vector<CommGraph::Edge> random_connected_edges(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::set<CommGraph::Edge> tree;
  std::vector<char> visited(n, 0);
  std::size_t current = 0;
  std::size_t visited_count = 1;
  visited[0] = 1;
  while (visited_count < n) {
    std::size_t next = rng.below(n - 1);
    if (next >= current) ++next;
    if (!visited[next]) {
      visited[next] = 1;
      ++visited_count;
      tree.insert({std::min(current, next), std::max(current, next)});
    }
    current = next;
  }
  std::vector<CommGraph::Edge> edges(tree.begin(), tree.end());
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (tree.count({u, v})) continue;
      if (rng.next() >> 63) edges.emplace_back(u, v);
    }
  }
  return edges;
}

}  // namespace

CommGraph build(GraphKind kind, std::size_t n, std::uint64_t seed,
                std::optional<std::vector<std::size_t>> bs_attach) {
  if (n == 0) throw Error(ErrorCode::InvalidSize, "n must be at least 1");
  std::vector<CommGraph::Edge> edges;
  switch (kind) {
    case GraphKind::Complete:
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) edges.emplace_back(u, v);
      break;
    case GraphKind::Ring:
      for (std::size_t u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
      if (n >= 3) edges.emplace_back(0, n - 1);
      break;
    case GraphKind::Line:
      for (std::size_t u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
      break;
    case GraphKind::Star:
      for (std::size_t v = 1; v < n; ++v) edges.emplace_back(0, v);
      break;
    case GraphKind::RandomConnected:
      edges = random_connected_edges(n, seed);
      break;
  }
  return CommGraph(n, std::move(edges), std::move(bs_attach));
}

CommGraph double_bridge(const CommGraph& g, std::size_t alpha, std::size_t beta) {
  if (g.has_bs()) throw Error(ErrorCode::InvalidGraph, "double_bridge needs a graph without base station");
  if (!g.has_edge(alpha, beta)) {
    throw Error(ErrorCode::NotAnEdge,
                "(" + std::to_string(alpha) + "," + std::to_string(beta) + ") is not an edge");
  }
  const std::size_t n = g.n_agents();
  std::vector<CommGraph::Edge> edges;
  for (auto [u, v] : g.edges()) {
    edges.emplace_back(u, v);
    edges.emplace_back(u + n, v + n);
  }
  edges.emplace_back(alpha, n + beta);
  return CommGraph(2 * n, std::move(edges));
}

CommGraph quad_clique(const CommGraph& g, std::size_t rep) {
  if (g.has_bs()) throw Error(ErrorCode::InvalidGraph, "quad_clique needs a graph without base station");
  const std::size_t n = g.n_agents();
  if (rep >= n) throw Error(ErrorCode::InvalidIndex, "rep out of range");
  std::vector<CommGraph::Edge> edges;
  for (std::size_t copy = 0; copy < 4; ++copy) {
    for (auto [u, v] : g.edges()) edges.emplace_back(u + copy * n, v + copy * n);
  }
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b) edges.emplace_back(rep + a * n, rep + b * n);
  return CommGraph(4 * n, std::move(edges));
}

CommGraph ring_interleave_double() {
  return CommGraph(6, {{0, 1}, {1, 5}, {5, 3}, {3, 4}, {4, 2}, {2, 0}});
}

bool violates_mod_l_condition(const CommGraph& g, int l) {
  if (l < 3) throw Error(ErrorCode::InvalidModulus, "l must be at least 3");
  const std::size_t n = g.n_agents();
  if (n > 12) throw Error(ErrorCode::NotSupported, "cycle enumeration is limited to 12 agents");

  // Each simple cycle is rooted at its smallest vertex; the path only visits
  // larger vertices.
  std::vector<char> on_path(n, 0);
  bool found = false;
  auto dfs = [&](auto&& self, std::size_t root, std::size_t v, std::size_t length) -> void {
    for (auto w : g.neighbors(v)) {
      if (found) return;
      if (w == root && length >= 3 && length % static_cast<std::size_t>(l) == 0) {
        found = true;
        return;
      }
      if (w > root && !on_path[w]) {
        on_path[w] = 1;
        self(self, root, w, length + 1);
        on_path[w] = 0;
      }
    }
  };
  for (std::size_t root = 0; root < n && !found; ++root) {
    on_path[root] = 1;
    dfs(dfs, root, root, 1);
    on_path[root] = 0;
  }
  return found;
}

std::vector<CommGraph> enumerate_connected(std::size_t n, bool with_bs) {
  if (n == 0 || n > 6) throw Error(ErrorCode::NotSupported, "enumeration supports 1..6 agents");
  std::vector<CommGraph::Edge> pairs;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  const std::size_t bs_bits = with_bs ? n : 0;
  const std::size_t total_bits = pairs.size() + bs_bits;

  std::vector<CommGraph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total_bits); ++mask) {
    std::vector<CommGraph::Edge> edges;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (mask >> i & 1) edges.push_back(pairs[i]);
    std::optional<std::vector<std::size_t>> attach;
    if (with_bs) {
      attach.emplace();
      for (std::size_t a = 0; a < n; ++a)
        if (mask >> (pairs.size() + a) & 1) attach->push_back(a);
      if (attach->empty()) continue;
    }
    try {
      out.emplace_back(n, std::move(edges), std::move(attach));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidGraph) throw;
    }
  }
  return out;
}

std::string to_text(const CommGraph& g) {
  std::ostringstream os;
  os << "n " << g.n_agents() << "\nbs";
  if (!g.has_bs()) {
    os << " -";
  } else {
    for (auto a : g.bs_edges()) os << ' ' << a;
  }
  os << '\n';
  for (auto [u, v] : g.edges()) os << "e " << u << ' ' << v << '\n';
  return os.str();
}

CommGraph parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<std::size_t> n;
  bool saw_bs = false;
  std::optional<std::vector<std::size_t>> attach;
  std::vector<CommGraph::Edge> edges;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::Parse, "graph text line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "n") {
      std::size_t value = 0;
      if (n || !(ls >> value)) fail("bad 'n' line");
      n = value;
    } else if (tag == "bs") {
      if (!n || saw_bs) fail("'bs' must follow 'n' exactly once");
      saw_bs = true;
      std::string tok;
      std::vector<std::size_t> indices;
      bool dash = false;
      while (ls >> tok) {
        if (tok == "-") {
          dash = true;
          continue;
        }
        try {
          indices.push_back(Endpoint::parse(tok).agent_index());
        } catch (const Error&) {
          fail("bad attach index '" + tok + "'");
        }
      }
      if (dash && !indices.empty()) fail("'-' mixed with indices");
      if (!dash) attach = std::move(indices);
    } else if (tag == "e") {
      std::size_t u = 0, v = 0;
      if (!saw_bs || !(ls >> u >> v)) fail("bad edge line");
      edges.emplace_back(u, v);
    } else {
      fail("unknown tag '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra && tag != "bs") fail("trailing input");
  }
  if (!n || !saw_bs) throw Error(ErrorCode::Parse, "graph text needs 'n' and 'bs' lines");
  return CommGraph(*n, std::move(edges), std::move(attach));
}

}  // namespace bipart
