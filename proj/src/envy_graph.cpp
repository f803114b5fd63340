#include "efx/envy_graph.hpp"

#include <algorithm>

namespace efx {

EnvyGraph::EnvyGraph(std::vector<AgentId> agents, std::vector<EnvyEdge> edges)
    : agents_(std::move(agents)), edges_(std::move(edges)) {
  const std::size_t k = agents_.size();
  if (k == 0) {
    throw EngineError("envy graph needs at least one agent");
  }
  if (!std::is_sorted(agents_.begin(), agents_.end())) {
    throw EngineError("envy graph agents must be ascending");
  }
  if (edges_.size() != k * k) {
    throw EngineError("envy graph edge table has the wrong size");
  }
}

int EnvyGraph::index_of(AgentId a) const {
  auto pos = std::lower_bound(agents_.begin(), agents_.end(), a);
  if (pos == agents_.end() || *pos != a) {
    throw EngineError("agent " + std::to_string(a) + " not in envy graph");
  }
  return static_cast<int>(pos - agents_.begin());
}

const EnvyEdge& EnvyGraph::edge(AgentId from, AgentId to) const {
  if (from == to) {
    throw EngineError("envy graph has no self edges");
  }
  const std::size_t k = agents_.size();
  return edges_[static_cast<std::size_t>(index_of(from)) * k +
                static_cast<std::size_t>(index_of(to))];
}

EnvyGraph build_graph(const Instance& inst, const AllocationState& st) {
  if (st.remaining.empty()) {
    throw EngineError("cannot build an envy graph with no remaining agents");
  }
  const std::size_t k = st.remaining.size();
  std::vector<Value> own(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    own[i] = bundle_value(inst, st.remaining[i],
                          st.bundles_remaining.at(st.remaining[i]));
  }
  std::vector<EnvyEdge> edges(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      EnvyEdge& e = edges[i * k + j];
      e.from = st.remaining[i];
      e.to = st.remaining[j];
      if (i == j) continue;  // diagonal entries are never read
      e.num = bundle_value(inst, e.from, st.bundles_remaining.at(e.to));
      e.den = own[i];
    }
  }
  return EnvyGraph(st.remaining, std::move(edges));
}

bool in_g_alpha(const EnvyEdge& e, Threshold alpha) {
  switch (alpha) {
    case Threshold::kZero:
      return e.num > 0;
    case Threshold::kOne:
      return e.num > e.den;
    case Threshold::kInvSqrt2:
      return compare_twice_square(e.num, e.den) > 0;
  }
  throw EngineError("unknown threshold");
}

std::vector<CycleInfo> decompose_cycles(const EnvyGraph& g) {
  const std::vector<AgentId>& agents = g.agents();
  const std::size_t k = agents.size();

  // With in-degree <= 1 everywhere and out-degree >= 1 everywhere, edge
  // counting forces both degrees to be exactly one, so following the unique
  // successor from each vertex traces vertex-disjoint cycles covering all.
  std::vector<int> successor(k, -1);
  std::vector<int> in_degree(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      if (!in_g_alpha(g.edge(agents[i], agents[j]), Threshold::kZero)) {
        continue;
      }
      if (++in_degree[j] > 1) {
        throw EngineError("envy graph G_0 is not disjoint cycles: agent " +
                          std::to_string(agents[j]) + " has in-degree above 1");
      }
      successor[i] = static_cast<int>(j);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (successor[i] < 0) {
      throw EngineError("envy graph G_0 is not disjoint cycles: agent " +
                        std::to_string(agents[i]) + " has out-degree 0");
    }
  }
  // A vertex with out-degree >= 2 would force some in-degree above 1, which
  // was rejected above, so `successor` kept the unique out-edge of each.

  std::vector<CycleInfo> cycles;
  std::vector<char> visited(k, 0);
  for (std::size_t start = 0; start < k; ++start) {
    if (visited[start]) continue;
    CycleInfo cycle;
    bool heavy_seen = false;
    bool light_seen = false;
    std::size_t at = start;
    do {
      if (visited[at]) {
        throw EngineError("envy graph G_0 cycle walk revisited agent " +
                          std::to_string(agents[at]));
      }
      visited[at] = 1;
      cycle.vertices.push_back(agents[at]);
      const std::size_t next = static_cast<std::size_t>(successor[at]);
      const EnvyEdge& e = g.edge(agents[at], agents[next]);
      (in_g_alpha(e, Threshold::kInvSqrt2) ? heavy_seen : light_seen) = true;
      at = next;
    } while (at != start);
    if (heavy_seen && light_seen) {
      cycle.kind = CycleKind::kHeterogeneous;
    } else if (heavy_seen) {
      cycle.kind = CycleKind::kHomogeneousHeavy;
    } else {
      cycle.kind = CycleKind::kHomogeneousLight;
    }
    cycles.push_back(std::move(cycle));
  }
  // Scanning starts ascending gives each cycle its smallest vertex first and
  // orders the cycles by smallest member.
  return cycles;
}

HeavyLightTriple find_heavy_light_triple(const CycleInfo& c,
                                         const EnvyGraph& g) {
  if (c.kind != CycleKind::kHeterogeneous) {
    throw EngineError("heavy-light triple requested on a homogeneous cycle");
  }
  const std::size_t len = c.vertices.size();
  for (std::size_t t = 0; t < len; ++t) {
    const AgentId i = c.vertices[t];
    const AgentId j = c.vertices[(t + 1) % len];
    const AgentId k = c.vertices[(t + 2) % len];
    if (in_g_alpha(g.edge(i, j), Threshold::kInvSqrt2) &&
        !in_g_alpha(g.edge(j, k), Threshold::kInvSqrt2)) {
      return HeavyLightTriple{i, j, k};
    }
  }
  throw EngineError("heterogeneous cycle without a heavy-light seam");
}

}  // namespace efx
