#pragma once

// Weighted envy graph over the remaining agents. The weight of the edge
// i -> j is v_i(X~_j) / v_i(X~_i), kept as the exact integer pair
// (num, den) = (v_i(X~_j), v_i(X~_i)) — never as a float. G_alpha keeps the
// edges with weight strictly above a threshold; a zero denominator with a
// positive numerator counts as infinite weight and belongs to every G_alpha.

#include <vector>

#include "efx/core.hpp"

namespace efx {

struct EnvyEdge {
  AgentId from = 0;
  AgentId to = 0;
  Value num = 0;  // v_from(bundle of to)
  Value den = 0;  // v_from(own bundle)
};

class EnvyGraph {
 public:
  // agents must be the remaining agents in ascending order; edges must hold
  // one entry per ordered pair (from, to), from != to.
  EnvyGraph(std::vector<AgentId> agents, std::vector<EnvyEdge> edges);

  const std::vector<AgentId>& agents() const { return agents_; }
  const EnvyEdge& edge(AgentId from, AgentId to) const;

 private:
  int index_of(AgentId a) const;

  std::vector<AgentId> agents_;
  std::vector<EnvyEdge> edges_;  // row-major by (from index, to index)
};

// Builds the complete weighted graph over st.remaining (at least one agent).
EnvyGraph build_graph(const Instance& inst, const AllocationState& st);

enum class Threshold {
  kZero,      // weight > 0:     num > 0
  kOne,       // weight > 1:     num > den
  kInvSqrt2,  // weight > 1/√2:  2*num^2 > den^2
};

// Exact membership test of an edge in G_alpha at the given threshold.
bool in_g_alpha(const EnvyEdge& e, Threshold alpha);

enum class CycleKind {
  kHomogeneousHeavy,  // every cycle edge exceeds 1/√2
  kHomogeneousLight,  // no cycle edge exceeds 1/√2
  kHeterogeneous,     // both kinds present
};

struct CycleInfo {
  std::vector<AgentId> vertices;  // cycle order, starting at smallest vertex
  CycleKind kind = CycleKind::kHomogeneousLight;
};

// Decomposes G_0 into vertex-disjoint cycles covering every agent. Valid
// whenever every vertex has positive out-degree and in-degree at most one
// (which the engine guarantees when Rules 1 and 2 are inapplicable); any
// other shape throws EngineError, because it means an invariant broke.
// Cycles are ordered by smallest member; each starts at its smallest vertex.
std::vector<CycleInfo> decompose_cycles(const EnvyGraph& g);

struct HeavyLightTriple {
  AgentId i = 0;  // tail of the heavy edge
  AgentId j = 0;  // head of the heavy edge, tail of the light edge
  AgentId k = 0;  // head of the light edge
};

// First consecutive (i, j, k) along the cycle (scanning from its canonical
// start) where i -> j is heavy and j -> k is light. The cycle must be
// heterogeneous; a homogeneous cycle throws EngineError.
HeavyLightTriple find_heavy_light_triple(const CycleInfo& c,
                                         const EnvyGraph& g);

}  // namespace efx
