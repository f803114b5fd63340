#pragma once

// Completion of a two-agent partial allocation: given disjoint bundles xa,
// xb that are exactly EFX between agents a and b, redistribute an arbitrary
// pool — and, when needed, the bundles themselves — so the result is
// complete, still exactly EFX, and gives neither agent less than before.
// Such a completion always exists for two agents; failing to find one in
// the full partition space below is therefore an internal error, never a
// property of the input.

#include <utility>

#include "efx/core.hpp"

namespace efx {

struct TwoAgentProblem {
  const Instance* inst = nullptr;
  AgentId a = 0;
  AgentId b = 0;
  Bundle xa;
  Bundle xb;
  Bundle pool;  // disjoint from xa and xb; goods outside stay untouched
};

// Throws InputError when the starting bundles overlap or are not exactly
// EFX for {a, b}. Used by complete_two_agent and by the extension oracle.
void validate_two_agent_problem(const TwoAgentProblem& p);

// Returns the completed bundles (ya, yb) with ya ∪ yb = xa ∪ xb ∪ pool.
//
// Fast path: append each pool good to the bundle of the agent who values it
// (ties and both-positive goods go to the higher value, then to a); goods
// valued by neither go to a. If the result is EFX it is returned.
//
// Otherwise an exhaustive search runs over every two-sided partition of
// xa ∪ xb ∪ pool — the original bundles may be broken up; they only pin the
// utility floors. Goods neither agent values get three placements (all-to-a,
// all-to-b, one each way: such goods matter only as droppable padding, so
// which side holds one is all that counts); the k goods someone values get
// all 2^k placements, ascending mask over ascending ids, pads outermost.
// The first complete EFX and utility-floor-respecting split wins. An
// exhausted search throws EngineError ("two-agent completion exhausted"),
// which would contradict the two-agent existence theorem and so signals a
// bug or a violated precondition upstream.
std::pair<Bundle, Bundle> complete_two_agent(const TwoAgentProblem& p);

}  // namespace efx
