#pragma once

// Brute-force ground truth, independent of the solver: exhaustive search
// over complete allocations for the best achievable envy factor, and an
// exhaustive (no shortcuts) re-enumeration of the two-agent completion
// search space. Both refuse to start when the enumeration would exceed the
// given budget, so a caller can never hang by accident.

#include <cstdint>
#include <map>

#include "efx/core.hpp"
#include "efx/two_agent.hpp"
#include "efx/verifier.hpp"

namespace efx {

inline constexpr std::uint64_t kDefaultOracleBudget = 2'000'000;

struct OracleResult {
  Ratio alpha_sq;                    // best achievable envy factor, squared
  std::map<AgentId, Bundle> best;    // first allocation attaining it
  std::uint64_t enumerated = 0;      // complete allocations examined (n^m)
};

// Maximizes allocation_alpha_squared over all n^m complete allocations.
// Goods are assigned in id order and agents tried in id order, so the
// reported argmax is the lexicographically first one. n^m above the budget
// throws BudgetError.
OracleResult best_alpha_squared(const Instance& inst,
                                std::uint64_t budget = kDefaultOracleBudget);

// True when the two-agent completion search space (same partitions of
// xa ∪ xb ∪ pool as complete_two_agent, but enumerated directly with real
// bundles and no heuristic shortcut) contains a complete, EFX,
// utility-floor-respecting extension. 3*2^k candidates above the budget
// throws BudgetError.
bool exists_efx_extension(const TwoAgentProblem& p,
                          std::uint64_t budget = kDefaultOracleBudget);

}  // namespace efx
