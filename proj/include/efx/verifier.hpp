#pragma once

// Exact verification of envy properties. An agent i "beta-strongly envies"
// a bundle held by j when beta * v_i(own) < v_i(that bundle minus some one
// good). An allocation is alpha-EFX exactly when nobody (1/alpha)-strongly
// envies anybody, so the two thresholds used here are beta = 1 (plain EFX)
// and beta = sqrt(2) (the 1/sqrt(2)-EFX guarantee). All tests compare
// squared integers; nothing is ever rounded.

#include <array>
#include <map>

#include "efx/core.hpp"

namespace efx {

enum class Beta {
  kOne,    // strong envy:        v_i(xi)   <  v_i(xj \ g)
  kSqrt2,  // sqrt2 strong envy:  2*v_i(xi)^2 < v_i(xj \ g)^2
};

// Does agent i beta-strongly envy bundle xj held by agent j? The witness
// drops the good of xj that i values least (ties to the smallest good id),
// which maximizes the remainder and is therefore the binding removal.
// lhs_sq/rhs_sq are v_i(xi)^2 and v_i(xj \ g)^2.
Verdict strongly_envies(const Instance& inst, AgentId i, const Bundle& xi,
                        AgentId j, const Bundle& xj, Beta beta);

enum class EfxLevel {
  kOne,       // exact EFX
  kInvSqrt2,  // (1/sqrt(2))-EFX
};

// Checks every ordered pair (ascending i, then ascending j) of the given
// allocation; the first violation becomes the verdict. Bundles may cover
// only part of the goods (a partial allocation), but they must be disjoint;
// overlapping bundles are an InputError.
Verdict is_alpha_efx(const Instance& inst,
                     const std::map<AgentId, Bundle>& allocation,
                     EfxLevel level);

// The five running invariants of the solver, checked on a working state:
//   [0] finalized bundles are (1/sqrt(2))-EFX among the finalized agents
//   [1] no finalized agent i has 2*v_i(X*_i)^2 < v_i(U)^2, where U is the
//       union of every remaining bundle and the pool
//   [2] remaining bundles are exactly EFX among the remaining agents
//   [3] no remaining agent strongly envies a finalized bundle
//   [4] for every remaining agent i, at most one other agent is relevant to
//       any good of X~_i, and it is the same agent across the whole bundle
std::array<Verdict, 5> check_properties(const Instance& inst,
                                        const AllocationState& st);

// Exact nonnegative fraction num/den; den == 0 encodes infinity (num kept
// positive there). Both fields are squared magnitudes when the fraction is
// an envy factor.
struct Ratio {
  Value num = 0;
  Value den = 1;
};

// Sign of a - b as fractions (cross-multiplied exactly; inf == inf).
int compare(Ratio a, Ratio b);

// Reduced copy (gcd division; infinity normalizes to 1/0).
Ratio normalized(Ratio r);

// The allocation's exact envy factor alpha^2: the minimum over ordered pairs
// (i, j) and removable goods g of v_i(X_i)^2 / v_i(X_j \ g)^2, taken over
// positive denominators only. No positive denominator at all means nobody
// can ever strongly envy, encoded as infinity (1, 0). The allocation is
// alpha-EFX for precisely the alpha^2 up to this factor.
Ratio allocation_alpha_squared(const Instance& inst,
                               const std::map<AgentId, Bundle>& allocation);

}  // namespace efx
