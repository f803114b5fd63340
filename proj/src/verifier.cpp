#include "efx/verifier.hpp"

#include <algorithm>
#include <numeric>

namespace efx {

namespace {

// The good of xj that i values least, ties to the smallest id. Dropping it
// leaves the most valuable remainder, so it is the only removal that needs
// testing. Returns no value when xj is empty.
std::optional<GoodId> least_valued_good(const Instance& inst, AgentId i,
                                        const Bundle& xj) {
  std::optional<GoodId> best;
  Value best_value = 0;
  for (GoodId g : xj) {
    const Value v = inst.value(i, g);
    if (!best || v < best_value) {
      best = g;
      best_value = v;
    }
  }
  return best;
}

}  // namespace

Verdict strongly_envies(const Instance& inst, AgentId i, const Bundle& xi,
                        AgentId j, const Bundle& xj, Beta beta) {
  const auto dropped = least_valued_good(inst, i, xj);
  if (!dropped) return Verdict::pass();  // empty bundles are never envied

  const Value own = bundle_value(inst, i, xi);
  const Value rest = bundle_value(inst, i, xj) - inst.value(i, *dropped);
  const bool envies = beta == Beta::kOne
                          ? own < rest
                          : compare_twice_square(own, rest) < 0;
  if (!envies) return Verdict::pass();

  Verdict v;
  v.ok = false;
  v.kind = beta == Beta::kOne ? "strong-envy" : "sqrt2-strong-envy";
  v.agents = {i, j};
  v.good = *dropped;
  v.lhs_sq = own * own;
  v.rhs_sq = rest * rest;
  return v;
}

namespace {

// Shared pair scan for is_alpha_efx and the pairwise property checks.
Verdict scan_pairs(const Instance& inst,
                   const std::map<AgentId, Bundle>& allocation, Beta beta) {
  for (const auto& [i, xi] : allocation) {
    for (const auto& [j, xj] : allocation) {
      if (i == j) continue;
      Verdict v = strongly_envies(inst, i, xi, j, xj, beta);
      if (!v.ok) return v;
    }
  }
  return Verdict::pass();
}

void require_disjoint(const Instance& inst,
                      const std::map<AgentId, Bundle>& allocation) {
  std::vector<int> holders(static_cast<std::size_t>(inst.good_count()), 0);
  for (const auto& [agent, bundle] : allocation) {
    if (agent < 0 || agent >= inst.agent_count()) {
      throw InputError("allocation names agent " + std::to_string(agent) +
                       " outside the instance");
    }
    for (GoodId g : bundle) {
      if (g < 0 || g >= inst.good_count()) {
        throw InputError("allocation names good " + std::to_string(g) +
                         " outside the instance");
      }
      if (holders[static_cast<std::size_t>(g)]++) {
        throw InputError("allocation assigns good " + std::to_string(g) +
                         " to two bundles");
      }
    }
  }
}

}  // namespace

Verdict is_alpha_efx(const Instance& inst,
                     const std::map<AgentId, Bundle>& allocation,
                     EfxLevel level) {
  require_disjoint(inst, allocation);
  return scan_pairs(inst, allocation,
                    level == EfxLevel::kOne ? Beta::kOne : Beta::kSqrt2);
}

std::array<Verdict, 5> check_properties(const Instance& inst,
                                        const AllocationState& st) {
  std::array<Verdict, 5> out;

  // (i) finalized bundles are (1/sqrt2)-EFX among finalized agents.
  out[0] = scan_pairs(inst, st.bundles_final, Beta::kSqrt2);

  // (ii) no finalized agent sqrt2-envies the union of what is still in play.
  Bundle in_play = st.pool;
  for (const auto& [agent, bundle] : st.bundles_remaining) {
    in_play = bundle_union(in_play, bundle);
  }
  for (const auto& [agent, bundle] : st.bundles_final) {
    const Value own = bundle_value(inst, agent, bundle);
    const Value whole = bundle_value(inst, agent, in_play);
    if (compare_twice_square(own, whole) < 0) {
      Verdict v;
      v.ok = false;
      v.kind = "sqrt2-envy-union";
      v.agents = {agent};
      v.lhs_sq = own * own;
      v.rhs_sq = whole * whole;
      out[1] = v;
      break;
    }
  }

  // (iii) remaining bundles are exactly EFX among remaining agents.
  out[2] = scan_pairs(inst, st.bundles_remaining, Beta::kOne);

  // (iv) no remaining agent strongly envies a finalized bundle.
  for (const auto& [i, xi] : st.bundles_remaining) {
    for (const auto& [j, xj] : st.bundles_final) {
      Verdict v = strongly_envies(inst, i, xi, j, xj, Beta::kOne);
      if (!v.ok) {
        out[3] = v;
        break;
      }
    }
    if (!out[3].ok) break;
  }

  // (v) each remaining bundle is relevant to at most one agent besides its
  // holder, the same one throughout the bundle.
  for (const auto& [i, xi] : st.bundles_remaining) {
    std::optional<AgentId> partner;
    for (GoodId g : xi) {
      for (const GoodEntry& e : inst.entries(g)) {
        if (e.agent == i) continue;
        if (partner && *partner != e.agent) {
          Verdict v;
          v.ok = false;
          v.kind = "shared-relevance";
          v.agents = {i, *partner, e.agent};
          v.good = g;
          out[4] = v;
          break;
        }
        partner = e.agent;
      }
      if (!out[4].ok) break;
    }
    if (!out[4].ok) break;
  }

  return out;
}

int compare(Ratio a, Ratio b) {
  const bool a_inf = a.den == 0;
  const bool b_inf = b.den == 0;
  if (a_inf || b_inf) {
    if (a_inf && b_inf) return 0;
    return a_inf ? 1 : -1;
  }
  return compare_products(a.num, b.den, b.num, a.den);
}

Ratio normalized(Ratio r) {
  if (r.den == 0) return Ratio{1, 0};
  if (r.num == 0) return Ratio{0, 1};
  const Value g = std::gcd(r.num, r.den);
  return Ratio{r.num / g, r.den / g};
}

Ratio allocation_alpha_squared(const Instance& inst,
                               const std::map<AgentId, Bundle>& allocation) {
  require_disjoint(inst, allocation);
  std::optional<Ratio> factor;
  for (const auto& [i, xi] : allocation) {
    const Value own = bundle_value(inst, i, xi);
    for (const auto& [j, xj] : allocation) {
      if (i == j) continue;
      const auto dropped = least_valued_good(inst, i, xj);
      if (!dropped) continue;
      const Value rest = bundle_value(inst, i, xj) - inst.value(i, *dropped);
      if (rest == 0) continue;  // zero denominators cannot constrain alpha
      const Ratio candidate{own * own, rest * rest};
      if (!factor || compare(candidate, *factor) < 0) factor = candidate;
    }
  }
  return normalized(factor.value_or(Ratio{1, 0}));
}

}  // namespace efx
