#include "efx/two_agent.hpp"

#include <algorithm>

#include "efx/verifier.hpp"

namespace efx {

namespace {

// Cap on goods the pair values before the exhaustive fallback is refused;
// 3 * 2^24 candidates is already far beyond desk scale.
constexpr int kMaxValuedGoods = 24;

struct AgentView {
  Value own_total = 0;   // value of the candidate bundle to its holder
  Value other_total = 0; // value of the candidate bundle to the other agent
  Value other_min = 0;   // least value the other agent sees in it
  bool other_min_set = false;
};

// Accumulate good g into a candidate bundle held by `holder`, tracking what
// the opposite agent would see.
void accumulate(const Instance& inst, AgentId holder, AgentId other,
                GoodId g, AgentView& view) {
  view.own_total += inst.value(holder, g);
  const Value seen = inst.value(other, g);
  view.other_total += seen;
  if (!view.other_min_set || seen < view.other_min) {
    view.other_min = seen;
    view.other_min_set = true;
  }
}

// Exact EFX test between the two candidate bundles, using only the
// aggregates (strong envy drops the least-valued good of the other bundle).
bool pair_is_efx(const AgentView& a_holds, const AgentView& b_holds) {
  // a against b's bundle:
  if (b_holds.other_min_set &&
      a_holds.own_total < b_holds.other_total - b_holds.other_min) {
    return false;
  }
  // b against a's bundle:
  if (a_holds.other_min_set &&
      b_holds.own_total < a_holds.other_total - a_holds.other_min) {
    return false;
  }
  return true;
}

}  // namespace

void validate_two_agent_problem(const TwoAgentProblem& p) {
  if (p.inst == nullptr) {
    throw InputError("two-agent problem has no instance");
  }
  const int n = p.inst->agent_count();
  if (p.a < 0 || p.a >= n || p.b < 0 || p.b >= n || p.a == p.b) {
    throw InputError("two-agent problem needs two distinct agents in range");
  }
  if (!bundle_intersection(p.xa, p.xb).empty() ||
      !bundle_intersection(p.xa, p.pool).empty() ||
      !bundle_intersection(p.xb, p.pool).empty()) {
    throw InputError("two-agent problem bundles and pool must be disjoint");
  }
  for (const Bundle* b : {&p.xa, &p.xb, &p.pool}) {
    for (GoodId g : *b) {
      if (g < 0 || g >= p.inst->good_count()) {
        throw InputError("two-agent problem names good " + std::to_string(g) +
                         " outside the instance");
      }
    }
  }
  if (!strongly_envies(*p.inst, p.a, p.xa, p.b, p.xb, Beta::kOne).ok ||
      !strongly_envies(*p.inst, p.b, p.xb, p.a, p.xa, Beta::kOne).ok) {
    throw InputError("two-agent problem starting bundles are not EFX");
  }
}

namespace {

std::optional<std::pair<Bundle, Bundle>> heuristic_completion(
    const TwoAgentProblem& p) {
  Bundle ya = p.xa;
  Bundle yb = p.xb;
  for (GoodId g : p.pool) {
    if (p.inst->value(p.b, g) > p.inst->value(p.a, g)) {
      yb.insert(g);
    } else {
      ya.insert(g);
    }
  }
  const bool efx =
      strongly_envies(*p.inst, p.a, ya, p.b, yb, Beta::kOne).ok &&
      strongly_envies(*p.inst, p.b, yb, p.a, ya, Beta::kOne).ok;
  if (!efx) return std::nullopt;
  // Bundles only grew, so neither agent lost utility.
  return std::make_pair(std::move(ya), std::move(yb));
}

}  // namespace

std::pair<Bundle, Bundle> complete_two_agent(const TwoAgentProblem& p) {
  validate_two_agent_problem(p);

  if (auto done = heuristic_completion(p)) return *done;

  // Exhaustive fallback over every two-sided partition of xa, xb and the
  // pool together — the original bundles may be broken up, only the floor on
  // each agent's utility remembers them. Goods valued by neither agent carry
  // no value, yet they are not inert: the strong-envy test drops one good,
  // and a worthless good in a bundle lets the other agent drop it instead of
  // a valued one, making that bundle easier to envy. Only which sides
  // receive such padding matters (never which goods), so three placements
  // cover every materially distinct choice: all to a, all to b, one each
  // way. The remaining k valued goods get all 2^k placements.
  std::vector<GoodId> valued;
  Bundle pads;
  for (const Bundle* part : {&p.xa, &p.xb, &p.pool}) {
    for (GoodId g : *part) {
      if (p.inst->value(p.a, g) > 0 || p.inst->value(p.b, g) > 0) {
        valued.push_back(g);
      } else {
        pads.insert(g);
      }
    }
  }
  std::sort(valued.begin(), valued.end());
  const int k = static_cast<int>(valued.size());
  if (k > kMaxValuedGoods) {
    throw BudgetError("two-agent completion problem too large for the "
                      "exhaustive fallback (" +
                      std::to_string(k) + " valued goods)");
  }

  std::vector<std::pair<Bundle, Bundle>> pad_splits;
  if (pads.empty()) {
    pad_splits.emplace_back(Bundle{}, Bundle{});
  } else {
    pad_splits.emplace_back(pads, Bundle{});
    pad_splits.emplace_back(Bundle{}, pads);
    if (pads.size() >= 2) {
      const Bundle head{*pads.begin()};
      pad_splits.emplace_back(head, bundle_difference(pads, head));
    }
  }

  const Value keep_a = bundle_value(*p.inst, p.a, p.xa);
  const Value keep_b = bundle_value(*p.inst, p.b, p.xb);

  for (const auto& [pad_a, pad_b] : pad_splits) {
    AgentView a_base, b_base;  // candidate bundle of a resp. b
    for (GoodId g : pad_a) accumulate(*p.inst, p.a, p.b, g, a_base);
    for (GoodId g : pad_b) accumulate(*p.inst, p.b, p.a, g, b_base);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      AgentView a_holds = a_base;
      AgentView b_holds = b_base;
      for (int t = 0; t < k; ++t) {
        (mask >> t) & 1 ? accumulate(*p.inst, p.b, p.a, valued[t], b_holds)
                        : accumulate(*p.inst, p.a, p.b, valued[t], a_holds);
      }
      if (a_holds.own_total < keep_a || b_holds.own_total < keep_b) continue;
      if (!pair_is_efx(a_holds, b_holds)) continue;

      Bundle ya = pad_a;
      Bundle yb = pad_b;
      for (int t = 0; t < k; ++t) {
        ((mask >> t) & 1 ? yb : ya).insert(valued[t]);
      }
      return {std::move(ya), std::move(yb)};
    }
  }

  throw EngineError(
      "two-agent completion exhausted its search space without finding an "
      "EFX extension; this indicates an engine bug upstream");
}

}  // namespace efx
