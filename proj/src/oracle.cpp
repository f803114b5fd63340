#include "efx/oracle.hpp"

#include <algorithm>

namespace efx {

namespace {

// n^m with saturation just above the budget, so the refusal check never
// overflows even for absurd inputs.
std::uint64_t count_allocations(std::uint64_t n, int m, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int g = 0; g < m; ++g) {
    if (total > cap / std::max<std::uint64_t>(n, 1)) return cap + 1;
    total *= n;
  }
  return total;
}

}  // namespace

OracleResult best_alpha_squared(const Instance& inst, std::uint64_t budget) {
  const std::uint64_t n = static_cast<std::uint64_t>(inst.agent_count());
  const int m = inst.good_count();
  const std::uint64_t total = count_allocations(n, m, budget);
  if (total > budget) {
    throw BudgetError("oracle refuses: " + std::to_string(inst.agent_count()) +
                      "^" + std::to_string(m) +
                      " complete allocations exceed the budget of " +
                      std::to_string(budget));
  }

  std::vector<AgentId> assign(static_cast<std::size_t>(m), 0);
  OracleResult result;
  bool have_best = false;

  while (true) {
    ++result.enumerated;

    std::map<AgentId, Bundle> allocation;
    for (AgentId a = 0; a < inst.agent_count(); ++a) allocation[a] = Bundle{};
    for (GoodId g = 0; g < m; ++g) {
      allocation[assign[static_cast<std::size_t>(g)]].insert(g);
    }
    const Ratio factor = allocation_alpha_squared(inst, allocation);
    // Strict improvement keeps the lexicographically first argmax: good ids
    // are the digits (good 0 most significant) and agents count upward.
    if (!have_best || compare(factor, result.alpha_sq) > 0) {
      have_best = true;
      result.alpha_sq = factor;
      result.best = std::move(allocation);
    }

    int digit = m - 1;
    while (digit >= 0 &&
           assign[static_cast<std::size_t>(digit)] + 1 >= inst.agent_count()) {
      assign[static_cast<std::size_t>(digit)] = 0;
      --digit;
    }
    if (digit < 0) break;
    ++assign[static_cast<std::size_t>(digit)];
  }

  return result;
}

bool exists_efx_extension(const TwoAgentProblem& p, std::uint64_t budget) {
  validate_two_agent_problem(p);

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
  if (k >= 62 || (std::uint64_t{3} << k) > budget) {
    throw BudgetError(
        "extension oracle refuses: 3*2^" + std::to_string(k) +
        " candidate completions exceed the budget of " + std::to_string(budget));
  }

  // Goods valued by neither agent act as droppable padding (see
  // complete_two_agent); only which sides hold some suffices to enumerate.
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
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      Bundle ya = pad_a;
      Bundle yb = pad_b;
      for (int t = 0; t < k; ++t) {
        ((mask >> t) & 1 ? yb : ya).insert(valued[t]);
      }
      if (bundle_value(*p.inst, p.a, ya) < keep_a) continue;
      if (bundle_value(*p.inst, p.b, yb) < keep_b) continue;
      if (!strongly_envies(*p.inst, p.a, ya, p.b, yb, Beta::kOne).ok) continue;
      if (!strongly_envies(*p.inst, p.b, yb, p.a, ya, Beta::kOne).ok) continue;
      return true;
    }
  }
  return false;
}

}  // namespace efx
