#include "efx/rules.hpp"

#include <algorithm>
#include <bit>

#include "efx/envy_graph.hpp"
#include "efx/two_agent.hpp"
#include "efx/verifier.hpp"

namespace efx {

const char* rule_name(RuleKind k) {
  switch (k) {
    case RuleKind::kBasicFeasible: return "BasicFeasible";
    case RuleKind::kRule1: return "R1";
    case RuleKind::kRule2: return "R2";
    case RuleKind::kRule3: return "R3";
    case RuleKind::kRule4: return "R4";
    case RuleKind::kRule5: return "R5";
    case RuleKind::kFinal: return "Final";
  }
  return "?";
}

namespace {

// ------------------------------------------------------- event plumbing --

std::vector<Location> locate_goods(const Instance& inst,
                                   const AllocationState& st) {
  std::vector<Location> where(static_cast<std::size_t>(inst.good_count()),
                              Location{Place::kPool, -1});
  for (const auto& [agent, bundle] : st.bundles_remaining) {
    for (GoodId g : bundle) {
      where[static_cast<std::size_t>(g)] = Location{Place::kRemaining, agent};
    }
  }
  for (const auto& [agent, bundle] : st.bundles_final) {
    for (GoodId g : bundle) {
      where[static_cast<std::size_t>(g)] = Location{Place::kFinal, agent};
    }
  }
  return where;
}

// Snapshot taken before a rule mutates the state; finish() diffs the good
// locations so `moved` always matches the actual state transition.
struct EventBuilder {
  std::vector<Location> before;
  Value welfare_before = 0;
  int remaining_before = 0;

  EventBuilder(const Instance& inst, const AllocationState& st)
      : before(locate_goods(inst, st)),
        welfare_before(remaining_welfare(inst, st)),
        remaining_before(static_cast<int>(st.remaining.size())) {}

  RuleEvent finish(const Instance& inst, const AllocationState& st,
                   RuleKind rule, std::vector<AgentId> actors) const {
    RuleEvent e;
    e.rule = rule;
    e.actors = std::move(actors);
    const std::vector<Location> after = locate_goods(inst, st);
    for (GoodId g = 0; g < inst.good_count(); ++g) {
      const auto idx = static_cast<std::size_t>(g);
      if (before[idx] == after[idx]) continue;
      e.moved.push_back(GoodMove{g, before[idx], after[idx]});
    }
    e.welfare_before = welfare_before;
    e.welfare_after = remaining_welfare(inst, st);
    e.remaining_before = remaining_before;
    e.remaining_after = static_cast<int>(st.remaining.size());
    e.state_digest = state_digest(st);
    return e;
  }
};

void finalize_agent(AllocationState& st, AgentId agent, Bundle bundle) {
  auto pos = std::lower_bound(st.remaining.begin(), st.remaining.end(), agent);
  if (pos == st.remaining.end() || *pos != agent) {
    throw EngineError("finalizing agent " + std::to_string(agent) +
                      " which is not remaining");
  }
  st.remaining.erase(pos);
  st.bundles_remaining.erase(agent);
  st.finalized.push_back(agent);
  st.bundles_final.emplace(agent, std::move(bundle));
  st.last_finalized = agent;
}

// ------------------------------------------- exact product big integers --

// Nonnegative big integer used only to compare products of values exactly.
// Little-endian base-2^32 limbs without leading zeros; empty means 1 so the
// empty product starts neutral.
struct BigProduct {
  std::vector<std::uint32_t> limbs;

  void multiply(std::uint32_t factor) {
    if (limbs.empty()) limbs.push_back(1);
    std::uint64_t carry = 0;
    for (std::uint32_t& limb : limbs) {
      const std::uint64_t wide = std::uint64_t{limb} * factor + carry;
      limb = static_cast<std::uint32_t>(wide);
      carry = wide >> 32;
    }
    if (carry) limbs.push_back(static_cast<std::uint32_t>(carry));
  }

  friend bool operator==(const BigProduct&, const BigProduct&) = default;

  static int compare(const BigProduct& a, const BigProduct& b) {
    const std::vector<std::uint32_t> one{1};
    const auto& la = a.limbs.empty() ? one : a.limbs;
    const auto& lb = b.limbs.empty() ? one : b.limbs;
    if (la.size() != lb.size()) return la.size() < lb.size() ? -1 : 1;
    for (std::size_t t = la.size(); t-- > 0;) {
      if (la[t] != lb[t]) return la[t] < lb[t] ? -1 : 1;
    }
    return 0;
  }
};

}  // namespace

// ------------------------------------------- basic feasible allocation --

AllocationState basic_feasible_allocation(const Instance& inst) {
  const int n = inst.agent_count();
  const int m = inst.good_count();
  if (m < n) {
    throw InputError("instance has fewer goods than agents (" +
                     std::to_string(m) + " < " + std::to_string(n) + ")");
  }
  if (n > 20 ||
      (std::uint64_t{1} << n) * static_cast<std::uint64_t>(m + 1) >
          (std::uint64_t{1} << 21)) {
    throw InputError(
        "instance too large for the exact opening assignment search");
  }

  // Layered subset DP: best[g][mask] is the best exact product of positive
  // values over assignments of distinct goods from {0..g-1} to exactly the
  // agents in mask. Goods advance one layer at a time, so walking the layers
  // backward reconstructs a canonical argmax deterministically.
  const std::size_t masks = std::size_t{1} << n;
  std::vector<std::vector<std::optional<BigProduct>>> best(
      static_cast<std::size_t>(m) + 1);
  best[0].assign(masks, std::nullopt);
  best[0][0] = BigProduct{};
  for (GoodId g = 0; g < m; ++g) {
    const auto gi = static_cast<std::size_t>(g);
    best[gi + 1] = best[gi];  // skipping good g is always allowed
    for (std::size_t mask = 0; mask < masks; ++mask) {
      if (!best[gi][mask]) continue;
      for (const GoodEntry& e : inst.entries(g)) {
        const std::size_t with = mask | (std::size_t{1} << e.agent);
        if (with == mask) continue;  // agent already covered
        BigProduct candidate = *best[gi][mask];
        candidate.multiply(static_cast<std::uint32_t>(e.value));
        auto& slot = best[gi + 1][with];
        if (!slot || BigProduct::compare(candidate, *slot) > 0) {
          slot = std::move(candidate);
        }
      }
    }
  }

  // Lexicographic objective: most positively covered agents first, then the
  // largest product. Scanning masks upward keeps the smallest winning mask.
  std::size_t best_mask = 0;
  for (std::size_t mask = 1; mask < masks; ++mask) {
    if (!best[static_cast<std::size_t>(m)][mask]) continue;
    const int count = std::popcount(mask);
    const int best_count = std::popcount(best_mask);
    if (count < best_count) continue;
    if (count == best_count &&
        BigProduct::compare(*best[static_cast<std::size_t>(m)][mask],
                            *best[static_cast<std::size_t>(m)][best_mask]) <=
            0) {
      continue;
    }
    best_mask = mask;
  }

  // Reconstruct one optimal assignment, preferring "good unused" and then
  // the smallest agent at every layer, which pins the choice among ties.
  std::vector<std::optional<GoodId>> good_of(static_cast<std::size_t>(n),
                                             std::nullopt);
  {
    std::size_t mask = best_mask;
    for (GoodId g = m; g-- > 0;) {
      const auto gi = static_cast<std::size_t>(g);
      const BigProduct& target = *best[gi + 1][mask];
      if (best[gi][mask] && *best[gi][mask] == target) continue;
      bool stepped = false;
      for (const GoodEntry& e : inst.entries(g)) {
        const std::size_t bit = std::size_t{1} << e.agent;
        if (!(mask & bit)) continue;
        if (!best[gi][mask ^ bit]) continue;
        BigProduct via = *best[gi][mask ^ bit];
        via.multiply(static_cast<std::uint32_t>(e.value));
        if (via == target) {
          good_of[static_cast<std::size_t>(e.agent)] = g;
          mask ^= bit;
          stepped = true;
          break;
        }
      }
      if (!stepped) {
        throw EngineError("opening assignment reconstruction lost its path");
      }
    }
    if (mask != 0) {
      throw EngineError("opening assignment reconstruction left agents over");
    }
  }

  // Agents that cannot be covered positively take leftover goods relevant to
  // at most one agent (count-maximality already implies no free good is
  // positive for an uncovered agent), ascending ids on both sides. A good
  // two other agents value would break the shared-relevance property, so
  // once those safe goods run out the remaining agents start with empty
  // bundles and the contested goods stay pooled; rules 1 and 2 absorb every
  // empty bundle before the cycle machinery needs the envy graph covered.
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  for (AgentId a = 0; a < n; ++a) {
    if (good_of[static_cast<std::size_t>(a)]) {
      used[static_cast<std::size_t>(*good_of[static_cast<std::size_t>(a)])] = 1;
    }
  }
  std::vector<GoodId> safe_free;
  for (GoodId g = 0; g < m; ++g) {
    if (used[static_cast<std::size_t>(g)]) continue;
    if (inst.entries(g).size() <= 1) safe_free.push_back(g);
  }
  std::size_t next_safe = 0;
  for (AgentId a = 0; a < n; ++a) {
    if (good_of[static_cast<std::size_t>(a)]) continue;
    if (next_safe >= safe_free.size()) continue;
    const GoodId g = safe_free[next_safe++];
    good_of[static_cast<std::size_t>(a)] = g;
    used[static_cast<std::size_t>(g)] = 1;
  }

  AllocationState st;
  for (AgentId a = 0; a < n; ++a) {
    st.remaining.push_back(a);
    const auto& pick = good_of[static_cast<std::size_t>(a)];
    st.bundles_remaining.emplace(a, pick ? Bundle{*pick} : Bundle{});
  }
  for (GoodId g = 0; g < m; ++g) {
    if (!used[static_cast<std::size_t>(g)]) st.pool.insert(g);
  }
  return st;
}

// ------------------------------------------------------------------ R1 --

// A remaining agent envies the pool goods it shares with another remaining
// agent: hand the envier a minimum-cardinality envied subset of that share.
std::optional<RuleEvent> rule1(const Instance& inst, AllocationState& st) {
  for (AgentId i : st.remaining) {
    const Value own_i = bundle_value(inst, i, st.bundles_remaining.at(i));
    for (AgentId j : st.remaining) {
      if (i == j) continue;
      const Bundle shared = relevant_to_pair(inst, st.pool, i, j);
      if (own_i >= bundle_value(inst, i, shared)) continue;

      // Minimum envied subset for one agent: take pool goods in descending
      // value until the prefix beats the agent's own bundle. The prefix of
      // the k largest values is the best any k-subset can do, so the first
      // winning prefix has minimum cardinality.
      const auto greedy_prefix =
          [&](AgentId who) -> std::optional<std::vector<GoodId>> {
        std::vector<GoodId> order(shared.goods());
        std::stable_sort(order.begin(), order.end(),
                         [&](GoodId a, GoodId b) {
                           return inst.value(who, a) > inst.value(who, b);
                         });
        const Value own = bundle_value(inst, who, st.bundles_remaining.at(who));
        Value sum = 0;
        std::vector<GoodId> prefix;
        for (GoodId g : order) {
          prefix.push_back(g);
          sum += inst.value(who, g);
          if (sum > own) return prefix;
        }
        return std::nullopt;  // `who` does not envy even the whole share
      };

      const auto set_i = greedy_prefix(i);  // nonempty: i envies the share
      const auto set_j = greedy_prefix(j);
      std::vector<GoodId> chosen =
          set_j && set_j->size() < set_i->size() ? *set_j : *set_i;
      const Bundle s{std::move(chosen)};

      const AgentId receiver =
          own_i < bundle_value(inst, i, s) ? i : j;

      const EventBuilder builder(inst, st);
      Bundle& holding = st.bundles_remaining.at(receiver);
      st.pool = bundle_union(bundle_difference(st.pool, s), holding);
      holding = s;
      return builder.finish(inst, st, RuleKind::kRule1, {i, j});
    }
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ R2 --

// An agent with no value for any other remaining bundle is finalized with
// the better of its own bundle and its relevant pool share.
std::optional<RuleEvent> rule2(const Instance& inst, AllocationState& st) {
  if (st.remaining.empty()) return std::nullopt;
  const EnvyGraph graph = build_graph(inst, st);
  for (AgentId i : st.remaining) {
    const bool out_degree_zero =
        std::all_of(st.remaining.begin(), st.remaining.end(), [&](AgentId j) {
          return j == i || !in_g_alpha(graph.edge(i, j), Threshold::kZero);
        });
    if (!out_degree_zero) continue;

    const EventBuilder builder(inst, st);
    const Bundle own = st.bundles_remaining.at(i);
    const Bundle share = relevant_to(inst, st.pool, i);
    if (bundle_value(inst, i, own) < bundle_value(inst, i, share)) {
      st.pool = bundle_union(bundle_difference(st.pool, share), own);
      finalize_agent(st, i, share);
    } else {
      finalize_agent(st, i, own);
    }
    return builder.finish(inst, st, RuleKind::kRule2, {i});
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ R3 --

// A 2-cycle in G_0. The last two agents are settled by two-agent completion;
// otherwise the pair is finalized around the relabeled non-envier j.
std::optional<RuleEvent> rule3(const Instance& inst, AllocationState& st) {
  if (st.remaining.size() < 2) return std::nullopt;
  const EnvyGraph graph = build_graph(inst, st);
  const std::vector<CycleInfo> cycles = decompose_cycles(graph);
  const CycleInfo* two_cycle = nullptr;
  for (const CycleInfo& c : cycles) {
    if (c.vertices.size() == 2) {
      two_cycle = &c;
      break;
    }
  }
  if (two_cycle == nullptr) return std::nullopt;

  AgentId i = two_cycle->vertices[0];  // the smaller id, by canonical start
  AgentId j = two_cycle->vertices[1];

  if (st.remaining.size() == 2) {
    const EventBuilder builder(inst, st);
    TwoAgentProblem problem;
    problem.inst = &inst;
    problem.a = i;
    problem.b = j;
    problem.xa = st.bundles_remaining.at(i);
    problem.xb = st.bundles_remaining.at(j);
    problem.pool = st.pool;
    std::pair<Bundle, Bundle> completed;
    try {
      completed = complete_two_agent(problem);
    } catch (const InputError& bad) {
      throw EngineError(std::string("rule 3 handed the two-agent completion "
                                    "an invalid problem: ") +
                        bad.what());
    }
    st.pool = Bundle{};
    finalize_agent(st, j, std::move(completed.second));
    finalize_agent(st, i, std::move(completed.first));
    return builder.finish(inst, st, RuleKind::kRule3, {i, j});
  }

  const auto envies = [&](AgentId a, AgentId b) {
    return bundle_value(inst, a, st.bundles_remaining.at(b)) >
           bundle_value(inst, a, st.bundles_remaining.at(a));
  };

  const EventBuilder builder(inst, st);
  if (envies(i, j) && envies(j, i)) {
    // Mutual envy: swap, after which each holds the bundle it prefers and
    // neither envies the other; labels stay (j is the larger id).
    std::swap(st.bundles_remaining.at(i), st.bundles_remaining.at(j));
  } else if (envies(j, i)) {
    std::swap(i, j);  // relabel so that j does not envy i
  }

  const Bundle a = bundle_union(
      st.bundles_remaining.at(i),
      bundle_difference(relevant_to(inst, st.pool, i),
                        relevant_to_pair(inst, st.pool, i, j)));
  const Bundle b = st.bundles_remaining.at(j);
  const Bundle c = relevant_to(inst, st.pool, j);

  const Bundle pool_part_of_a =
      bundle_difference(a, st.bundles_remaining.at(i));
  if (bundle_value(inst, j, b) >= bundle_value(inst, j, c)) {
    // j keeps its bundle, i takes A; the candidate C never left the pool.
    st.pool = bundle_difference(st.pool, pool_part_of_a);
    finalize_agent(st, j, b);
    finalize_agent(st, i, a);
  } else {
    // j takes C; i then chooses between A and the returned bundle B.
    st.pool = bundle_difference(st.pool, c);
    if (bundle_value(inst, i, a) >= bundle_value(inst, i, b)) {
      st.pool = bundle_union(bundle_difference(st.pool, pool_part_of_a), b);
      finalize_agent(st, j, c);
      finalize_agent(st, i, a);
    } else {
      st.pool = bundle_union(st.pool, st.bundles_remaining.at(i));
      finalize_agent(st, j, c);
      finalize_agent(st, i, b);
    }
  }
  return builder.finish(inst, st, RuleKind::kRule3, {i, j});
}

// ------------------------------------------------------------------ R4 --

// A homogeneous cycle: rotate bundles along a heavy cycle (light cycles keep
// theirs), attach the pool goods its members care about, finalize them all.
std::optional<RuleEvent> rule4(const Instance& inst, AllocationState& st) {
  if (st.remaining.size() < 2) return std::nullopt;
  const EnvyGraph graph = build_graph(inst, st);
  const std::vector<CycleInfo> cycles = decompose_cycles(graph);
  const CycleInfo* cycle = nullptr;
  for (const CycleInfo& c : cycles) {
    if (c.kind != CycleKind::kHeterogeneous) {
      cycle = &c;
      break;
    }
  }
  if (cycle == nullptr) return std::nullopt;

  const EventBuilder builder(inst, st);
  const std::vector<AgentId>& verts = cycle->vertices;
  const std::size_t len = verts.size();
  const bool heavy = cycle->kind == CycleKind::kHomogeneousHeavy;

  if (heavy) {
    // Everyone receives the bundle of their successor, simultaneously.
    std::vector<Bundle> old;
    old.reserve(len);
    for (AgentId v : verts) old.push_back(st.bundles_remaining.at(v));
    for (std::size_t t = 0; t < len; ++t) {
      st.bundles_remaining.at(verts[t]) = old[(t + 1) % len];
    }
  }

  // Post-rotation the cycle direction is reversed, so the predecessor of
  // verts[t] is verts[t+1]; without rotation it stays verts[t-1]. A pool
  // good goes to the smallest-id member that finds it relevant while its
  // predecessor does not (such a member always exists: a good is relevant
  // to at most two agents and the cycle has at least three).
  const auto predecessor = [&](std::size_t t) {
    return heavy ? verts[(t + 1) % len] : verts[(t + len - 1) % len];
  };
  std::map<AgentId, Bundle> attach;
  for (AgentId v : verts) attach.emplace(v, Bundle{});
  for (GoodId g : st.pool) {
    std::optional<AgentId> receiver;
    for (std::size_t t = 0; t < len; ++t) {
      if (inst.value(verts[t], g) == 0) continue;
      if (inst.value(predecessor(t), g) > 0) continue;
      if (!receiver || verts[t] < *receiver) receiver = verts[t];
    }
    if (!receiver) {
      // Relevant to at most finalized or off-cycle agents; stays pooled.
      bool on_cycle = false;
      for (std::size_t t = 0; t < len && !on_cycle; ++t) {
        on_cycle = inst.value(verts[t], g) > 0;
      }
      if (on_cycle) {
        throw EngineError("cycle pool good " + std::to_string(g) +
                          " found no eligible member");
      }
      continue;
    }
    attach.at(*receiver).insert(g);
  }

  for (const auto& entry : attach) {
    st.pool = bundle_difference(st.pool, entry.second);
  }
  for (AgentId v : verts) {
    finalize_agent(st, v,
                   bundle_union(st.bundles_remaining.at(v), attach.at(v)));
  }
  return builder.finish(inst, st, RuleKind::kRule4, verts);
}

// ------------------------------------------------------------------ R5 --

// A heterogeneous cycle: at its heavy-light seam (i -> j heavy, j -> k
// light), either j already beats the pool by the sqrt(2) margin and is
// finalized as is, or j takes its pool share and i takes j's old bundle
// plus the pool goods only i cares about.
std::optional<RuleEvent> rule5(const Instance& inst, AllocationState& st) {
  if (st.remaining.size() < 2) return std::nullopt;
  const EnvyGraph graph = build_graph(inst, st);
  const std::vector<CycleInfo> cycles = decompose_cycles(graph);
  const CycleInfo* cycle = nullptr;
  for (const CycleInfo& c : cycles) {
    if (c.kind == CycleKind::kHeterogeneous) {
      cycle = &c;
      break;
    }
  }
  if (cycle == nullptr) return std::nullopt;

  const HeavyLightTriple seam = find_heavy_light_triple(*cycle, graph);
  const AgentId i = seam.i;
  const AgentId j = seam.j;

  const EventBuilder builder(inst, st);
  const Value pool_value = bundle_value(inst, j, st.pool);
  const Value own_value = bundle_value(inst, j, st.bundles_remaining.at(j));
  if (compare_twice_square(pool_value, own_value) <= 0) {
    // The pool can never make j sqrt2-envious; finalize j in place.
    finalize_agent(st, j, st.bundles_remaining.at(j));
    return builder.finish(inst, st, RuleKind::kRule5, {seam.i, seam.j, seam.k});
  }

  const Bundle old_j = st.bundles_remaining.at(j);  // before any pool move
  const Bundle share_j = relevant_to(inst, st.pool, j);
  const Bundle only_i = bundle_difference(relevant_to(inst, st.pool, i),
                                          relevant_to_pair(inst, st.pool, i, j));
  st.pool = bundle_union(
      bundle_difference(bundle_difference(st.pool, share_j), only_i),
      st.bundles_remaining.at(i));
  finalize_agent(st, j, share_j);
  finalize_agent(st, i, bundle_union(old_j, only_i));
  return builder.finish(inst, st, RuleKind::kRule5, {seam.i, seam.j, seam.k});
}

// --------------------------------------------------------------- final --

RuleEvent final_step(const Instance& inst, AllocationState& st) {
  if (!st.remaining.empty()) {
    throw EngineError("final step requires no remaining agents");
  }
  if (!st.last_finalized.has_value()) {
    throw EngineError("final step with nobody finalized");
  }
  const EventBuilder builder(inst, st);
  const AgentId receiver = *st.last_finalized;
  st.bundles_final.at(receiver) =
      bundle_union(st.bundles_final.at(receiver), st.pool);
  st.pool = Bundle{};
  return builder.finish(inst, st, RuleKind::kFinal, {receiver});
}

// -------------------------------------------------------------- engine --

Engine::Engine(const Instance& inst, RunConfig cfg)
    : inst_(inst), cfg_(cfg) {
  if (inst.good_count() < inst.agent_count()) {
    throw InputError("instance has fewer goods than agents");
  }
  const std::uint64_t size = static_cast<std::uint64_t>(inst.agent_count()) +
                             static_cast<std::uint64_t>(inst.good_count());
  max_events_ = cfg_.max_events ? cfg_.max_events : 10 * size * size;
}

void Engine::check_event(const RuleEvent& event) const {
  if (!cfg_.check_invariants) return;
  const std::string where =
      std::string("after ") + rule_name(event.rule) + " event";

  const Verdict partition = state_partition_check(inst_, state_);
  if (!partition.ok) {
    throw EngineError(where + ": state partition broke (" + partition.kind +
                      ")");
  }
  const std::array<Verdict, 5> props = check_properties(inst_, state_);
  static const char* const names[5] = {"(i)", "(ii)", "(iii)", "(iv)", "(v)"};
  for (std::size_t t = 0; t < props.size(); ++t) {
    if (!props[t].ok) {
      throw EngineError(where + ": property " + names[t] + " broke (" +
                        props[t].kind + ")");
    }
  }
  if (event.rule == RuleKind::kRule1 &&
      event.welfare_after <= event.welfare_before) {
    throw EngineError(where + ": welfare did not strictly increase");
  }
  if ((event.rule == RuleKind::kRule2 || event.rule == RuleKind::kRule3 ||
       event.rule == RuleKind::kRule4 || event.rule == RuleKind::kRule5) &&
      event.remaining_after >= event.remaining_before) {
    throw EngineError(where + ": remaining agents did not shrink");
  }
}

std::optional<RuleEvent> Engine::step() {
  switch (phase_) {
    case Phase::kFresh: {
      state_ = basic_feasible_allocation(inst_);
      RuleEvent event;
      event.rule = RuleKind::kBasicFeasible;
      const std::vector<Location> after = locate_goods(inst_, state_);
      for (GoodId g = 0; g < inst_.good_count(); ++g) {
        const Location from{Place::kPool, -1};
        if (after[static_cast<std::size_t>(g)] == from) continue;
        event.moved.push_back(
            GoodMove{g, from, after[static_cast<std::size_t>(g)]});
      }
      event.welfare_after = remaining_welfare(inst_, state_);
      event.remaining_after = static_cast<int>(state_.remaining.size());
      event.state_digest = state_digest(state_);
      phase_ = Phase::kRules;
      check_event(event);
      return event;
    }
    case Phase::kRules: {
      std::optional<RuleEvent> event;
      if (!event) event = rule1(inst_, state_);
      if (!event) event = rule2(inst_, state_);
      if (!event) event = rule3(inst_, state_);
      if (!event) event = rule4(inst_, state_);
      if (!event) event = rule5(inst_, state_);
      if (event) {
        if (++rule_events_ > max_events_) {
          throw EngineError("rule event cap of " +
                            std::to_string(max_events_) +
                            " exceeded; the run is not converging");
        }
        check_event(*event);
        return event;
      }
      RuleEvent final = final_step(inst_, state_);
      phase_ = Phase::kDone;
      check_event(final);
      return final;
    }
    case Phase::kDone:
      return std::nullopt;
  }
  throw EngineError("unreachable engine phase");
}

RunReport Engine::run() {
  RunReport report;
  while (auto event = step()) {
    report.events.push_back(std::move(*event));
  }
  report.final_allocation = state_.bundles_final;
  report.iterations = static_cast<int>(rule_events_);
  return report;
}

RunReport run(const Instance& inst, RunConfig cfg) {
  Engine engine(inst, cfg);
  return engine.run();
}

}  // namespace efx
