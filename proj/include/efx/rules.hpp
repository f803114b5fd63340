#pragma once

// The solver: a basic feasible allocation followed by five update rules,
// tried in fixed priority order until none applies, then a final sweep of
// the leftover pool. Every complete run ends in a complete allocation that
// is (1/sqrt(2))-EFX; the verifier can re-check the five running invariants
// after every single event.
//
//   Rule 1  a remaining agent envies the pool goods it shares with another
//           remaining agent: hand over a minimum envied subset.
//   Rule 2  an agent values no other remaining bundle: finalize it with the
//           better of its own bundle and its relevant pool share.
//   Rule 3  a two-cycle in G_0: settle the pair (via two-agent completion
//           when they are the last two agents).
//   Rule 4  a homogeneous G_0 cycle: rotate if heavy, then finalize the
//           whole cycle with their shared pool goods attached.
//   Rule 5  a heterogeneous G_0 cycle: finalize around its heavy-light seam.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "efx/core.hpp"

namespace efx {

enum class RuleKind {
  kBasicFeasible,
  kRule1,
  kRule2,
  kRule3,
  kRule4,
  kRule5,
  kFinal,
};

const char* rule_name(RuleKind k);  // "BasicFeasible", "R1", ..., "Final"

enum class Place { kPool, kRemaining, kFinal };

struct Location {
  Place place = Place::kPool;
  AgentId agent = -1;  // meaningful for kRemaining and kFinal

  friend bool operator==(const Location&, const Location&) = default;
};

struct GoodMove {
  GoodId good = 0;
  Location from;
  Location to;
};

struct RuleEvent {
  RuleKind rule = RuleKind::kBasicFeasible;
  std::vector<AgentId> actors;   // agents the rule acted on
  std::vector<GoodMove> moved;   // every good whose location changed
  Value welfare_before = 0;      // remaining welfare before/after the event
  Value welfare_after = 0;
  int remaining_before = 0;      // |remaining| before/after the event
  int remaining_after = 0;
  std::uint64_t state_digest = 0;  // digest of the post-event state
};

struct RunConfig {
  // Re-verify the state partition and the five properties after every
  // event, throwing EngineError on any breach.
  bool check_invariants = false;
  // Cap on rule events per run; 0 means the default 10 * (n + m)^2.
  std::uint64_t max_events = 0;
};

struct RunReport {
  std::map<AgentId, Bundle> final_allocation;
  std::vector<RuleEvent> events;
  int iterations = 0;  // rule events applied (excludes BasicFeasible/Final)
};

// The opening state: every agent holds at most one good, chosen to maximize
// (number of agents with positive value, product of those positive values)
// lexicographically over all one-good-per-agent assignments — realized as an
// exact subset DP over agents with big-integer products, no floating logs.
// Agents that cannot be covered positively receive a leftover good relevant
// to at most one agent when one is free, and start with an empty bundle
// otherwise (a contested good would break the shared-relevance property).
// Everything else goes to the pool. Requires 1 <= n <= m.
AllocationState basic_feasible_allocation(const Instance& inst);

// Each rule: applies the highest-priority instance of its pattern to `st`
// and returns the event, or returns nullopt when the pattern is absent.
// The engine calls them strictly in order 1..5, so each may assume the
// earlier rules are inapplicable.
std::optional<RuleEvent> rule1(const Instance& inst, AllocationState& st);
std::optional<RuleEvent> rule2(const Instance& inst, AllocationState& st);
std::optional<RuleEvent> rule3(const Instance& inst, AllocationState& st);
std::optional<RuleEvent> rule4(const Instance& inst, AllocationState& st);
std::optional<RuleEvent> rule5(const Instance& inst, AllocationState& st);

// Sweeps the pool to the last finalized agent. Requires no remaining agents;
// a nonempty pool with no last finalized agent is an EngineError.
RuleEvent final_step(const Instance& inst, AllocationState& st);

// Step-wise driver around the pieces above.
class Engine {
 public:
  Engine(const Instance& inst, RunConfig cfg = {});

  const AllocationState& state() const { return state_; }
  bool done() const { return phase_ == Phase::kDone; }

  // Applies the next event (basic feasible first, then rules until none
  // fits, then the final sweep); nullopt once the run is complete.
  std::optional<RuleEvent> step();

  // Drives to completion and returns the report.
  RunReport run();

 private:
  enum class Phase { kFresh, kRules, kDone };

  void check_event(const RuleEvent& event) const;

  const Instance& inst_;
  RunConfig cfg_;
  AllocationState state_;
  Phase phase_ = Phase::kFresh;
  std::uint64_t rule_events_ = 0;
  std::uint64_t max_events_ = 0;
};

// One-call driver: basic feasible allocation, rules to exhaustion, final
// sweep. Throws EngineError if the event cap is hit (nontermination guard).
RunReport run(const Instance& inst, RunConfig cfg = {});

}  // namespace efx
