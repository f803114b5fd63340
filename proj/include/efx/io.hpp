#pragma once

// Text formats and the seeded instance generator.
//
// Instance files ("efx-instance-v1"):
//   efx-instance-v1
//   <n> <m>
//   <good-id> <agent>:<value> [<agent>:<value>]     (m lines, ids 0..m-1)
//
// Allocation files ("efx-allocation-v1"):
//   efx-allocation-v1
//   <n> <m>
//   <agent-id> [<good> ...]                         (n lines, ids 0..n-1)
// Unlisted goods are simply unallocated, so the format covers partial
// allocations too.
//
// Traces are JSON lines: one header object, then one object per rule event.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "efx/core.hpp"
#include "efx/rules.hpp"

namespace efx {

// Parses an instance file; throws InputError naming the offending line.
Instance parse_instance(std::istream& in);
void write_instance(std::ostream& out, const Instance& inst);

// Parses an allocation file against the instance it belongs to (the header
// counts must match). Bundles may overlap or cover only part of the goods;
// callers decide how strict to be.
std::map<AgentId, Bundle> parse_allocation(std::istream& in,
                                           const Instance& inst);
void write_allocation(std::ostream& out, const Instance& inst,
                      const std::map<AgentId, Bundle>& allocation);

// "pool", "r<agent>" or "f<agent>".
std::string location_token(const Location& loc);

// One complete JSON line each (no trailing newline).
std::string trace_header_line(const Instance& inst);
std::string trace_event_line(const RuleEvent& event, bool checked);

// --------------------------------------------------------------------------
// Seeded random instances. All draws come from a single mt19937_64 stream in
// a fixed order, so a (config, seed) pair pins the instance byte for byte.

struct GenConfig {
  int agents = 2;
  int goods = 4;
  Value value_max = 100;     // values are uniform in [1, value_max]
  double share_prob = 0.5;   // chance a good is relevant to two agents
  std::optional<int> q_cap;  // cap on goods sharing one relevant agent set
  std::uint64_t seed = 0;
};

Instance generate(const GenConfig& cfg);

// Stream mixer for deriving per-instance seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

}  // namespace efx
