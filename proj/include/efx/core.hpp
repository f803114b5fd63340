#pragma once

// Core model for fair division of indivisible goods among agents with
// additive valuations where each good matters to at most two agents.
// All arithmetic is exact: values are nonnegative 64-bit integers and every
// threshold test is performed on squared integers (never on floating point).

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace efx {

using Value = std::uint64_t;
using AgentId = std::int32_t;
using GoodId = std::int32_t;

// Error categories, mapped to CLI exit codes in tools/:
//   InputError  -> 1 (malformed or out-of-contract input)
//   EngineError -> 3 (internal invariant breach: a bug, never user error)
//   BudgetError -> 4 (work refused because an enumeration budget was exceeded)
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ceiling on the sum of all valuation entries of an instance. Keeping the
// total under 2^31 means every bundle value fits in 32 bits, every squared
// bundle value fits in a u64, and every cross-multiplied ratio comparison
// fits in unsigned __int128, so no comparison anywhere can overflow.
inline constexpr Value kMaxTotalValue = Value{1} << 31;

// Sign of 2*a^2 - b^2, computed in 128-bit arithmetic. This single
// comparison backs every sqrt(2) threshold in the library:
//   heavy edge        2*num^2 >  den^2      compare_twice_square(num, den) > 0
//   sqrt2 strong envy 2*lhs^2 <  rhs^2      compare_twice_square(lhs, rhs) < 0
//   keep-bundle test  2*pool^2 <= own^2     compare_twice_square(pool, own) <= 0
int compare_twice_square(Value a, Value b);

// Sign of a*d - c*b, i.e. exact comparison of the fractions a/b and c/d for
// nonnegative operands (b or d may be zero, meaning the fraction is infinite).
int compare_products(Value a, Value d, Value c, Value b);

// --------------------------------------------------------------------------
// Bundle: a duplicate-free set of good ids, kept sorted ascending.

class Bundle {
 public:
  Bundle() = default;
  explicit Bundle(std::vector<GoodId> goods);
  Bundle(std::initializer_list<GoodId> goods);

  bool contains(GoodId g) const;
  // Inserting a good that is already present (or erasing an absent one) is an
  // EngineError: the callers below always move goods between disjoint places,
  // so a duplicate signals corrupted bookkeeping rather than a no-op.
  void insert(GoodId g);
  void erase(GoodId g);

  std::size_t size() const { return goods_.size(); }
  bool empty() const { return goods_.empty(); }
  const std::vector<GoodId>& goods() const { return goods_; }
  auto begin() const { return goods_.begin(); }
  auto end() const { return goods_.end(); }

  friend bool operator==(const Bundle&, const Bundle&) = default;

 private:
  std::vector<GoodId> goods_;  // sorted ascending, unique
};

Bundle bundle_union(const Bundle& a, const Bundle& b);
Bundle bundle_difference(const Bundle& a, const Bundle& b);
Bundle bundle_intersection(const Bundle& a, const Bundle& b);

// --------------------------------------------------------------------------
// Instance: n agents, m goods, and for each good at most two positive
// valuation entries (the agents the good is "relevant" to).

struct GoodEntry {
  AgentId agent = 0;
  Value value = 0;
};

class Instance {
 public:
  // valuation[g] lists the positive entries of good g. Validation rejects:
  // out-of-range agent ids, zero values, more than two entries per good,
  // duplicate agents within a good, and a total mass above kMaxTotalValue.
  Instance(int agent_count, std::vector<std::vector<GoodEntry>> valuation);

  int agent_count() const { return agent_count_; }
  int good_count() const { return static_cast<int>(valuation_.size()); }

  // Value of a single good to an agent; zero when the good is irrelevant.
  Value value(AgentId agent, GoodId good) const;
  // The positive entries of a good, sorted by agent id (size 0, 1, or 2).
  std::span<const GoodEntry> entries(GoodId good) const;

  Value total_value() const { return total_value_; }

 private:
  int agent_count_ = 0;
  std::vector<std::vector<GoodEntry>> valuation_;
  Value total_value_ = 0;
};

// Sum of the agent's values over the bundle (additivity is the model).
Value bundle_value(const Instance& inst, AgentId agent, const Bundle& s);

// Goods of s relevant to the agent, R(s, i): positive value for i.
Bundle relevant_to(const Instance& inst, const Bundle& s, AgentId i);

// Goods of s relevant to the pair, R(s, i, j). For i != j these are goods
// positive for both; R(s, i, i) means goods relevant to i and nobody else.
Bundle relevant_to_pair(const Instance& inst, const Bundle& s, AgentId i,
                        AgentId j);

// --------------------------------------------------------------------------
// AllocationState: the engine's working partition. Remaining agents hold
// tentative bundles, finalized agents hold final bundles, everything else
// sits in the pool. last_finalized names the agent who receives the pool
// sweep at the end of a run.

struct AllocationState {
  std::vector<AgentId> remaining;   // ascending agent ids (only ever shrinks)
  std::vector<AgentId> finalized;   // in finalization order
  std::map<AgentId, Bundle> bundles_remaining;
  std::map<AgentId, Bundle> bundles_final;
  Bundle pool;
  std::optional<AgentId> last_finalized;
};

// Verdict: outcome of a verification check, with an exact replayable witness
// on failure. lhs_sq/rhs_sq are the squared operands of the cited comparison
// (for partition checks they are unused and left zero).
struct Verdict {
  bool ok = true;
  std::string kind;               // empty when ok
  std::vector<AgentId> agents;    // agents involved, order is kind-specific
  std::optional<GoodId> good;     // witness good, when one exists
  Value lhs_sq = 0;
  Value rhs_sq = 0;

  static Verdict pass() { return Verdict{}; }
};

// Checks that remaining + finalized partition the agents, that bundle map
// keys match those sets exactly, and that every good of the instance sits in
// exactly one bundle or the pool.
Verdict state_partition_check(const Instance& inst, const AllocationState& st);

// True when the agent is still in st.remaining.
bool is_remaining(const AllocationState& st, AgentId agent);

// Sum over remaining agents of their value for their own tentative bundle.
// This is the potential that Rule 1 strictly increases.
Value remaining_welfare(const Instance& inst, const AllocationState& st);

// FNV-1a hash of a canonical serialization of the state; used by traces so
// that replays can be compared step by step.
std::uint64_t state_digest(const AllocationState& st);

}  // namespace efx
