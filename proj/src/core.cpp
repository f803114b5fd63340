#include "efx/core.hpp"

#include <algorithm>

namespace efx {

namespace {

using u128 = unsigned __int128;

int sign_of_difference(u128 lhs, u128 rhs) {
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

}  // namespace

int compare_twice_square(Value a, Value b) {
  const u128 lhs = u128{2} * a * a;
  const u128 rhs = u128{1} * b * b;
  return sign_of_difference(lhs, rhs);
}

int compare_products(Value a, Value d, Value c, Value b) {
  return sign_of_difference(u128{a} * d, u128{c} * b);
}

// ---------------------------------------------------------------- Bundle --

Bundle::Bundle(std::vector<GoodId> goods) : goods_(std::move(goods)) {
  std::sort(goods_.begin(), goods_.end());
  if (std::adjacent_find(goods_.begin(), goods_.end()) != goods_.end()) {
    throw EngineError("bundle constructed with duplicate good id");
  }
}

Bundle::Bundle(std::initializer_list<GoodId> goods)
    : Bundle(std::vector<GoodId>(goods)) {}

bool Bundle::contains(GoodId g) const {
  return std::binary_search(goods_.begin(), goods_.end(), g);
}

void Bundle::insert(GoodId g) {
  auto pos = std::lower_bound(goods_.begin(), goods_.end(), g);
  if (pos != goods_.end() && *pos == g) {
    throw EngineError("bundle insert of good " + std::to_string(g) +
                      " which is already present");
  }
  goods_.insert(pos, g);
}

void Bundle::erase(GoodId g) {
  auto pos = std::lower_bound(goods_.begin(), goods_.end(), g);
  if (pos == goods_.end() || *pos != g) {
    throw EngineError("bundle erase of good " + std::to_string(g) +
                      " which is not present");
  }
  goods_.erase(pos);
}

Bundle bundle_union(const Bundle& a, const Bundle& b) {
  std::vector<GoodId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return Bundle(std::move(out));
}

Bundle bundle_difference(const Bundle& a, const Bundle& b) {
  std::vector<GoodId> out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return Bundle(std::move(out));
}

Bundle bundle_intersection(const Bundle& a, const Bundle& b) {
  std::vector<GoodId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return Bundle(std::move(out));
}

// -------------------------------------------------------------- Instance --

Instance::Instance(int agent_count,
                   std::vector<std::vector<GoodEntry>> valuation)
    : agent_count_(agent_count), valuation_(std::move(valuation)) {
  if (agent_count_ < 1) {
    throw InputError("instance needs at least one agent");
  }
  for (GoodId g = 0; g < good_count(); ++g) {
    auto& entries = valuation_[g];
    if (entries.size() > 2) {
      throw InputError("good " + std::to_string(g) +
                       " is relevant to more than two agents");
    }
    std::sort(entries.begin(), entries.end(),
              [](const GoodEntry& a, const GoodEntry& b) {
                return a.agent < b.agent;
              });
    if (entries.size() == 2 && entries[0].agent == entries[1].agent) {
      throw InputError("good " + std::to_string(g) +
                       " lists the same agent twice");
    }
    for (const GoodEntry& e : entries) {
      if (e.agent < 0 || e.agent >= agent_count_) {
        throw InputError("good " + std::to_string(g) +
                         " names agent " + std::to_string(e.agent) +
                         " outside [0, " + std::to_string(agent_count_) + ")");
      }
      if (e.value == 0) {
        throw InputError("good " + std::to_string(g) +
                         " has a zero-value entry (omit the entry instead)");
      }
      total_value_ += e.value;
    }
  }
  if (total_value_ > kMaxTotalValue) {
    throw InputError(
        "total valuation mass exceeds 2^31; exact squared comparisons would "
        "no longer fit in 64 bits");
  }
}

Value Instance::value(AgentId agent, GoodId good) const {
  for (const GoodEntry& e : entries(good)) {
    if (e.agent == agent) return e.value;
  }
  if (agent < 0 || agent >= agent_count_) {
    throw InputError("agent id " + std::to_string(agent) + " out of range");
  }
  return 0;
}

std::span<const GoodEntry> Instance::entries(GoodId good) const {
  if (good < 0 || good >= good_count()) {
    throw InputError("good id " + std::to_string(good) + " out of range");
  }
  return valuation_[static_cast<std::size_t>(good)];
}

Value bundle_value(const Instance& inst, AgentId agent, const Bundle& s) {
  Value total = 0;
  for (GoodId g : s) total += inst.value(agent, g);
  return total;
}

Bundle relevant_to(const Instance& inst, const Bundle& s, AgentId i) {
  std::vector<GoodId> out;
  for (GoodId g : s) {
    if (inst.value(i, g) > 0) out.push_back(g);
  }
  return Bundle(std::move(out));
}

Bundle relevant_to_pair(const Instance& inst, const Bundle& s, AgentId i,
                        AgentId j) {
  std::vector<GoodId> out;
  for (GoodId g : s) {
    if (i == j) {
      // Goods relevant to i and to nobody else.
      auto entries = inst.entries(g);
      if (entries.size() == 1 && entries[0].agent == i) out.push_back(g);
    } else if (inst.value(i, g) > 0 && inst.value(j, g) > 0) {
      out.push_back(g);
    }
  }
  return Bundle(std::move(out));
}

// ------------------------------------------------------- AllocationState --

namespace {

Verdict fail(std::string kind, std::vector<AgentId> agents,
             std::optional<GoodId> good = std::nullopt) {
  Verdict v;
  v.ok = false;
  v.kind = std::move(kind);
  v.agents = std::move(agents);
  v.good = good;
  return v;
}

}  // namespace

Verdict state_partition_check(const Instance& inst,
                              const AllocationState& st) {
  const int n = inst.agent_count();
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  auto note_agents = [&](const std::vector<AgentId>& ids) -> std::optional<Verdict> {
    for (AgentId a : ids) {
      if (a < 0 || a >= n) return fail("agent-out-of-range", {a});
      if (seen[static_cast<std::size_t>(a)]++) {
        return fail("agent-partition", {a});
      }
    }
    return std::nullopt;
  };
  if (auto bad = note_agents(st.remaining)) return *bad;
  if (auto bad = note_agents(st.finalized)) return *bad;
  for (AgentId a = 0; a < n; ++a) {
    if (!seen[static_cast<std::size_t>(a)]) return fail("agent-partition", {a});
  }
  if (!std::is_sorted(st.remaining.begin(), st.remaining.end())) {
    return fail("remaining-not-ascending", st.remaining);
  }

  auto keys_match = [](const std::map<AgentId, Bundle>& bundles,
                       const std::vector<AgentId>& ids) {
    if (bundles.size() != ids.size()) return false;
    for (AgentId a : ids) {
      if (!bundles.contains(a)) return false;
    }
    return true;
  };
  if (!keys_match(st.bundles_remaining, st.remaining)) {
    return fail("bundle-key-mismatch", st.remaining);
  }
  if (!keys_match(st.bundles_final, st.finalized)) {
    return fail("bundle-key-mismatch", st.finalized);
  }
  if (st.last_finalized && !st.bundles_final.contains(*st.last_finalized)) {
    return fail("last-finalized-not-final", {*st.last_finalized});
  }

  const int m = inst.good_count();
  std::vector<int> holders(static_cast<std::size_t>(m), 0);
  auto note_goods = [&](const Bundle& b, AgentId who) -> std::optional<Verdict> {
    for (GoodId g : b) {
      if (g < 0 || g >= m) return fail("good-out-of-range", {who}, g);
      if (holders[static_cast<std::size_t>(g)]++) {
        return fail("duplicate-good", {who}, g);
      }
    }
    return std::nullopt;
  };
  if (auto bad = note_goods(st.pool, AgentId{-1})) return *bad;
  for (const auto& [agent, bundle] : st.bundles_remaining) {
    if (auto bad = note_goods(bundle, agent)) return *bad;
  }
  for (const auto& [agent, bundle] : st.bundles_final) {
    if (auto bad = note_goods(bundle, agent)) return *bad;
  }
  for (GoodId g = 0; g < m; ++g) {
    if (!holders[static_cast<std::size_t>(g)]) {
      return fail("unassigned-good", {}, g);
    }
  }
  return Verdict::pass();
}

bool is_remaining(const AllocationState& st, AgentId agent) {
  return std::binary_search(st.remaining.begin(), st.remaining.end(), agent);
}

Value remaining_welfare(const Instance& inst, const AllocationState& st) {
  Value total = 0;
  for (AgentId a : st.remaining) {
    total += bundle_value(inst, a, st.bundles_remaining.at(a));
  }
  return total;
}

namespace {

struct Fnv1a {
  std::uint64_t h = 14695981039346656037ull;
  void feed(std::uint64_t x) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (x >> (8 * byte)) & 0xff;
      h *= 1099511628211ull;
    }
  }
};

}  // namespace

std::uint64_t state_digest(const AllocationState& st) {
  Fnv1a hash;
  auto feed_bundle = [&hash](const Bundle& b) {
    hash.feed(b.size());
    for (GoodId g : b) hash.feed(static_cast<std::uint64_t>(g));
  };
  hash.feed(st.remaining.size());
  for (AgentId a : st.remaining) {
    hash.feed(static_cast<std::uint64_t>(a));
    feed_bundle(st.bundles_remaining.at(a));
  }
  hash.feed(st.finalized.size());
  for (AgentId a : st.finalized) {
    hash.feed(static_cast<std::uint64_t>(a));
    feed_bundle(st.bundles_final.at(a));
  }
  feed_bundle(st.pool);
  hash.feed(st.last_finalized ? static_cast<std::uint64_t>(*st.last_finalized) + 1
                              : 0);
  return hash.h;
}

}  // namespace efx
