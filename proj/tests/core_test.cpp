#include <cstdint>

#include "doctest.h"
#include "efx/core.hpp"
#include "test_support.hpp"

using namespace efx;

TEST_CASE("compare_twice_square matches the sign of 2a^2 - b^2") {
  CHECK(compare_twice_square(0, 0) == 0);
  CHECK(compare_twice_square(1, 1) > 0);   // 2 > 1
  CHECK(compare_twice_square(1, 2) < 0);   // 2 < 4
  CHECK(compare_twice_square(5, 7) > 0);   // 50 > 49
  CHECK(compare_twice_square(7, 10) < 0);  // 98 < 100
  CHECK(compare_twice_square(2, 2) > 0);   // 8 > 4
  // 2 * (2^k)^2 == (2^k * sqrt2)^2 has no integer solutions; nearest ties:
  CHECK(compare_twice_square(12, 17) < 0);  // 288 < 289
  CHECK(compare_twice_square(17, 24) > 0);  // 578 > 576
}

TEST_CASE("compare_twice_square is exact at the arithmetic envelope") {
  const Value big = kMaxTotalValue;  // 2^31: the largest representable mass
  CHECK(compare_twice_square(big, big) > 0);
  CHECK(compare_twice_square(big, 2 * big) < 0);
  // 2 * (2^31)^2 = 2^63 exactly vs (3037000499)^2 = 2^63 - 5993626822:
  CHECK(compare_twice_square(big, 3037000499ull) > 0);
  CHECK(compare_twice_square(big, 3037000500ull) < 0);
}

TEST_CASE("compare_products compares fractions exactly, zero denominators "
          "meaning infinity") {
  // compare_products(a, d, c, b) is the sign of a*d - c*b, i.e. a/b vs c/d.
  CHECK(compare_products(1, 2, 1, 2) == 0);  // 1/2 == 1/2
  CHECK(compare_products(2, 3, 1, 2) > 0);   // 2/2  > 1/3
  CHECK(compare_products(1, 3, 2, 2) < 0);   // 1/2  < 2/3
  CHECK(compare_products(5, 0, 3, 7) < 0);   // 5/7  < 3/0 (infinity)
  CHECK(compare_products(0, 0, 0, 0) == 0);
}

TEST_CASE("bundle keeps goods sorted and unique") {
  Bundle b{3, 1, 2};
  CHECK(b.goods() == std::vector<GoodId>{1, 2, 3});
  CHECK(b.contains(2));
  CHECK(!b.contains(0));

  b.insert(0);
  CHECK(b.goods() == std::vector<GoodId>{0, 1, 2, 3});
  b.erase(2);
  CHECK(b.goods() == std::vector<GoodId>{0, 1, 3});

  CHECK_THROWS_AS(b.insert(1), EngineError);
  CHECK_THROWS_AS(b.erase(2), EngineError);
  CHECK_THROWS_AS(Bundle({1, 1}), EngineError);
}

TEST_CASE("bundle set algebra") {
  const Bundle a{0, 1, 2};
  const Bundle b{2, 3};
  CHECK(bundle_union(a, b) == Bundle{0, 1, 2, 3});
  CHECK(bundle_difference(a, b) == Bundle{0, 1});
  CHECK(bundle_intersection(a, b) == Bundle{2});
  CHECK(bundle_union(a, Bundle{}) == a);
  CHECK(bundle_difference(Bundle{}, a).empty());
}

TEST_CASE("instance validation rejects out-of-contract inputs") {
  CHECK_THROWS_AS(Instance(0, {}), InputError);
  // three entries for one good:
  CHECK_THROWS_AS(Instance(3, {{{0, 1}, {1, 1}, {2, 1}}}), InputError);
  // duplicate agent within a good:
  CHECK_THROWS_AS(Instance(2, {{{0, 1}, {0, 2}}}), InputError);
  // zero-value entry:
  CHECK_THROWS_AS(Instance(2, {{{0, 0}}}), InputError);
  // agent out of range:
  CHECK_THROWS_AS(Instance(2, {{{2, 5}}}), InputError);
  // total mass above the envelope:
  CHECK_THROWS_AS(Instance(2, {{{0, kMaxTotalValue}, {1, 1}}}), InputError);
  // exactly at the envelope is allowed:
  CHECK_NOTHROW(Instance(1, {{{0, kMaxTotalValue}}}));
}

TEST_CASE("instance lookups") {
  const Instance inst = test::worked_example();
  CHECK(inst.agent_count() == 3);
  CHECK(inst.good_count() == 4);
  CHECK(inst.total_value() == 2 + 8 + 3 + 3 + 1 + 4 + 4 + 3);

  CHECK(inst.value(0, 0) == 2);
  CHECK(inst.value(1, 0) == 8);
  CHECK(inst.value(2, 0) == 0);
  CHECK_THROWS_AS(inst.value(3, 0), InputError);
  CHECK_THROWS_AS((void)inst.entries(4), InputError);

  const auto e = inst.entries(3);
  REQUIRE(e.size() == 2);
  CHECK(e[0].agent == 1);  // sorted by agent id
  CHECK(e[1].agent == 2);

  CHECK(bundle_value(inst, 0, Bundle{0, 1, 2}) == 6);
  CHECK(bundle_value(inst, 2, Bundle{0, 1}) == 0);
}

TEST_CASE("relevance selectors") {
  const Instance inst = test::worked_example();
  const Bundle all{0, 1, 2, 3};
  CHECK(relevant_to(inst, all, 0) == Bundle{0, 1, 2});
  CHECK(relevant_to(inst, all, 2) == Bundle{2, 3});
  // shared relevance of a pair:
  CHECK(relevant_to_pair(inst, all, 0, 1) == Bundle{0, 1});
  CHECK(relevant_to_pair(inst, all, 1, 2) == Bundle{3});
  CHECK(relevant_to_pair(inst, all, 0, 2) == Bundle{2});
  // i == i selects goods relevant to i and nobody else:
  const Instance solo = test::dense_instance({{5, 1, 0}, {0, 2, 7}});
  CHECK(relevant_to_pair(solo, Bundle{0, 1, 2}, 0, 0) == Bundle{0});
  CHECK(relevant_to_pair(solo, Bundle{0, 1, 2}, 1, 1) == Bundle{2});
}

namespace {

AllocationState small_state() {
  // remaining {0} holds {0}; finalized {1} holds {1}; pool {2, 3}.
  AllocationState st;
  st.remaining = {0};
  st.bundles_remaining.emplace(0, Bundle{0});
  st.finalized = {1};
  st.bundles_final.emplace(1, Bundle{1});
  st.pool = Bundle{2, 3};
  st.last_finalized = 1;
  return st;
}

}  // namespace

TEST_CASE("state partition check accepts a consistent state") {
  const Instance inst = test::dense_instance({{1, 2, 3, 4}, {4, 3, 2, 1}});
  CHECK(state_partition_check(inst, small_state()).ok);
}

TEST_CASE("state partition check pinpoints each breakage") {
  const Instance inst = test::dense_instance({{1, 2, 3, 4}, {4, 3, 2, 1}});

  SUBCASE("agent in both remaining and finalized") {
    auto st = small_state();
    st.remaining = {0, 1};
    st.bundles_remaining.emplace(1, Bundle{});
    const Verdict v = state_partition_check(inst, st);
    CHECK(!v.ok);
    CHECK(v.kind == "agent-partition");
  }
  SUBCASE("agent missing entirely") {
    auto st = small_state();
    st.finalized.clear();
    st.bundles_final.clear();
    st.last_finalized.reset();
    const Verdict v = state_partition_check(inst, st);
    CHECK(!v.ok);
    CHECK(v.kind == "agent-partition");
  }
  SUBCASE("bundle map key mismatch") {
    auto st = small_state();
    st.bundles_remaining.clear();
    const Verdict v = state_partition_check(inst, st);
    CHECK(!v.ok);
    CHECK(v.kind == "bundle-key-mismatch");
  }
  SUBCASE("good held twice") {
    auto st = small_state();
    st.pool = Bundle{0, 2, 3};  // good 0 also sits with agent 0
    const Verdict v = state_partition_check(inst, st);
    CHECK(!v.ok);
    CHECK(v.kind == "duplicate-good");
    CHECK(v.good == 0);
  }
  SUBCASE("good missing") {
    auto st = small_state();
    st.pool = Bundle{2};
    const Verdict v = state_partition_check(inst, st);
    CHECK(!v.ok);
    CHECK(v.kind == "unassigned-good");
    CHECK(v.good == 3);
  }
  SUBCASE("last finalized agent not finalized") {
    auto st = small_state();
    st.last_finalized = 0;
    const Verdict v = state_partition_check(inst, st);
    CHECK(!v.ok);
    CHECK(v.kind == "last-finalized-not-final");
  }
}

TEST_CASE("remaining welfare sums over remaining agents only") {
  const Instance inst = test::dense_instance({{1, 2, 3, 4}, {4, 3, 2, 1}});
  CHECK(remaining_welfare(inst, small_state()) == 1);
  AllocationState st = small_state();
  st.bundles_remaining.at(0).insert(2);
  CHECK(remaining_welfare(inst, st) == 4);
}

TEST_CASE("state digest reacts to any state change") {
  const auto base = small_state();
  const std::uint64_t d0 = state_digest(base);
  CHECK(d0 == state_digest(small_state()));  // deterministic

  auto moved = base;
  moved.pool.erase(3);
  moved.bundles_remaining.at(0).insert(3);
  CHECK(state_digest(moved) != d0);

  auto relabeled = base;
  relabeled.last_finalized.reset();
  CHECK(state_digest(relabeled) != d0);
}

TEST_CASE("is_remaining") {
  const auto st = small_state();
  CHECK(is_remaining(st, 0));
  CHECK(!is_remaining(st, 1));
}
