#include <doctest.h>

#include <set>

#include "pfbench/rng.hpp"

using pfb::StreamRng;

TEST_CASE("identical keys give identical streams") {
    StreamRng a{1, 2, 3};
    StreamRng b{1, 2, 3};
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("key parts are order sensitive") {
    StreamRng a{1, 2};
    StreamRng b{2, 1};
    CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("draws are independent of other streams") {
    StreamRng alone{7, 7};
    std::vector<std::uint64_t> expected;
    for (int i = 0; i < 10; ++i) expected.push_back(alone.next_u64());

    // Interleave with an unrelated stream; the sequence must not change.
    StreamRng a{7, 7};
    StreamRng other{9, 9};
    for (int i = 0; i < 10; ++i) {
        other.next_u64();
        CHECK(a.next_u64() == expected[static_cast<std::size_t>(i)]);
        other.next_double();
    }
}

TEST_CASE("next_double lies in [0,1)") {
    StreamRng rng{42};
    for (int i = 0; i < 10000; ++i) {
        double d = rng.next_double();
        CHECK(d >= 0.0);
        CHECK(d < 1.0);
    }
}

TEST_CASE("below stays within the bound and hits every value") {
    StreamRng rng{5};
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t v = rng.below(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("permutation is a valid permutation") {
    StreamRng rng{11};
    auto p = rng.permutation(50);
    std::set<std::size_t> seen(p.begin(), p.end());
    CHECK(seen.size() == 50);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == 49);
}

TEST_CASE("hash_id is stable") {
    CHECK(pfb::hash_id("rbar") == pfb::hash_id("rbar"));
    CHECK(pfb::hash_id("rbar") != pfb::hash_id("probe"));
}
