#include "doctest.h"

#include "rsdlab/errors.hpp"
#include "rsdlab/rng.hpp"
#include "rsdlab/values.hpp"

#include <algorithm>
#include <map>

using namespace rsdlab;

namespace {
Rat total_mass(const std::vector<ValueAtom>& atoms) {
    Rat t = 0;
    for (const auto& a : atoms) t += a.p;
    return t;
}
} // namespace

TEST_CASE("iid support enumerates the product space") {
    auto d = ValueDistribution::iid(2, {{Rat(1, 2), Rat(0)}, {Rat(1, 2), Rat(1)}});
    CHECK(d.m() == 2);
    CHECK(d.permutation_invariant());
    auto s = d.support();
    CHECK(s.size() == 4);
    CHECK(total_mass(s) == Rat(1));
    auto o = d.orbit_support();
    REQUIRE(o.size() == 3);
    CHECK(total_mass(o) == Rat(1));
    std::map<std::string, Rat> by_rep;
    for (const auto& a : o) by_rep[vec_key(a.x)] = a.p;
    CHECK(by_rep[vec_key({Rat(1), Rat(1)})] == Rat(1) / 4);
    CHECK(by_rep[vec_key({Rat(1), Rat(0)})] == Rat(1) / 2);
    CHECK(by_rep[vec_key({Rat(0), Rat(0)})] == Rat(1) / 4);
}

TEST_CASE("orbit representatives are sorted descending") {
    auto d = ValueDistribution::iid(3, {{Rat(1, 2), Rat(0)}, {Rat(1, 2), Rat(1)}});
    for (const auto& a : d.orbit_support())
        CHECK(std::is_sorted(a.x.rbegin(), a.x.rend()));
}

TEST_CASE("random_pair spreads one ordered pair, one orbit total") {
    auto d = ValueDistribution::random_pair(3, Rat(1), Rat(1, 2));
    auto s = d.support();
    CHECK(s.size() == 6);
    CHECK(total_mass(s) == Rat(1));
    for (const auto& a : s) {
        CHECK(a.p == Rat(1) / 6);
        CHECK(std::count(a.x.begin(), a.x.end(), Rat(1)) == 1);
        CHECK(std::count(a.x.begin(), a.x.end(), Rat(1, 2)) == 1);
        CHECK(std::count(a.x.begin(), a.x.end(), Rat(0)) == 1);
    }
    auto o = d.orbit_support();
    REQUIRE(o.size() == 1);
    CHECK(o[0].p == Rat(1));
    CHECK(o[0].x == ValueVector{Rat(1), Rat(1, 2), Rat(0)});
}

TEST_CASE("shuffled_multiset merges repeated values") {
    auto distinct = ValueDistribution::shuffled_multiset({Rat(2), Rat(1), Rat(0)});
    CHECK(distinct.support().size() == 6);
    auto tied = ValueDistribution::shuffled_multiset({Rat(1), Rat(1), Rat(0)});
    auto s = tied.support();
    CHECK(s.size() == 3);
    for (const auto& a : s) CHECK(a.p == Rat(1) / 3);
    CHECK(total_mass(s) == Rat(1));
}

TEST_CASE("explicit support polices the declared invariance flag") {
    CHECK_THROWS_AS(
        ValueDistribution::explicit_support({{Rat(1), {Rat(1), Rat(0)}}}, true),
        InputError);
    auto sym = ValueDistribution::explicit_support(
        {{Rat(1, 2), {Rat(1), Rat(0)}}, {Rat(1, 2), {Rat(0), Rat(1)}}}, true);
    CHECK(sym.verify_permutation_invariance());
    auto asym = ValueDistribution::explicit_support({{Rat(1), {Rat(1), Rat(0)}}}, false);
    CHECK_FALSE(asym.verify_permutation_invariance());
    CHECK_FALSE(asym.permutation_invariant());
}

TEST_CASE("atom probabilities must be positive and sum to one") {
    CHECK_THROWS_AS(ValueDistribution::explicit_support({{Rat(1, 2), {Rat(1)}}}, false),
                    InputError);
    CHECK_THROWS_AS(ValueDistribution::iid(2, {{Rat(1, 2), Rat(0)}, {Rat(1, 3), Rat(1)}}),
                    InputError);
}

TEST_CASE("support cap throws past the limit") {
    auto d = ValueDistribution::iid(10, {{Rat(1, 2), Rat(0)}, {Rat(1, 2), Rat(1)}});
    CHECK_THROWS_AS(d.support(100), ResourceLimitError);
    CHECK(d.support(2000).size() == 1024);
}

TEST_CASE("samples land in the support with roughly the right frequency") {
    auto d = ValueDistribution::shuffled_multiset({Rat(2), Rat(1), Rat(0)});
    auto rng = make_stream(20260814u, 0);
    std::map<std::string, int> counts;
    const int reps = 6000;
    for (int i = 0; i < reps; ++i) counts[vec_key(d.sample(rng))]++;
    CHECK(counts.size() == 6);
    for (const auto& [k, c] : counts) CHECK(std::abs(c - reps / 6) < 200);
}

TEST_CASE("sample_into reuses the buffer") {
    auto d = ValueDistribution::iid(4, {{Rat(1, 2), Rat(0)}, {Rat(1, 2), Rat(1)}});
    auto rng = make_stream(3, 1);
    ValueVector buf;
    d.sample_into(rng, buf);
    CHECK(buf.size() == 4);
    auto rng2 = make_stream(3, 1);
    CHECK(d.sample(rng2) == buf);
}
