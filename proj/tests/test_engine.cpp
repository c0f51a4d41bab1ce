#include "doctest.h"

#include "rsdlab/engine.hpp"
#include "rsdlab/errors.hpp"
#include "rsdlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace rsdlab;

namespace {
GameSpec small_spec(Mechanism mech = Mechanism::obedience_constrained) {
    GameSpec spec;
    spec.n = 2;
    spec.m = 3;
    spec.values = ValueDistribution::shuffled_multiset({Rat(2), Rat(1), Rat(0)});
    spec.advice.common.push_back(make_mallows("A", Rat(1, 2), RankDistance::kendall_tau()));
    spec.advice.idiosyncratic.push_back(
        {make_mallows("H1", Rat(1, 4), RankDistance::kendall_tau())});
    spec.advice.idiosyncratic.push_back(
        {make_mallows("H2", Rat(1, 4), RankDistance::kendall_tau())});
    spec.mechanism = mech;
    spec.validate();
    return spec;
}

GameSpec solo_spec() {
    GameSpec spec;
    spec.n = 1;
    spec.m = 3;
    spec.values = ValueDistribution::explicit_support({{Rat(1), {Rat(3), Rat(2), Rat(1)}}}, false);
    spec.advice.common.push_back(make_mallows("M", Rat(1, 2), RankDistance::kendall_tau()));
    spec.validate();
    return spec;
}
} // namespace

TEST_CASE("single firm expected utility is the mean top value") {
    auto spec = solo_spec();
    Profile p;
    p.choices = {"M"};
    auto res = expected_utilities_exact(spec, p);
    REQUIRE(res.exact);
    REQUIRE(res.utilities.size() == 1);
    CHECK(res.utilities[0] == Rat(17) / 7);
    CHECK(res.social_welfare == Rat(17) / 7);
}

TEST_CASE("expected utilities on the two-firm game") {
    auto spec = small_spec();
    Profile aa;
    aa.choices = {"A", "A"};
    auto res = expected_utilities_exact(spec, aa);
    CHECK(res.utilities[0] == Rat(17) / 14);
    CHECK(res.utilities[1] == Rat(17) / 14);
    CHECK(res.social_welfare == Rat(17) / 7);
    CHECK(res.atoms_visited == 12);

    Profile mixed;
    mixed.choices = {"H1", "A"};
    res = expected_utilities_exact(spec, mixed);
    CHECK(res.utilities[0] == Rat(723) / 490);
    CHECK(res.utilities[1] == Rat(113) / 98);
    CHECK(res.social_welfare == Rat(92) / 35);
    CHECK(res.utilities[0] + res.utilities[1] == res.social_welfare);
}

TEST_CASE("leaf weights of the coupled enumeration sum to one") {
    auto spec = small_spec();
    Profile aa, hh;
    aa.choices = {"A", "A"};
    hh.choices = {"H1", "H2"};
    Rat mass = 0;
    long long leaves = 0;
    enumerate_coupled(spec, {&aa, &hh}, {}, [&](const Rat& w, const CoupledLeaf& leaf) {
        mass += w;
        ++leaves;
        CHECK(leaf.hires.size() == 2);
    });
    CHECK(mass == Rat(1));
    CHECK(leaves > 0);
}

TEST_CASE("play_once outcomes are feasible serial dictatorships") {
    auto spec = small_spec();
    Profile p;
    p.choices = {"A", "H2"};
    auto rng = make_stream(20260814u, 0);
    for (int rep = 0; rep < 200; ++rep) {
        auto rec = play_once(spec, p, rng);
        REQUIRE(rec.x.size() == 3);
        REQUIRE(rec.hires.size() == 2);
        CHECK(rec.hires[0] != rec.hires[1]);
        std::set<int> beta(rec.beta.begin(), rec.beta.end());
        CHECK(beta == std::set<int>{0, 1});
        for (int f = 0; f < 2; ++f) CHECK(rec.hire_values[f] == rec.x[rec.hires[f]]);
        REQUIRE(rec.tech_samples.count("A"));
        REQUIRE(rec.tech_samples.count("H2"));
        // replay the mechanism from the recorded samples
        std::set<int> taken;
        for (int slot = 0; slot < 2; ++slot) {
            const int firm = rec.beta[slot];
            const Ranking& sample = rec.tech_samples.at(p.choices[firm]);
            int pick = -1;
            for (int pos = 0; pos < sample.m() && pick < 0; ++pos)
                if (!taken.count(sample.at(pos))) pick = sample.at(pos);
            CHECK(rec.hires[firm] == pick);
            taken.insert(pick);
        }
    }
}

TEST_CASE("play_once is deterministic in the stream") {
    auto spec = small_spec();
    Profile p;
    p.choices = {"A", "A"};
    auto r1 = make_stream(5, 3);
    auto r2 = make_stream(5, 3);
    auto a = play_once(spec, p, r1);
    auto b = play_once(spec, p, r2);
    CHECK(a.x == b.x);
    CHECK(a.beta == b.beta);
    CHECK(a.hires == b.hires);
}

TEST_CASE("monte carlo matches the exact engine and ignores the worker count") {
    auto spec = small_spec();
    Profile p;
    p.choices = {"H1", "A"};
    auto exact = expected_utilities_exact(spec, p);
    EngineConfig one, four;
    one.workers = 1;
    four.workers = 4;
    auto mc1 = expected_utilities_mc(spec, p, 40000, 99, one);
    auto mc4 = expected_utilities_mc(spec, p, 40000, 99, four);
    CHECK(mc1.utilities_mc == mc4.utilities_mc);
    CHECK(mc1.social_welfare_mc == mc4.social_welfare_mc);
    CHECK(mc1.stderrs == mc4.stderrs);
    for (int f = 0; f < 2; ++f)
        CHECK(std::abs(mc1.utilities_mc[f] - rat_double(exact.utilities[f])) <
              5 * mc1.stderrs[f]);
    CHECK(std::abs(mc1.social_welfare_mc - rat_double(exact.social_welfare)) <
          5 * mc1.sw_stderr);
}

TEST_CASE("coupled metrics evaluate several runs on shared randomness") {
    auto spec = small_spec();
    Profile aa, hh;
    aa.choices = {"A", "A"};
    hh.choices = {"H1", "H2"};
    auto res = mc_coupled_metrics(
        spec, {&aa, &hh}, 2,
        [&](const ValueVector& x, const std::vector<int>&,
            const std::vector<std::vector<int>>& hires, std::vector<double>& out) {
            for (int run = 0; run < 2; ++run) {
                out[run] = 0;
                for (int h : hires[run]) out[run] += rat_double(x[h]);
            }
        },
        30000, 7);
    REQUIRE(res.mean.size() == 2);
    CHECK(res.samples == 30000);
    auto sw_aa = expected_utilities_exact(spec, aa).social_welfare;
    auto sw_hh = expected_utilities_exact(spec, hh).social_welfare;
    CHECK(std::abs(res.mean[0] - rat_double(sw_aa)) < 5 * res.se[0]);
    CHECK(std::abs(res.mean[1] - rat_double(sw_hh)) < 5 * res.se[1]);
}

TEST_CASE("paired utility gap estimate agrees with the exact difference") {
    auto spec = small_spec();
    Profile aa, ha;
    aa.choices = {"A", "A"};
    ha.choices = {"H1", "A"};
    auto gap = mc_utility_gap(spec, aa, ha, 0, 40000, 11);
    const double exact = rat_double(Rat(64) / 245);
    CHECK(std::abs(gap.mean - exact) < 5 * gap.se);
    CHECK(gap.se > 0);
}

TEST_CASE("deviating to your own equilibrium choice is conditionally neutral") {
    auto spec = small_spec();
    Profile p;
    p.choices = {"A", "H2"};
    auto rep = conditional_deviation_gap(spec, p, p, 1);
    CHECK_FALSE(rep.vacuous);
    CHECK(rep.event_mass == Rat(1));
    CHECK(rep.gap == Rat(0));
    CHECK(rep.min_conditional_gap == Rat(0));
    CHECK(rep.pieces > 0);
}

TEST_CASE("snatched plus available always rebuilds the optimal welfare") {
    auto spec = small_spec();
    Profile aa, hh;
    aa.choices = {"A", "A"};
    hh.choices = {"H1", "H2"};
    auto split = snatched_available_split(spec, aa, hh);
    CHECK(split.snatched + split.available == split.sw_star);
    CHECK(split.sw_star == expected_utilities_exact(spec, hh).social_welfare);
    auto same = snatched_available_split(spec, hh, hh);
    CHECK(same.snatched == Rat(0));
    CHECK(same.available == same.sw_star);
}

TEST_CASE("obedience audit finds no profitable deviation in a symmetric game") {
    auto spec = small_spec(Mechanism::unconstrained);
    auto rep = ic_audit(spec, uniform_profile(spec, "A"));
    CHECK_FALSE(rep.any_violation);
    CHECK(rep.decision_points == 8);
    CHECK(rep.violations.empty());
    REQUIRE(rep.worst.has_value());
    CHECK(rep.worst->gap <= Rat(0));
}

TEST_CASE("obedience audit flags a value-reversing sample") {
    GameSpec spec;
    spec.n = 2;
    spec.m = 2;
    spec.values = ValueDistribution::explicit_support({{Rat(1), {Rat(1), Rat(0)}}}, false);
    RankingTechnology rev;
    rev.id = "R";
    rev.spec = DeterministicSpec{{{{Rat(1), Rat(0)}, Ranking({1, 0})}}, {}};
    spec.advice.common.push_back(rev);
    spec.mechanism = Mechanism::unconstrained;
    spec.validate();
    auto rep = ic_audit(spec, uniform_profile(spec, "R"));
    CHECK(rep.any_violation);
    REQUIRE(!rep.violations.empty());
    CHECK(rep.violations.front().gap == Rat(1));
    CHECK(rep.alternatives_checked > 0);
}

TEST_CASE("the exact engine respects its leaf budget") {
    auto spec = small_spec();
    Profile p;
    p.choices = {"A", "A"};
    EngineConfig tiny;
    tiny.atom_budget = 1;
    CHECK_THROWS_AS(expected_utilities_exact(spec, p, tiny), ResourceLimitError);
}
