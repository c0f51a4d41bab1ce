#include "doctest.h"

#include "rsdlab/equilibrium.hpp"
#include "rsdlab/errors.hpp"

using namespace rsdlab;

namespace {
GameSpec small_spec() {
    GameSpec spec;
    spec.n = 2;
    spec.m = 3;
    spec.values = ValueDistribution::shuffled_multiset({Rat(2), Rat(1), Rat(0)});
    spec.advice.common.push_back(make_mallows("A", Rat(1, 2), RankDistance::kendall_tau()));
    spec.advice.idiosyncratic.push_back(
        {make_mallows("H1", Rat(1, 4), RankDistance::kendall_tau())});
    spec.advice.idiosyncratic.push_back(
        {make_mallows("H2", Rat(1, 4), RankDistance::kendall_tau())});
    spec.validate();
    return spec;
}
} // namespace

TEST_CASE("best response gap at the all-shared profile") {
    auto spec = small_spec();
    Profile aa;
    aa.choices = {"A", "A"};
    auto rep = best_response_gap(spec, aa, 0);
    CHECK(rep.gap == Rat(64) / 245);
    CHECK(rep.best_tech == "H1");
    Profile hh;
    hh.choices = {"H1", "H2"};
    CHECK(best_response_gap(spec, hh, 0).gap == Rat(0));
    CHECK(best_response_gap(spec, hh, 1).gap == Rat(0));
}

TEST_CASE("private sharper samples strictly dominate the shared one") {
    auto spec = small_spec();
    auto d0 = dominant_strategy(spec, 0);
    CHECK(d0.kind == DominanceVerdict::Kind::strict);
    CHECK(d0.tech == "H1");
    auto d1 = dominant_strategy(spec, 1);
    CHECK(d1.kind == DominanceVerdict::Kind::strict);
    CHECK(d1.tech == "H2");
    CHECK(dominance_name(DominanceVerdict::Kind::strict) == "strict");
    CHECK(dominance_name(DominanceVerdict::Kind::none) == "none");
}

TEST_CASE("pure equilibrium enumeration on the two-firm game") {
    auto spec = small_spec();
    auto rep = find_pure_nash(spec);
    CHECK(rep.exact);
    CHECK(rep.profiles_scanned == 4);
    REQUIRE(rep.pure_nash.size() == 1);
    const auto& ne = rep.pure_nash[0];
    CHECK(ne.profile.choices == std::vector<std::string>{"H1", "H2"});
    CHECK(ne.utilities[0] == Rat(2027) / 1470);
    CHECK(ne.utilities[1] == Rat(2027) / 1470);
    CHECK(ne.sw == Rat(2027) / 735);
    CHECK(ne.max_gap == Rat(0));
}

TEST_CASE("a loose epsilon admits every profile") {
    auto spec = small_spec();
    EquilibriumOptions opt;
    opt.epsilon = Rat(1);
    CHECK(find_pure_nash(spec, opt).pure_nash.size() == 4);
}

TEST_CASE("social optimum picks the private pairing") {
    auto spec = small_spec();
    auto opt = social_optimum(spec);
    CHECK(opt.profile.choices == std::vector<std::string>{"H1", "H2"});
    CHECK(opt.sw == Rat(2027) / 735);
}

TEST_CASE("full pipeline: unique equilibrium is optimal, noise bound holds") {
    auto spec = small_spec();
    auto rep = price_of_anarchy(spec);
    REQUIRE(rep.poa_defined);
    CHECK(rep.poa == Rat(1));
    CHECK(rep.worst_ne_sw == Rat(2027) / 735);
    CHECK(rep.optimum.sw == Rat(2027) / 735);
    REQUIRE(rep.bound_checked);
    CHECK(rep.delta_star == Rat(0));
    CHECK(rep.bound_finite);
    CHECK(rep.ne_sw_floor == Rat(2027) / 1470);
    CHECK_FALSE(rep.bound_violated);
    REQUIRE(rep.dominant.size() == 2);
    CHECK(rep.dominant[0].kind == DominanceVerdict::Kind::strict);
}

TEST_CASE("profile cap guards the scan") {
    auto spec = small_spec();
    EquilibriumOptions opt;
    opt.profile_cap = 3;
    CHECK_THROWS_AS(find_pure_nash(spec, opt), ResourceLimitError);
}

TEST_CASE("smoothness inequality holds over all ordered profile pairs") {
    auto spec = small_spec();
    auto rep = smoothness_check(spec);
    CHECK(rep.pass);
    CHECK(rep.pairs_checked == 16);
}

TEST_CASE("monte carlo equilibrium classification") {
    auto spec = small_spec();
    McNeOptions opt;
    opt.seed = 42;
    opt.samples = 20000;
    opt.epsilon = 0.05;
    Profile hh, aa;
    hh.choices = {"H1", "H2"};
    aa.choices = {"A", "A"};
    auto yes = check_ne_mc(spec, hh, opt);
    CHECK(yes.status == NeStatus::yes);
    CHECK(yes.max_gap_ucb <= opt.epsilon);
    auto no = check_ne_mc(spec, aa, opt);
    CHECK(no.status == NeStatus::no);
    CHECK(ne_status_name(NeStatus::inconclusive) == "inconclusive");
}

TEST_CASE("monte carlo welfare ratio brackets the exact answer") {
    auto spec = small_spec();
    McNeOptions opt;
    opt.seed = 42;
    opt.samples = 20000;
    opt.epsilon = 0.05;
    auto rep = price_of_anarchy_mc(spec, opt);
    CHECK(rep.profiles_scanned == 4);
    REQUIRE(rep.has_candidates);
    REQUIRE(rep.poa_defined);
    CHECK(rep.sw_star == doctest::Approx(rat_double(Rat(2027) / 735)).epsilon(0.02));
    CHECK(rep.poa_point == doctest::Approx(1.0).epsilon(0.02));
    CHECK(rep.poa_lo <= rep.poa_point + 1e-12);
    CHECK(rep.poa_point <= rep.poa_hi + 1e-12);
}
