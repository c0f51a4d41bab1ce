#include "doctest.h"

#include "rsdlab/consistency.hpp"
#include "rsdlab/errors.hpp"
#include "rsdlab/instances.hpp"

using namespace rsdlab;

TEST_CASE("shared-shortlist family, exact small cases") {
    auto d2 = gen_tight_poa(2);
    CHECK(d2.verified);
    CHECK(d2.failure.empty());
    CHECK(d2.name == "tight-poa-n2");
    CHECK(d2.exact_stats.at("sw_all_a") == Rat(199) / 180);
    CHECK(d2.exact_stats.at("sw_all_aprime") == Rat(79) / 60);
    CHECK(d2.exact_stats.at("sw_opt") == Rat(79) / 60);
    CHECK(d2.exact_stats.at("max_gap_all_a") == Rat(0));
    CHECK(d2.exact_stats.at("welfare_ratio") == Rat(237) / 199);

    auto d3 = gen_tight_poa(3);
    CHECK(d3.verified);
    CHECK(d3.parameters.at("m") == "8");
    CHECK(d3.exact_stats.at("welfare_ratio") == Rat(413) / 318);
    CHECK(d3.spec.m == 8);
    CHECK(d3.spec.values.kind() == ValueDistribution::Kind::random_pair);
}

TEST_CASE("shared-shortlist family, sampled midsize case") {
    TightPoaOptions opt;
    opt.mc_samples = 20000;
    auto d = gen_tight_poa(4, opt);
    CHECK(d.verified);
    CHECK(d.failure.empty());
    CHECK(d.mc_stats.at("samples") == 20000);
    CHECK(d.mc_stats.at("welfare_ratio") > 1.3);
    CHECK(d.mc_stats.at("welfare_ratio") < 1.5);
    CHECK(d.mc_stats.at("sw_all_aprime") > d.mc_stats.at("sw_all_a"));
}

TEST_CASE("the welfare ratio of the shortlist family grows toward its cap") {
    TightPoaOptions opt;
    opt.mc_samples = 20000;
    double prev = rat_double(gen_tight_poa(3).exact_stats.at("welfare_ratio"));
    for (int n = 4; n <= 6; ++n) {
        const double ratio = gen_tight_poa(n, opt).mc_stats.at("welfare_ratio");
        CHECK(ratio > prev);
        CHECK(ratio < 2.0);
        prev = ratio;
    }
}

TEST_CASE("dominant-chase family has linearly growing price of anarchy") {
    auto d3 = gen_linear_poa(3);
    CHECK(d3.verified);
    CHECK(d3.exact_stats.at("poa") == Rat(299) / 100);
    CHECK(d3.exact_stats.at("sw_all_a") == Rat(3));
    CHECK(d3.exact_stats.at("sw_opt") == Rat(897) / 100);
    CHECK(d3.exact_stats.at("sequence_sum") == Rat(897) / 100);
    CHECK(d3.exact_stats.at("u_a_vs_0") == Rat(1));
    CHECK(d3.exact_stats.at("u_a_vs_1") == Rat(3) / 2);
    CHECK(d3.exact_stats.at("u_a_vs_2") == Rat(3));

    auto d4 = gen_linear_poa(4);
    CHECK(d4.verified);
    CHECK(d4.exact_stats.at("poa") == Rat(6391) / 1600);
    auto d5 = gen_linear_poa(5);
    CHECK(d5.verified);
    CHECK(d5.exact_stats.at("poa") == Rat(12491) / 2500);
    CHECK(d3.exact_stats.at("poa") > Rat(3 - 1));
    CHECK(d4.exact_stats.at("poa") > Rat(4 - 1));
    CHECK(d5.exact_stats.at("poa") > Rat(5 - 1));
}

TEST_CASE("dominant-chase verification declines oversized instances") {
    auto d = gen_linear_poa(7);
    CHECK_FALSE(d.verified);
    CHECK(d.failure == "exact verification limited to n <= 6");
}

TEST_CASE("generator parameter ranges") {
    CHECK_THROWS_AS(gen_tight_poa(1), InputError);
    CHECK_THROWS_AS(gen_tight_poa(21), InputError);
    CHECK_THROWS_AS(gen_linear_poa(1), InputError);
    CHECK_THROWS_AS(gen_deviation_counterexample(5), InputError);
}

TEST_CASE("conditioning on availability makes the optimistic deviation look bad") {
    auto dev = gen_deviation_counterexample(2);
    CHECK(dev.descriptor.verified);
    CHECK(dev.firm == 1);
    CHECK(dev.firm_slot == 1);
    CHECK(dev.s.key() == "D1|M");
    CHECK(dev.s_star.key() == "E1|M");
    CHECK_FALSE(dev.report.vacuous);
    CHECK(dev.report.event_mass == Rat(11) / 30);
    CHECK(dev.report.gap == Rat(-37) / 341);

    DeviationOptions noisy;
    noisy.phi = Rat(1);
    auto loud = gen_deviation_counterexample(2, noisy);
    CHECK(loud.report.event_mass == Rat(3) / 8);
    CHECK(loud.report.gap == Rat(-7) / 15);

    DeviationOptions faint;
    faint.phi = Rat(1, 1000000);
    auto quiet = gen_deviation_counterexample(2, faint);
    CHECK_FALSE(quiet.report.vacuous);
    CHECK(quiet.report.gap < Rat(0));
    CHECK(quiet.report.gap > Rat(-1) / 1000);
}

TEST_CASE("random consistent games certify their noise level") {
    auto d = gen_random_sc_game(2, 3, 123);
    CHECK(d.verified);
    CHECK(d.name == "random-sc-123");
    CHECK(d.exact_stats.at("delta_star") == Rat(0));
    CHECK(d.spec.advice.common.size() == 2);
    CHECK(d.spec.advice.idiosyncratic.size() == 2);
    d.spec.validate();
    for (const auto& t : d.spec.advice.common) {
        for (const auto& atom : d.spec.values.orbit_support())
            CHECK(check_sc_exact(t, atom.x).verdict == Verdict::consistent);
    }
}

TEST_CASE("symmetric information structures survive the obedience audit") {
    auto suite = gen_obedience_suite();
    REQUIRE(suite.size() == 5);
    for (const auto& d : suite) {
        CAPTURE(d.name);
        CHECK(d.verified);
        CHECK(d.failure.empty());
        CHECK(d.exact_stats.at("worst_gap") <= Rat(0));
        CHECK(d.spec.mechanism == Mechanism::unconstrained);
    }
    CHECK(suite[0].exact_stats.at("decision_points") == Rat(6));
    CHECK(suite[1].exact_stats.at("decision_points") == Rat(8));
    CHECK(suite[1].exact_stats.at("worst_gap") == Rat(-3) / 14);
    CHECK(suite[2].exact_stats.at("decision_points") == Rat(57));
    CHECK(suite[3].exact_stats.at("worst_gap") == Rat(-5) / 21);
}

TEST_CASE("asymmetric information structures get flagged") {
    auto viols = gen_obedience_violations();
    REQUIRE(viols.size() == 2);
    CHECK(viols[0].name == "disobedient-reversed-2x3");
    CHECK(viols[0].verified);
    CHECK(viols[0].exact_stats.at("worst_gap") == Rat(2));
    CHECK(viols[1].name == "disobedient-uniform-2x3");
    CHECK(viols[1].verified);
    CHECK(viols[1].exact_stats.at("worst_gap") == Rat(1));
}
