#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rsdlab/errors.hpp"
#include "rsdlab/rational.hpp"

using namespace rsdlab;

TEST_CASE("parse_rat accepts integers, fractions, decimals and exponents") {
    CHECK(parse_rat("3") == Rat(3));
    CHECK(parse_rat("-3") == Rat(-3));
    CHECK(parse_rat("1/3") == Rat(1) / 3);
    CHECK(parse_rat("-2/6") == Rat(-1) / 3);
    CHECK(parse_rat("0.475") == Rat(19) / 40);
    CHECK(parse_rat("1e-6") == Rat(1) / 1000000);
    CHECK(parse_rat("2.5e3") == Rat(2500));
    CHECK(parse_rat("0") == Rat(0));
}

TEST_CASE("parse_rat rejects junk") {
    CHECK_THROWS_AS(parse_rat(""), InputError);
    CHECK_THROWS_AS(parse_rat("abc"), InputError);
    CHECK_THROWS_AS(parse_rat("1/0"), InputError);
    CHECK_THROWS_AS(parse_rat("1//2"), InputError);
    CHECK_THROWS_AS(parse_rat("1.2.3"), InputError);
}

TEST_CASE("rat_str prints canonical p/q form") {
    CHECK(rat_str(Rat(5)) == "5");
    CHECK(rat_str(Rat(-5)) == "-5");
    CHECK(rat_str(Rat(1) / 3) == "1/3");
    CHECK(rat_str(Rat(-2) / 4) == "-1/2");
    CHECK(rat_str(parse_rat("0.475")) == "19/40");
}

TEST_CASE("rat_frac canonicalizes shared factors") {
    CHECK(rat_frac(3, 3) == Rat(1));
    CHECK(rat_frac(6, 4) == Rat(3) / 2);
    CHECK(rat_frac(0, 7) == Rat(0));
    CHECK(rat_frac(4, -6) == Rat(-2) / 3);
    CHECK(rat_str(rat_frac(10, 5)) == "2");
    CHECK_THROWS_AS(rat_frac(1, 0), InputError);
}

TEST_CASE("raw two-argument construction must go through rat_frac") {
    // mpq_class(3, 3) stays unreduced and breaks mpq comparisons; rat_frac is
    // the guarded path.
    CHECK(rat_frac(3, 3) == rat_frac(2, 2));
    CHECK(rat_frac(3, 3) + rat_frac(1, 2) == Rat(3) / 2);
}

TEST_CASE("rat_pow and rat_sum") {
    CHECK(rat_pow(Rat(1) / 2, 0) == Rat(1));
    CHECK(rat_pow(Rat(1) / 2, 3) == Rat(1) / 8);
    CHECK(rat_pow(Rat(-2), 2) == Rat(4));
    CHECK(rat_sum({Rat(1) / 2, Rat(1) / 3, Rat(1) / 6}) == Rat(1));
    CHECK(rat_sum({}) == Rat(0));
}

TEST_CASE("rat_double rounds to nearest") {
    CHECK(rat_double(Rat(1) / 2) == doctest::Approx(0.5));
    CHECK(rat_double(Rat(1) / 3) == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("vec_key distinguishes vectors and is deterministic") {
    std::vector<Rat> a = {Rat(1), Rat(1) / 2};
    std::vector<Rat> b = {Rat(1), Rat(2) / 4};
    std::vector<Rat> c = {Rat(1) / 2, Rat(1)};
    CHECK(vec_key(a) == vec_key(b));
    CHECK(vec_key(a) != vec_key(c));
}
