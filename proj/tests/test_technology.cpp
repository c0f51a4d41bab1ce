#include "doctest.h"

#include "rsdlab/errors.hpp"
#include "rsdlab/rng.hpp"
#include "rsdlab/technology.hpp"

#include <cmath>
#include <map>

using namespace rsdlab;

namespace {
const ValueVector x321 = {Rat(3), Rat(2), Rat(1)};

Rat cell(const RankingPmf& pmf, const Ranking& r) {
    for (const auto& c : pmf.cells)
        if (c.r == r) return c.p;
    return Rat(0);
}

Rat pmf_mass(const RankingPmf& pmf) {
    Rat t = 0;
    for (const auto& c : pmf.cells) t += c.p;
    return t;
}
} // namespace

TEST_CASE("mallows kendall pmf at phi = 1/2") {
    auto t = make_mallows("M", Rat(1, 2), RankDistance::kendall_tau());
    auto pmf = exact_pmf(t, x321);
    REQUIRE(pmf.exact);
    REQUIRE(pmf.cells.size() == 6);
    CHECK(pmf_mass(pmf) == Rat(1));
    CHECK(cell(pmf, Ranking({0, 1, 2})) == Rat(8) / 21);
    CHECK(cell(pmf, Ranking({0, 2, 1})) == Rat(4) / 21);
    CHECK(cell(pmf, Ranking({1, 0, 2})) == Rat(4) / 21);
    CHECK(cell(pmf, Ranking({1, 2, 0})) == Rat(2) / 21);
    CHECK(cell(pmf, Ranking({2, 0, 1})) == Rat(2) / 21);
    CHECK(cell(pmf, Ranking({2, 1, 0})) == Rat(1) / 21);
}

TEST_CASE("mallows hamming pmf at phi = 1/2") {
    auto t = make_mallows("MH", Rat(1, 2), RankDistance::hamming());
    auto pmf = exact_pmf(t, x321);
    CHECK(cell(pmf, Ranking({0, 1, 2})) == Rat(1) / 2);
    CHECK(cell(pmf, Ranking({0, 2, 1})) == Rat(1) / 8);
    CHECK(cell(pmf, Ranking({1, 0, 2})) == Rat(1) / 8);
    CHECK(cell(pmf, Ranking({1, 2, 0})) == Rat(1) / 16);
    CHECK(cell(pmf, Ranking({2, 0, 1})) == Rat(1) / 16);
    CHECK(cell(pmf, Ranking({2, 1, 0})) == Rat(1) / 8);
}

TEST_CASE("mallows at phi = 1 is uniform") {
    auto t = make_mallows("U", Rat(1), RankDistance::kendall_tau());
    auto pmf = exact_pmf(t, x321);
    for (const auto& c : pmf.cells) CHECK(c.p == Rat(1) / 6);
}

TEST_CASE("discrete additive noise resolves ties by the chosen rule") {
    RankingTechnology t;
    t.id = "N";
    NoiseTechSpec ns;
    ns.noise.family = NoiseSpec::Family::discrete_iid;
    ns.noise.atoms = {{Rat(1, 2), Rat(0)}, {Rat(1, 2), Rat(1)}};
    ns.tie_break = TieBreak::index;
    t.spec = ns;
    const ValueVector x = {Rat(1), Rat(0)};
    auto pmf = exact_pmf(t, x);
    REQUIRE(pmf.cells.size() == 1);
    CHECK(cell(pmf, Ranking({0, 1})) == Rat(1));
    ns.tie_break = TieBreak::uniform;
    t.spec = ns;
    pmf = exact_pmf(t, x);
    CHECK(cell(pmf, Ranking({0, 1})) == Rat(7) / 8);
    CHECK(cell(pmf, Ranking({1, 0})) == Rat(1) / 8);
}

TEST_CASE("shortlist pins listed values into the window") {
    RankingTechnology t;
    t.id = "A";
    t.spec = ShortlistSpec{{Rat(1)}, 1};
    auto pmf = exact_pmf(t, {Rat(1), Rat(0), Rat(0)});
    REQUIRE(pmf.cells.size() == 2);
    CHECK(cell(pmf, Ranking({0, 1, 2})) == Rat(1) / 2);
    CHECK(cell(pmf, Ranking({0, 2, 1})) == Rat(1) / 2);
}

TEST_CASE("tiered sorts inside a tier and appends the implicit rest") {
    RankingTechnology t;
    t.id = "T";
    t.spec = TieredSpec{{{{Rat(1), Rat(2)}, TieredSpec::Order::asc}}};
    auto pmf = exact_pmf(t, {Rat(1), Rat(2), Rat(0)});
    REQUIRE(pmf.cells.size() == 1);
    CHECK(cell(pmf, Ranking({0, 1, 2})) == Rat(1));
    t.spec = TieredSpec{{{{Rat(1), Rat(2)}, TieredSpec::Order::desc}}};
    pmf = exact_pmf(t, {Rat(1), Rat(2), Rat(0)});
    CHECK(cell(pmf, Ranking({1, 0, 2})) == Rat(1));
}

TEST_CASE("deterministic entries need a fallback for unlisted inputs") {
    RankingTechnology t;
    t.id = "D";
    t.spec = DeterministicSpec{{{{Rat(1), Rat(0)}, Ranking({0, 1})}}, {}};
    CHECK_FALSE(t.stochastic());
    CHECK_FALSE(t.value_equivariant());
    CHECK(cell(exact_pmf(t, {Rat(1), Rat(0)}), Ranking({0, 1})) == Rat(1));
    CHECK_THROWS_AS(exact_pmf(t, {Rat(0), Rat(1)}), InputError);
    t.spec = DeterministicSpec{{{{Rat(1), Rat(0)}, Ranking({0, 1})}}, Ranking({1, 0})};
    CHECK(cell(exact_pmf(t, {Rat(0), Rat(1)}), Ranking({1, 0})) == Rat(1));
}

TEST_CASE("kind flags") {
    auto m = make_mallows("M", Rat(1, 2), RankDistance::kendall_tau());
    CHECK(m.stochastic());
    CHECK(m.value_equivariant());
    CHECK(m.exactly_enumerable());
    CHECK(m.kind_name() == "mallows");
    RankingTechnology g;
    g.id = "G";
    NoiseTechSpec gs;
    gs.noise.family = NoiseSpec::Family::gaussian;
    g.spec = gs;
    CHECK_FALSE(g.exactly_enumerable());
    CHECK(g.value_equivariant());
}

TEST_CASE("validation rejects bad parameters") {
    CHECK_THROWS_AS(make_mallows("Z", Rat(0), RankDistance::kendall_tau()).validate(), InputError);
    CHECK_THROWS_AS(make_mallows("Z", Rat(3, 2), RankDistance::kendall_tau()).validate(),
                    InputError);
    RankingTechnology sl;
    sl.id = "S";
    sl.spec = ShortlistSpec{{Rat(1)}, 0};
    CHECK_THROWS_AS(sl.validate(), InputError);
    RankingTechnology tb;
    tb.id = "T";
    tb.spec = TableSpec{{{{Rat(1), Rat(0)}, {{Ranking({0, 1}), Rat(1, 2)}}}}};
    CHECK_THROWS_AS(tb.validate(), InputError);
}

TEST_CASE("ground truth ranking and tie handling") {
    CHECK(ground_truth_ranking({Rat(1), Rat(2), Rat(2)}) == Ranking({1, 2, 0}));
    CHECK(ground_truth_orders({Rat(1), Rat(1), Rat(0)}, 100).size() == 2);
    CHECK(ground_truth_orders({Rat(2), Rat(1), Rat(0)}, 100).size() == 1);
    auto rng = make_stream(1, 0);
    std::map<int, int> first;
    for (int i = 0; i < 2000; ++i)
        first[ground_truth_ranking({Rat(1), Rat(1), Rat(0)}, TieBreak::uniform, &rng).at(0)]++;
    CHECK(first[0] > 800);
    CHECK(first[1] > 800);
    CHECK(first[2] == 0);
}

TEST_CASE("pmf enumeration respects the m cap") {
    auto t = make_mallows("M", Rat(1, 2), RankDistance::kendall_tau());
    ValueVector x(6);
    for (int i = 0; i < 6; ++i) x[i] = Rat(6 - i);
    CHECK_THROWS_AS(exact_pmf(t, x), ResourceLimitError);
}

TEST_CASE("continuous noise yields an estimated pmf") {
    RankingTechnology g;
    g.id = "G";
    NoiseTechSpec gs;
    gs.noise.family = NoiseSpec::Family::gaussian;
    gs.noise.param = 1.0;
    g.spec = gs;
    TechCaps caps;
    caps.est_samples = 20000;
    auto pmf = exact_pmf(g, {Rat(1), Rat(0)}, caps);
    CHECK_FALSE(pmf.exact);
    CHECK(pmf.samples == 20000);
    REQUIRE(pmf.est_cells.size() == 2);
    double mass = 0;
    for (const auto& c : pmf.est_cells) {
        CHECK(c.se > 0);
        mass += c.p;
    }
    CHECK(mass == doctest::Approx(1.0));
}

TEST_CASE("sampler matches the exact pmf in total variation") {
    auto t = make_mallows("M", Rat(1, 2), RankDistance::kendall_tau());
    auto pmf = exact_pmf(t, x321);
    auto rng = make_stream(20260814u, 5);
    std::map<std::vector<int>, long> counts;
    const long reps = 100000;
    for (long i = 0; i < reps; ++i) counts[sample_ranking(t, x321, rng).order()]++;
    double tv = 0;
    for (const auto& c : pmf.cells)
        tv += std::abs(static_cast<double>(counts[c.r.order()]) / reps - rat_double(c.p));
    CHECK(tv / 2 < 0.01);
}

TEST_CASE("support model conditionals agree with the pmf") {
    auto t = make_mallows("M", Rat(1, 2), RankDistance::kendall_tau());
    TechCaps caps;
    auto model = make_support_model(t, x321, caps);
    CHECK(model->m() == 3);
    auto root = model->next_given_prefix({});
    REQUIRE(root.size() == 3);
    CHECK(root[0] == std::pair<int, Rat>{0, Rat(4) / 7});
    CHECK(root[1] == std::pair<int, Rat>{1, Rat(2) / 7});
    CHECK(root[2] == std::pair<int, Rat>{2, Rat(1) / 7});
    auto after0 = model->next_given_prefix({0});
    REQUIRE(after0.size() == 2);
    CHECK(after0[0] == std::pair<int, Rat>{1, Rat(2) / 3});
    CHECK(after0[1] == std::pair<int, Rat>{2, Rat(1) / 3});
    CHECK_THROWS_AS(model->next_given_prefix({0, 0}), InputError);
}

TEST_CASE("model cache shares instances per technology and input") {
    auto t = make_mallows("M", Rat(1, 2), RankDistance::kendall_tau());
    ModelCache cache;
    CHECK(cache.get(t, x321).get() == cache.get(t, x321).get());
    CHECK(cache.get(t, x321).get() != cache.get(t, {Rat(1), Rat(2), Rat(3)}).get());
}
