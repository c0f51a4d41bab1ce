#include "rsdlab/instances.hpp"

#include "rsdlab/errors.hpp"
#include "rsdlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rsdlab {

namespace {

Ranking top_then_ascending(int m, int top) {
    std::vector<int> order;
    order.reserve(m);
    order.push_back(top);
    for (int c = 0; c < m; ++c)
        if (c != top) order.push_back(c);
    return Ranking(order);
}

} // namespace

InstanceDescriptor gen_tight_poa(int n, const TightPoaOptions& opt) {
    if (n < 2 || n > 20) throw InputError("tight-poa needs n in [2, 20]");
    if (opt.eta <= 0 || opt.eta >= 1) throw InputError("eta must be in (0, 1)");
    const int m = 1 << n;
    const Rat v = rat_frac(n - 1, n + 1) * (1 - opt.eta);

    InstanceDescriptor d;
    d.name = "tight-poa-n" + std::to_string(n);
    d.parameters = {{"n", std::to_string(n)},
                    {"m", std::to_string(m)},
                    {"eta", rat_str(opt.eta)},
                    {"v", rat_str(v)}};
    d.notes = "shared technology A pins the lone value-1 candidate first; Aprime deals both "
              "valuable candidates into the top n slots; all-A play is an equilibrium with "
              "welfare near 1, all-Aprime reaches 1 + v";

    GameSpec spec;
    spec.n = n;
    spec.m = m;
    spec.values = ValueDistribution::random_pair(m, Rat(1), v);
    RankingTechnology A{"A", ShortlistSpec{{Rat(1)}, 1}};
    RankingTechnology Ap{"Aprime", ShortlistSpec{{Rat(1), v}, n}};
    spec.advice.common = {A, Ap};
    spec.validate();
    d.spec = spec;

    // Both valuable candidates sit inside Aprime's window of size n, so the n
    // hires always include them: the optimum welfare is exactly 1 + v.
    const Rat sw_opt = 1 + v;
    d.exact_stats["sw_opt"] = sw_opt;

    Profile all_a = uniform_profile(spec, "A");
    Profile all_ap = uniform_profile(spec, "Aprime");

    if (n <= 3) {
        auto caps = opt.engine.caps;
        ValueVector xrep(m, Rat(0));
        xrep[0] = 1;
        xrep[1] = v;
        for (const auto& t : spec.advice.common) {
            auto sc = check_sc_exact(t, xrep, caps);
            if (sc.verdict != Verdict::consistent || sc.delta_star != 0) {
                d.failure = "technology " + t.id + " failed the consistency certificate";
                return d;
            }
        }
        auto ua = expected_utilities_exact(spec, all_a, opt.engine);
        auto uap = expected_utilities_exact(spec, all_ap, opt.engine);
        d.exact_stats["sw_all_a"] = ua.social_welfare;
        d.exact_stats["sw_all_aprime"] = uap.social_welfare;
        if (uap.social_welfare != sw_opt) {
            d.failure = "all-Aprime welfare does not match 1 + v";
            return d;
        }
        Rat worst(0);
        for (int i = 0; i < n; ++i) {
            auto g = best_response_gap(spec, all_a, i, opt.engine);
            if (g.gap > worst) worst = g.gap;
        }
        d.exact_stats["max_gap_all_a"] = worst;
        d.exact_stats["welfare_ratio"] = sw_opt / ua.social_welfare;
        if (worst > 0) {
            d.failure = "all-A is not an equilibrium, best-response gap " + rat_str(worst);
            return d;
        }
        d.verified = true;
        return d;
    }

    // Large n: one shared-randomness pass estimates every per-firm deviation
    // gap plus both welfare levels.
    std::vector<Profile> devs;
    for (int i = 0; i < n; ++i) {
        Profile p = all_a;
        p.choices[i] = "Aprime";
        devs.push_back(std::move(p));
    }
    std::vector<const Profile*> runs{&all_a};
    for (const auto& p : devs) runs.push_back(&p);
    runs.push_back(&all_ap);
    const int kmetrics = n + 2;
    auto res = mc_coupled_metrics(
        spec, runs, kmetrics,
        [&](const ValueVector& x, const std::vector<int>&,
            const std::vector<std::vector<int>>& hires, std::vector<double>& out) {
            for (int i = 0; i < n; ++i)
                out[i] = rat_double(x[hires[i + 1][i]]) - rat_double(x[hires[0][i]]);
            double sw_a = 0, sw_ap = 0;
            for (int i = 0; i < n; ++i) {
                sw_a += rat_double(x[hires[0][i]]);
                sw_ap += rat_double(x[hires[n + 1][i]]);
            }
            out[n] = sw_a;
            out[n + 1] = sw_ap;
        },
        opt.mc_samples, opt.seed, opt.engine);

    const double z = normal_quantile(opt.confidence);
    const double eps = 1e-3 * rat_double(sw_opt);
    double max_ucb = -1e18;
    for (int i = 0; i < n; ++i) max_ucb = std::max(max_ucb, res.mean[i] + z * res.se[i]);
    d.mc_stats["samples"] = static_cast<double>(opt.mc_samples);
    d.mc_stats["epsilon"] = eps;
    d.mc_stats["max_gap_ucb"] = max_ucb;
    d.mc_stats["sw_all_a"] = res.mean[n];
    d.mc_stats["sw_all_a_se"] = res.se[n];
    d.mc_stats["sw_all_aprime"] = res.mean[n + 1];
    d.mc_stats["sw_all_aprime_se"] = res.se[n + 1];
    d.mc_stats["welfare_ratio"] = rat_double(sw_opt) / res.mean[n];
    if (max_ucb > eps) {
        d.failure = "all-A epsilon-equilibrium check failed at the requested confidence";
        return d;
    }
    if (std::abs(res.mean[n + 1] - rat_double(sw_opt)) > 4 * std::max(res.se[n + 1], 1e-12)) {
        d.failure = "all-Aprime welfare estimate far from 1 + v";
        return d;
    }
    d.verified = true;
    return d;
}

InstanceDescriptor gen_linear_poa(int n, const LinearPoaOptions& opt) {
    if (n < 2 || n > 12) throw InputError("linear-poa needs n in [2, 12]");
    if (opt.eps <= 0) throw InputError("eps must be positive");
    const int m = 2 * n;
    const Rat slack = opt.eps / (n * n);
    std::vector<Rat> a(n);
    for (int j = 1; j <= n; ++j)
        a[j - 1] = 1 + rat_frac(static_cast<long>(j) * (j - 1), n - j + 1) -
                   rat_frac(static_cast<long>(j - 1) * (j - 2), n - j + 2) - slack;
    for (int j = 0; j < n; ++j) {
        if (a[j] <= 0 || a[j] == n || (j > 0 && a[j] <= a[j - 1]))
            throw InputError("value sequence degenerates; pick a smaller eps");
    }

    InstanceDescriptor d;
    d.name = "linear-poa-n" + std::to_string(n);
    d.parameters = {{"n", std::to_string(n)}, {"m", std::to_string(m)}, {"eps", rat_str(opt.eps)}};
    d.notes = "shared technology A chases the single value-n candidate then the worthless "
              "ones and is strictly dominant; the per-firm technology H walks the mid-value "
              "sequence upward, so all-H welfare grows quadratically while all-A stays at n";

    std::vector<Rat> multiset;
    multiset.push_back(Rat(n));
    for (int i = 0; i < n - 1; ++i) multiset.push_back(Rat(0));
    for (const auto& r : a) multiset.push_back(r);

    GameSpec spec;
    spec.n = n;
    spec.m = m;
    spec.values = ValueDistribution::shuffled_multiset(multiset);
    TieredSpec a_spec;
    a_spec.tiers = {{{Rat(n)}, TieredSpec::Order::uniform}, {{Rat(0)}, TieredSpec::Order::uniform}};
    spec.advice.common = {RankingTechnology{"A", a_spec}};
    TieredSpec h_spec;
    h_spec.tiers = {{a, TieredSpec::Order::asc}};
    spec.advice.idiosyncratic.resize(n);
    for (int i = 0; i < n; ++i)
        spec.advice.idiosyncratic[i].push_back(
            RankingTechnology{"H" + std::to_string(i + 1), h_spec});
    spec.validate();
    d.spec = spec;

    Rat seq_sum(0);
    for (const auto& r : a) seq_sum += r;
    d.exact_stats["sequence_sum"] = seq_sum;

    if (n > 6) {
        d.failure = "exact verification limited to n <= 6";
        return d;
    }

    EquilibriumOptions eopt;
    eopt.engine = opt.engine;
    auto rep = price_of_anarchy(spec, eopt);
    for (int i = 0; i < n; ++i)
        if (rep.dominant[i].kind != DominanceVerdict::Kind::strict ||
            rep.dominant[i].tech != "A") {
            d.failure = "A is not strictly dominant for firm " + std::to_string(i + 1);
            return d;
        }
    if (rep.pure_nash.size() != 1 || rep.pure_nash[0].profile.choices !=
                                         uniform_profile(spec, "A").choices) {
        d.failure = "all-A is not the unique pure equilibrium";
        return d;
    }
    d.exact_stats["sw_opt"] = rep.optimum.sw;
    d.exact_stats["sw_all_a"] = rep.pure_nash[0].sw;
    d.exact_stats["poa"] = rep.poa;
    if (rep.pure_nash[0].sw != n) {
        d.failure = "all-A welfare is not n";
        return d;
    }

    // A-player utility against k sequence-walking opponents is n/(n-k).
    for (int k = 0; k < n; ++k) {
        Profile p;
        p.choices.assign(n, "A");
        for (int i = n - k; i < n; ++i) p.choices[i] = "H" + std::to_string(i + 1);
        auto u = expected_utilities_exact(spec, p, opt.engine);
        Rat expect = rat_frac(n, n - k);
        d.exact_stats["u_a_vs_" + std::to_string(k)] = u.utilities[0];
        if (u.utilities[0] != expect) {
            d.failure = "mixed-profile utility identity failed at k = " + std::to_string(k);
            return d;
        }
    }
    d.verified = true;
    return d;
}

DeviationInstance gen_deviation_counterexample(int n, const DeviationOptions& opt) {
    if (n < 2 || n > 4) throw InputError("deviation instance needs n in [2, 4]");
    if (opt.phi <= 0 || opt.phi > 1) throw InputError("phi must be in (0, 1]");
    const int m = n + 3;

    DeviationInstance inst;
    auto& d = inst.descriptor;
    d.name = "deviation-n" + std::to_string(n);
    d.parameters = {{"n", std::to_string(n)}, {"m", std::to_string(m)}, {"phi", rat_str(opt.phi)}};
    d.notes = "decreasing candidate values with one noisy last firm; the earlier firms "
              "either consume the mid candidates (first profile) or the worst ones (second "
              "profile), making the conditional utility comparison negative";

    ValueVector x(m);
    for (int c = 0; c < m; ++c) x[c] = Rat(m - c);
    GameSpec spec;
    spec.n = n;
    spec.m = m;
    spec.values = ValueDistribution::explicit_support({{Rat(1), x}}, false);
    spec.advice.idiosyncratic.resize(n);
    for (int g = 0; g + 1 < n; ++g) {
        DeterministicSpec mid, worst;
        mid.fallback = top_then_ascending(m, g + 1);
        worst.fallback = top_then_ascending(m, m - g - 1);
        spec.advice.idiosyncratic[g].push_back(
            RankingTechnology{"D" + std::to_string(g + 1), mid});
        spec.advice.idiosyncratic[g].push_back(
            RankingTechnology{"E" + std::to_string(g + 1), worst});
    }
    spec.advice.idiosyncratic[n - 1].push_back(
        make_mallows("M", opt.phi, RankDistance::kendall_tau()));
    spec.validate();
    d.spec = spec;

    inst.firm = n - 1;
    inst.firm_slot = n - 1;
    inst.s.choices.resize(n);
    inst.s_star.choices.resize(n);
    for (int g = 0; g + 1 < n; ++g) {
        inst.s.choices[g] = "D" + std::to_string(g + 1);
        inst.s_star.choices[g] = "E" + std::to_string(g + 1);
    }
    inst.s.choices[n - 1] = "M";
    inst.s_star.choices[n - 1] = "M";

    EngineConfig cfg = opt.engine;
    cfg.caps.pmf_m_cap = std::max(cfg.caps.pmf_m_cap, m);
    inst.report = conditional_deviation_gap(d.spec, inst.s, inst.s_star, inst.firm, Rat(0),
                                            inst.firm_slot, cfg);
    d.exact_stats["event_mass"] = inst.report.event_mass;
    if (inst.report.vacuous) {
        d.failure = "conditioning event has zero mass";
        return inst;
    }
    d.exact_stats["gap"] = inst.report.gap;
    if (inst.report.gap >= 0) {
        d.failure = "conditional gap is not negative";
        return inst;
    }
    d.verified = true;
    return inst;
}

InstanceDescriptor gen_random_sc_game(int n, int m, uint64_t seed,
                                      const RandomGameOptions& opt) {
    if (n < 1 || n > 3 || m < n || m > 4)
        throw InputError("random consistent games support n <= 3 and m <= 4");
    if (opt.common_count < 1) throw InputError("need at least one shared technology");
    auto rng = make_stream(seed, 0);
    const std::vector<Rat> phis = {Rat(1, 4), Rat(1, 2), Rat(3, 4)};
    const std::vector<RankDistance> dists = {RankDistance::kendall_tau(),
                                             RankDistance::spearman_rho(),
                                             RankDistance::spearman_footrule()};
    auto draw_tech = [&](const std::string& id) {
        const Rat& phi = phis[uniform_int(rng, 0, static_cast<int>(phis.size()) - 1)];
        const RankDistance& dist = dists[uniform_int(rng, 0, static_cast<int>(dists.size()) - 1)];
        return make_mallows(id, phi, dist, TieBreak::uniform);
    };

    InstanceDescriptor d;
    d.name = "random-sc-" + std::to_string(seed);
    d.parameters = {{"n", std::to_string(n)}, {"m", std::to_string(m)},
                    {"seed", std::to_string(seed)}};
    d.notes = "position-noise technologies drawn at random and certified consistent, over "
              "iid candidate values";

    GameSpec spec;
    spec.n = n;
    spec.m = m;
    spec.values = ValueDistribution::iid(m, opt.value_marginal);
    for (int k = 0; k < opt.common_count; ++k)
        spec.advice.common.push_back(draw_tech("C" + std::to_string(k + 1)));
    spec.advice.idiosyncratic.resize(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < opt.idio_count; ++k)
            spec.advice.idiosyncratic[i].push_back(
                draw_tech("P" + std::to_string(i + 1) + std::to_string(k + 1)));
    spec.validate();
    d.spec = spec;

    auto reps = spec.values.orbit_support(opt.engine.caps.support_cap);
    Rat worst_delta(0);
    std::vector<const RankingTechnology*> all;
    for (const auto& t : spec.advice.common) all.push_back(&t);
    for (const auto& v : spec.advice.idiosyncratic)
        for (const auto& t : v) all.push_back(&t);
    for (const auto* t : all) {
        for (const auto& atom : reps) {
            auto sc = check_sc_exact(*t, atom.x, opt.engine.caps);
            if (sc.verdict != Verdict::consistent) {
                d.failure = "technology " + t->id + " failed the consistency certificate";
                d.exact_stats["delta_star"] = sc.delta_star;
                return d;
            }
            if (sc.delta_star > worst_delta) worst_delta = sc.delta_star;
        }
    }
    d.exact_stats["delta_star"] = worst_delta;
    d.verified = worst_delta == 0;
    if (!d.verified) d.failure = "nonzero noise level on a certified technology";
    return d;
}

namespace {

InstanceDescriptor audited_instance(std::string name, GameSpec spec, std::string notes,
                                    bool expect_violation) {
    spec.mechanism = Mechanism::unconstrained;
    spec.validate();
    InstanceDescriptor d;
    d.name = std::move(name);
    d.notes = std::move(notes);
    d.spec = std::move(spec);
    Profile p = uniform_profile(d.spec, d.spec.advice.common.front().id);
    auto report = ic_audit(d.spec, p);
    d.exact_stats["decision_points"] = Rat(static_cast<long>(report.decision_points));
    if (report.worst) d.exact_stats["worst_gap"] = report.worst->gap;
    d.verified = report.any_violation == expect_violation;
    if (!d.verified)
        d.failure = expect_violation ? "expected a profitable deviation, audit found none"
                                     : "audit found a profitable deviation";
    return d;
}

GameSpec symmetric_game(int n, int m, ValueDistribution values, RankingTechnology tech) {
    GameSpec spec;
    spec.n = n;
    spec.m = m;
    spec.values = std::move(values);
    spec.advice.common.push_back(std::move(tech));
    return spec;
}

} // namespace

std::vector<InstanceDescriptor> gen_obedience_suite() {
    const std::string notes =
        "candidate-symmetric information: every deviation ties or loses against obedient play";
    std::vector<InstanceDescriptor> out;
    out.push_back(audited_instance(
        "obedient-iid-2x2",
        symmetric_game(2, 2, ValueDistribution::iid(2, {{Rat(1, 2), Rat(0)}, {Rat(1, 2), Rat(1)}}),
                       make_mallows("A", Rat(1, 2), RankDistance::kendall_tau(),
                                    TieBreak::uniform)),
        notes, false));
    out.push_back(audited_instance(
        "obedient-multiset-2x3",
        symmetric_game(2, 3, ValueDistribution::shuffled_multiset({Rat(2), Rat(1), Rat(0)}),
                       make_mallows("A", Rat(1, 2), RankDistance::kendall_tau())),
        notes, false));
    out.push_back(audited_instance(
        "obedient-multiset-3x3",
        symmetric_game(3, 3, ValueDistribution::shuffled_multiset({Rat(3), Rat(2), Rat(1)}),
                       make_mallows("A", Rat(3, 4), RankDistance::spearman_footrule())),
        notes, false));
    out.push_back(audited_instance(
        "obedient-iid-2x3",
        symmetric_game(2, 3,
                       ValueDistribution::iid(
                           3, {{Rat(1, 3), Rat(0)}, {Rat(1, 3), Rat(1)}, {Rat(1, 3), Rat(2)}}),
                       make_mallows("A", Rat(1, 4), RankDistance::kendall_tau(),
                                    TieBreak::uniform)),
        notes, false));
    RankingTechnology shortlist{"A", ShortlistSpec{{Rat(1)}, 1}};
    out.push_back(audited_instance(
        "obedient-pair-2x3",
        symmetric_game(2, 3, ValueDistribution::random_pair(3, Rat(1), Rat(1, 2)),
                       std::move(shortlist)),
        notes, false));
    return out;
}

std::vector<InstanceDescriptor> gen_obedience_violations() {
    std::vector<InstanceDescriptor> out;
    ValueVector x = {Rat(3), Rat(2), Rat(1)};
    ValueDistribution fixed =
        ValueDistribution::explicit_support({ValueAtom{Rat(1), x}}, false);

    DeterministicSpec reversed;
    reversed.entries.emplace_back(x, Ranking({2, 1, 0}));
    out.push_back(audited_instance(
        "disobedient-reversed-2x3",
        symmetric_game(2, 3, fixed, RankingTechnology{"R", std::move(reversed)}),
        "the shared ranking inverts the known values, so taking the last listed candidate "
        "beats taking the first",
        true));

    out.push_back(audited_instance(
        "disobedient-uniform-2x3",
        symmetric_game(2, 3, fixed, make_mallows("U", Rat(1), RankDistance::kendall_tau())),
        "the shared ranking carries no information while the values are public, so grabbing "
        "the best remaining candidate by value beats following the sample",
        true));
    return out;
}

} // namespace rsdlab
