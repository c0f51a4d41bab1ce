#include "rsdlab/equilibrium.hpp"

#include "rsdlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rsdlab {

namespace {

// Every profile in the scan is obedient; strategies are technology choices.
struct Scan {
    std::vector<std::vector<std::string>> sets;
    std::vector<long long> stride; // firm 0 most significant
    long long total = 1;
    std::vector<Profile> profiles;
    std::vector<std::vector<Rat>> utilities;
    std::vector<Rat> sw;

    int digit(long long idx, int firm) const {
        return static_cast<int>(idx / stride[firm] % static_cast<long long>(sets[firm].size()));
    }
    long long with_digit(long long idx, int firm, int a) const {
        return idx + (a - digit(idx, firm)) * stride[firm];
    }
};

Scan build_scan(const GameSpec& spec, const EquilibriumOptions& opt) {
    spec.validate();
    Scan sc;
    sc.sets.resize(spec.n);
    sc.stride.assign(spec.n, 1);
    for (int i = 0; i < spec.n; ++i)
        for (const auto* t : spec.strategy_set(i)) sc.sets[i].push_back(t->id);
    for (int i = spec.n - 1; i >= 0; --i) {
        if (i + 1 < spec.n) sc.stride[i] = sc.stride[i + 1] * static_cast<long long>(sc.sets[i + 1].size());
        if (sc.stride[i] > opt.profile_cap) throw ResourceLimitError("profile scan exceeds the cap", sc.stride[i]);
    }
    sc.total = sc.stride[0] * static_cast<long long>(sc.sets[0].size());
    if (sc.total > opt.profile_cap)
        throw ResourceLimitError("profile scan exceeds the cap", sc.total);

    sc.profiles.reserve(sc.total);
    sc.utilities.reserve(sc.total);
    sc.sw.reserve(sc.total);
    for (long long idx = 0; idx < sc.total; ++idx) {
        Profile p;
        p.choices.resize(spec.n);
        for (int i = 0; i < spec.n; ++i) p.choices[i] = sc.sets[i][sc.digit(idx, i)];
        auto u = expected_utilities_exact(spec, p, opt.engine);
        sc.profiles.push_back(std::move(p));
        sc.sw.push_back(u.social_welfare);
        sc.utilities.push_back(std::move(u.utilities));
    }
    return sc;
}

std::vector<Rat> profile_gaps(const Scan& sc, long long idx, int n) {
    std::vector<Rat> gaps(n, Rat(0));
    for (int i = 0; i < n; ++i) {
        Rat best = sc.utilities[idx][i];
        for (int a = 0; a < static_cast<int>(sc.sets[i].size()); ++a) {
            const Rat& u = sc.utilities[sc.with_digit(idx, i, a)][i];
            if (u > best) best = u;
        }
        gaps[i] = best - sc.utilities[idx][i];
    }
    return gaps;
}

SocialOptimum optimum_from_scan(const Scan& sc) {
    SocialOptimum best;
    long long best_idx = 0;
    for (long long idx = 0; idx < sc.total; ++idx)
        if (idx == 0 || sc.sw[idx] > sc.sw[best_idx] ||
            (sc.sw[idx] == sc.sw[best_idx] &&
             sc.profiles[idx].choices < sc.profiles[best_idx].choices))
            best_idx = idx;
    best.profile = sc.profiles[best_idx];
    best.utilities = sc.utilities[best_idx];
    best.sw = sc.sw[best_idx];
    return best;
}

DominanceVerdict dominance_from_scan(const Scan& sc, int firm) {
    DominanceVerdict v;
    const auto& set = sc.sets[firm];
    const int k = static_cast<int>(set.size());
    if (k == 1) {
        v.kind = DominanceVerdict::Kind::weak;
        v.tech = set[0];
        return v;
    }
    for (int a = 0; a < k; ++a) {
        bool strict_ok = true, weak_ok = true;
        for (int b = 0; b < k && (strict_ok || weak_ok); ++b) {
            if (b == a) continue;
            bool all_ge = true, any_gt = false, all_gt = true;
            for (long long idx = 0; idx < sc.total; ++idx) {
                if (sc.digit(idx, firm) != a) continue;
                const Rat& ua = sc.utilities[idx][firm];
                const Rat& ub = sc.utilities[sc.with_digit(idx, firm, b)][firm];
                if (ua < ub) {
                    all_ge = false;
                    all_gt = false;
                    break;
                }
                if (ua > ub) any_gt = true;
                else all_gt = false;
            }
            strict_ok = strict_ok && all_gt;
            weak_ok = weak_ok && all_ge && any_gt;
        }
        if (strict_ok) {
            v.kind = DominanceVerdict::Kind::strict;
            v.tech = set[a];
            return v;
        }
        if (weak_ok && v.kind == DominanceVerdict::Kind::none) {
            v.kind = DominanceVerdict::Kind::weak;
            v.tech = set[a];
        }
    }
    return v;
}

EquilibriumReport analyze(const GameSpec& spec, const EquilibriumOptions& opt, bool full) {
    Scan sc = build_scan(spec, opt);
    EquilibriumReport rep;
    rep.epsilon = opt.epsilon;
    rep.profiles_scanned = sc.total;
    for (long long idx = 0; idx < sc.total; ++idx) {
        auto gaps = profile_gaps(sc, idx, spec.n);
        Rat mx(0);
        for (const auto& g : gaps)
            if (g > mx) mx = g;
        if (mx <= opt.epsilon) {
            NashEntry e;
            e.profile = sc.profiles[idx];
            e.utilities = sc.utilities[idx];
            e.gaps = std::move(gaps);
            e.sw = sc.sw[idx];
            e.max_gap = mx;
            rep.pure_nash.push_back(std::move(e));
        }
    }
    rep.optimum = optimum_from_scan(sc);
    if (!rep.pure_nash.empty()) {
        rep.poa_defined = true;
        rep.worst_ne_sw = rep.pure_nash[0].sw;
        for (const auto& e : rep.pure_nash)
            if (e.sw < rep.worst_ne_sw) rep.worst_ne_sw = e.sw;
        if (rep.worst_ne_sw > 0) rep.poa = rep.optimum.sw / rep.worst_ne_sw;
        else rep.poa_defined = false; // zero-welfare equilibrium, ratio undefined
    }
    if (!full) return rep;

    for (int i = 0; i < spec.n; ++i) rep.dominant.push_back(dominance_from_scan(sc, i));

    std::set<std::string> ids;
    bool enumerable = true;
    std::vector<RankingTechnology> space;
    for (const auto& set : sc.sets)
        for (const auto& id : set)
            if (ids.insert(id).second) {
                const auto* t = spec.tech_by_id(id);
                enumerable = enumerable && t->exactly_enumerable();
                space.push_back(*t);
            }
    if (enumerable && spec.values.kind() != ValueDistribution::Kind::iid) {
        try {
            // The noise level is constant on relabeling orbits when every
            // technology is value-addressed, so representatives suffice.
            bool orbit_ok = spec.values.permutation_invariant();
            for (const auto& t : space) orbit_ok = orbit_ok && t.value_equivariant();
            auto atoms = orbit_ok ? spec.values.orbit_support(opt.engine.caps.support_cap)
                                  : spec.values.support(opt.engine.caps.support_cap);
            std::set<std::vector<Rat>> seen;
            std::vector<ValueVector> xs;
            for (const auto& a : atoms)
                if (seen.insert(a.x).second) xs.push_back(a.x);
            if (xs.size() > 512)
                throw ResourceLimitError("value support too large for the noise sweep",
                                         static_cast<long long>(xs.size()));
            auto dr = measure_delta(space, xs, opt.engine.caps);
            rep.bound_checked = true;
            rep.delta_star = dr.delta_star;
            rep.bound_finite = dr.bound_finite;
            if (dr.bound_finite) {
                rep.ne_sw_floor = rep.optimum.sw / dr.poa_bound;
                for (const auto& e : rep.pure_nash)
                    if (e.sw < rep.ne_sw_floor) rep.bound_violated = true;
            }
        } catch (const ResourceLimitError&) {
        } catch (const UnsupportedError&) {
        }
    }
    return rep;
}

} // namespace

GapReport best_response_gap(const GameSpec& spec, const Profile& profile, int firm,
                            const EngineConfig& cfg) {
    if (firm < 0 || firm >= spec.n) throw InputError("firm index out of range");
    validate_profile(spec, profile);
    GapReport rep;
    rep.gap = 0;
    rep.best_tech = profile.choices[firm];
    Rat base = expected_utilities_exact(spec, profile, cfg).utilities[firm];
    for (const auto* t : spec.strategy_set(firm)) {
        if (t->id == profile.choices[firm]) continue;
        Profile dev = profile;
        dev.choices[firm] = t->id;
        Rat u = expected_utilities_exact(spec, dev, cfg).utilities[firm];
        if (u - base > rep.gap) {
            rep.gap = u - base;
            rep.best_tech = t->id;
        }
    }
    return rep;
}

std::string dominance_name(DominanceVerdict::Kind k) {
    switch (k) {
    case DominanceVerdict::Kind::strict: return "strict";
    case DominanceVerdict::Kind::weak: return "weak";
    case DominanceVerdict::Kind::none: return "none";
    }
    return "none";
}

DominanceVerdict dominant_strategy(const GameSpec& spec, int firm,
                                   const EquilibriumOptions& opt) {
    if (firm < 0 || firm >= spec.n) throw InputError("firm index out of range");
    Scan sc = build_scan(spec, opt);
    return dominance_from_scan(sc, firm);
}

EquilibriumReport find_pure_nash(const GameSpec& spec, const EquilibriumOptions& opt) {
    return analyze(spec, opt, false);
}

SocialOptimum social_optimum(const GameSpec& spec, const EquilibriumOptions& opt) {
    Scan sc = build_scan(spec, opt);
    return optimum_from_scan(sc);
}

EquilibriumReport price_of_anarchy(const GameSpec& spec, const EquilibriumOptions& opt) {
    return analyze(spec, opt, true);
}

SmoothnessReport smoothness_check(const GameSpec& spec, const EquilibriumOptions& opt) {
    Scan sc = build_scan(spec, opt);
    SmoothnessReport rep;
    for (long long s = 0; s < sc.total; ++s) {
        for (long long t = 0; t < sc.total; ++t) {
            Rat lhs(0);
            for (int i = 0; i < spec.n; ++i)
                lhs += sc.utilities[sc.with_digit(s, i, sc.digit(t, i))][i];
            Rat rhs = sc.sw[t] - sc.sw[s];
            ++rep.pairs_checked;
            if (lhs < rhs) {
                rep.pass = false;
                rep.s = sc.profiles[s];
                rep.t = sc.profiles[t];
                rep.lhs = lhs;
                rep.rhs = rhs;
                return rep;
            }
        }
    }
    return rep;
}

std::string ne_status_name(NeStatus s) {
    switch (s) {
    case NeStatus::yes: return "yes";
    case NeStatus::no: return "no";
    case NeStatus::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

McNeReport check_ne_mc(const GameSpec& spec, const Profile& profile, const McNeOptions& opt) {
    spec.validate();
    validate_profile(spec, profile);
    McNeReport rep;
    rep.confidence = opt.confidence;
    rep.samples = opt.samples;
    rep.epsilon = opt.epsilon;
    if (rep.epsilon < 0) {
        if (opt.sw_star_hint <= 0)
            throw InputError("default epsilon needs a positive optimum-welfare hint");
        rep.epsilon = 1e-3 * opt.sw_star_hint;
    }
    const double z = normal_quantile(opt.confidence);
    std::vector<Profile> devs;
    std::vector<std::pair<int, std::string>> labels;
    for (int i = 0; i < spec.n; ++i)
        for (const auto* t : spec.strategy_set(i)) {
            if (t->id == profile.choices[i]) continue;
            Profile dev = profile;
            dev.choices[i] = t->id;
            devs.push_back(std::move(dev));
            labels.emplace_back(i, t->id);
        }
    if (devs.empty()) {
        rep.status = NeStatus::yes;
        return rep;
    }
    std::vector<const Profile*> runs{&profile};
    for (const auto& d : devs) runs.push_back(&d);
    const int k = static_cast<int>(devs.size());
    auto metrics = mc_coupled_metrics(
        spec, runs, k,
        [&](const ValueVector& x, const std::vector<int>&,
            const std::vector<std::vector<int>>& hires, std::vector<double>& out) {
            for (int d = 0; d < k; ++d) {
                int firm = labels[d].first;
                out[d] = rat_double(x[hires[d + 1][firm]]) - rat_double(x[hires[0][firm]]);
            }
        },
        opt.samples, opt.seed, opt.engine);
    bool any_reject = false, any_straddle = false;
    for (int d = 0; d < k; ++d) {
        McDeviationGap g;
        g.firm = labels[d].first;
        g.tech = labels[d].second;
        g.mean = metrics.mean[d];
        g.se = metrics.se[d];
        g.lcb = g.mean - z * g.se;
        g.ucb = g.mean + z * g.se;
        rep.max_gap_ucb = std::max(rep.max_gap_ucb, g.ucb);
        if (g.lcb > rep.epsilon) any_reject = true;
        else if (g.ucb > rep.epsilon) any_straddle = true;
        rep.gaps.push_back(g);
    }
    rep.status = any_reject ? NeStatus::no
                            : (any_straddle ? NeStatus::inconclusive : NeStatus::yes);
    return rep;
}

McEquilibriumReport price_of_anarchy_mc(const GameSpec& spec, const McNeOptions& opt,
                                        long long profile_cap) {
    spec.validate();
    std::vector<std::vector<std::string>> sets(spec.n);
    long long total = 1;
    for (int i = 0; i < spec.n; ++i) {
        for (const auto* t : spec.strategy_set(i)) sets[i].push_back(t->id);
        total *= static_cast<long long>(sets[i].size());
        if (total > profile_cap) throw ResourceLimitError("profile scan exceeds the cap", total);
    }
    std::vector<long long> stride(spec.n, 1);
    for (int i = spec.n - 2; i >= 0; --i)
        stride[i] = stride[i + 1] * static_cast<long long>(sets[i + 1].size());

    McEquilibriumReport rep;
    rep.confidence = opt.confidence;
    rep.samples = opt.samples;
    rep.profiles_scanned = total;

    std::vector<Profile> profiles(total);
    std::vector<std::vector<double>> u(total), se(total);
    std::vector<double> sw(total), sw_se(total);
    for (long long idx = 0; idx < total; ++idx) {
        Profile p;
        p.choices.resize(spec.n);
        for (int i = 0; i < spec.n; ++i)
            p.choices[i] = sets[i][idx / stride[i] % static_cast<long long>(sets[i].size())];
        auto res = expected_utilities_mc(spec, p, opt.samples, opt.seed, opt.engine);
        profiles[idx] = std::move(p);
        u[idx] = res.utilities_mc;
        se[idx] = res.stderrs;
        sw[idx] = res.social_welfare_mc;
        sw_se[idx] = res.sw_stderr;
    }
    long long opt_idx = 0;
    for (long long idx = 1; idx < total; ++idx)
        if (sw[idx] > sw[opt_idx]) opt_idx = idx;
    rep.opt_profile = profiles[opt_idx];
    rep.sw_star = sw[opt_idx];
    rep.epsilon = opt.epsilon >= 0
                      ? opt.epsilon
                      : 1e-3 * (opt.sw_star_hint > 0 ? opt.sw_star_hint : rep.sw_star);

    const double z = normal_quantile(opt.confidence);
    double worst_yes = 0, cand_min = 0, cand_max = 0;
    bool have_yes = false, have_cand = false;
    for (long long idx = 0; idx < total; ++idx) {
        McProfileRecord rec;
        rec.profile = profiles[idx];
        rec.sw = sw[idx];
        rec.sw_se = sw_se[idx];
        bool any_reject = false, any_straddle = false;
        for (int i = 0; i < spec.n; ++i) {
            int di = static_cast<int>(idx / stride[i] % static_cast<long long>(sets[i].size()));
            for (int a = 0; a < static_cast<int>(sets[i].size()); ++a) {
                if (a == di) continue;
                long long nb = idx + (a - di) * stride[i];
                double mean = u[nb][i] - u[idx][i];
                double sdev = std::hypot(se[nb][i], se[idx][i]);
                double ucb = mean + z * sdev, lcb = mean - z * sdev;
                rec.max_gap_ucb = std::max(rec.max_gap_ucb, ucb);
                if (lcb > rep.epsilon) any_reject = true;
                else if (ucb > rep.epsilon) any_straddle = true;
            }
        }
        rec.status = any_reject ? NeStatus::no
                                : (any_straddle ? NeStatus::inconclusive : NeStatus::yes);
        if (rec.status != NeStatus::no) {
            if (!have_cand || sw[idx] < cand_min) cand_min = sw[idx];
            if (!have_cand || sw[idx] > cand_max) cand_max = sw[idx];
            have_cand = true;
            if (rec.status == NeStatus::yes) {
                if (!have_yes || sw[idx] < worst_yes) worst_yes = sw[idx];
                have_yes = true;
            }
        }
        rep.profiles.push_back(std::move(rec));
    }
    rep.has_candidates = have_cand;
    if (have_yes && worst_yes > 0) {
        rep.poa_defined = true;
        rep.poa_point = rep.sw_star / worst_yes;
    }
    if (have_cand && cand_min > 0) {
        rep.poa_lo = rep.sw_star / cand_max;
        rep.poa_hi = rep.sw_star / cand_min;
    }
    return rep;
}

} // namespace rsdlab
