#include "rsdlab/consistency.hpp"

#include "rsdlab/errors.hpp"
#include "rsdlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rsdlab {

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

Ranking swap_positions(const Ranking& r, int i, int j) {
    std::vector<int> order = r.order();
    std::swap(order[i], order[j]);
    return Ranking(std::move(order));
}

// Visits every tuple: ranking pi, positions i < j with x[pi(i)] >= x[pi(j)],
// against pi with those two candidates exchanged. Strict value pairs appear
// once, tied pairs once per direction.
void for_each_tuple(const ValueVector& x,
                    const std::function<void(const Ranking&, const Ranking&, int, int)>& fn) {
    const int m = static_cast<int>(x.size());
    for_each_ranking(m, [&](const Ranking& pi) {
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                if (x[pi.at(i)] < x[pi.at(j)]) continue;
                fn(pi, swap_positions(pi, i, j), i, j);
            }
    });
}

} // namespace

ConsistencyReport check_sc_exact(const RankingTechnology& t, const ValueVector& x,
                                 const TechCaps& caps) {
    auto pmf = exact_pmf(t, x, caps);
    if (!pmf.exact) throw UnsupportedError("exact consistency check needs an exact pmf");
    std::map<Ranking, Rat> p;
    for (const auto& c : pmf.cells) p[c.r] = c.p;
    auto prob = [&](const Ranking& r) {
        auto it = p.find(r);
        return it == p.end() ? Rat(0) : it->second;
    };

    ConsistencyReport rep;
    rep.delta_star = 0;
    bool have_best = false;
    Rat best_delta;
    auto inspect = [&](const Ranking& correct, const Ranking& incorrect, int i, int j) {
        ++rep.tuples_checked;
        Rat pc = prob(correct), pi = prob(incorrect);
        if (pi == 0) return; // vacuous constraint
        Rat delta = 1 - pc / pi;
        if (delta > 0) rep.verdict = Verdict::violated;
        if (!have_best || delta > best_delta) {
            have_best = true;
            best_delta = delta;
            ConsistencyTuple w;
            w.i = i;
            w.j = j;
            w.k = correct.at(i);
            w.l = correct.at(j);
            w.correct = correct;
            w.incorrect = incorrect;
            w.p_correct = pc;
            w.p_incorrect = pi;
            rep.witness = w;
        }
    };
    const int m = static_cast<int>(x.size());
    if (m <= 5) {
        for_each_tuple(x, inspect);
    } else {
        // Only tuples whose incorrect side has positive probability constrain
        // anything, so sweeping support cells as the incorrect ranking covers
        // every binding constraint without touching all m! rankings.
        for (const auto& cell : pmf.cells) {
            const Ranking& sigma = cell.r;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) {
                    if (x[sigma.at(i)] > x[sigma.at(j)]) continue;
                    inspect(swap_positions(sigma, i, j), sigma, i, j);
                }
        }
    }
    if (have_best && best_delta > 0) rep.delta_star = best_delta;
    return rep;
}

namespace {

// P(Bin(n, 1/2) <= k), exact up to double rounding, via incremental log terms.
double binomial_half_tail(long long n, long long k) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    double log_term = static_cast<double>(n) * std::log(0.5);
    double log_p = log_term; // i = 0
    for (long long i = 0; i < k; ++i) {
        log_term += std::log(static_cast<double>(n - i)) - std::log(static_cast<double>(i + 1));
        double hi = std::max(log_p, log_term), lo = std::min(log_p, log_term);
        log_p = hi + std::log1p(std::exp(lo - hi));
    }
    return std::min(1.0, std::exp(log_p));
}

double wilson_lower(double phat, long long n, double z) {
    double zz = z * z / n;
    double center = phat + zz / 2;
    double margin = z * std::sqrt(phat * (1 - phat) / n + zz / (4 * n));
    return std::max(0.0, (center - margin) / (1 + zz));
}

} // namespace

double normal_quantile(double p) {
    // bisection on the standard normal cdf; p in (0, 1)
    double lo = -12, hi = 12;
    for (int it = 0; it < 200; ++it) {
        double mid = (lo + hi) / 2;
        double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
        (cdf < p ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

ConsistencyReport check_sc_statistical(const RankingTechnology& t, const ValueVector& x,
                                       long long samples, double confidence,
                                       std::mt19937_64& rng, long long min_cell,
                                       const TechCaps& caps) {
    const int m = static_cast<int>(x.size());
    if (m > caps.est_m_cap)
        throw ResourceLimitError("statistical consistency check beyond the cap", m);
    if (samples < 1) throw InputError("statistical check needs samples");
    if (!(confidence > 0 && confidence < 1)) throw InputError("confidence must be in (0,1)");

    std::map<Ranking, long long> counts;
    for (long long s = 0; s < samples; ++s) counts[sample_ranking(t, x, rng, caps)]++;
    auto count = [&](const Ranking& r) {
        auto it = counts.find(r);
        return it == counts.end() ? 0ll : it->second;
    };

    struct Cell {
        Ranking correct, incorrect;
        int i, j;
        long long nc, ni;
    };
    std::vector<Cell> tested;
    ConsistencyReport rep;
    rep.statistical = true;
    rep.confidence = confidence;
    rep.samples = samples;
    for_each_tuple(x, [&](const Ranking& correct, const Ranking& incorrect, int i, int j) {
        ++rep.tuples_checked;
        long long nc = count(correct), ni = count(incorrect);
        if (nc + ni < min_cell) {
            ++rep.tuples_inconclusive;
            return;
        }
        tested.push_back(Cell{correct, incorrect, i, j, nc, ni});
    });
    rep.tuples_tested = static_cast<long long>(tested.size());

    const double alpha = 1 - confidence;
    const double level = tested.empty() ? alpha : alpha / static_cast<double>(tested.size());
    const double z = normal_quantile(1 - level);
    rep.verdict = rep.tuples_inconclusive > 0 ? Verdict::inconclusive : Verdict::consistent;
    double worst_delta = 0, worst_ucb = 0;
    for (const auto& c : tested) {
        long long n = c.nc + c.ni;
        double pval = binomial_half_tail(n, c.nc);
        rep.worst_p_value = std::min(rep.worst_p_value, pval);
        double qhat = static_cast<double>(c.nc) / static_cast<double>(n);
        double q_lcb = wilson_lower(qhat, n, z);
        double delta_pt = c.ni > 0 ? std::max(0.0, 1 - static_cast<double>(c.nc) / c.ni) : 0.0;
        double delta_ucb = q_lcb >= 1.0 ? 0.0
                           : q_lcb <= 0 ? 1.0
                                        : std::max(0.0, 1 - q_lcb / (1 - q_lcb));
        bool reject = pval <= level;
        if (reject) rep.verdict = Verdict::violated;
        if (delta_pt > worst_delta || (reject && !rep.witness)) {
            worst_delta = std::max(worst_delta, delta_pt);
            ConsistencyTuple w;
            w.i = c.i;
            w.j = c.j;
            w.k = c.correct.at(c.i);
            w.l = c.correct.at(c.j);
            w.correct = c.correct;
            w.incorrect = c.incorrect;
            w.p_correct = rat_frac(static_cast<long>(c.nc), static_cast<long>(samples));
            w.p_incorrect = rat_frac(static_cast<long>(c.ni), static_cast<long>(samples));
            rep.witness = w;
        }
        worst_ucb = std::max(worst_ucb, delta_ucb);
    }
    rep.delta_star_est = worst_delta;
    rep.delta_star_ucb = worst_ucb;
    return rep;
}

Rat delta_poa_bound(const Rat& delta_star) {
    if (delta_star >= 1) throw InputError("delta* must be below 1 for a finite bound");
    Rat one_minus = 1 - delta_star;
    return 1 + 1 / (one_minus * one_minus);
}

DeltaReport measure_delta(const std::vector<RankingTechnology>& space,
                          const std::vector<ValueVector>& xs, const TechCaps& caps) {
    if (space.empty() || xs.empty()) throw InputError("measure_delta needs technologies and values");
    DeltaReport rep;
    rep.delta_star = 0;
    bool have = false;
    for (const auto& t : space)
        for (const auto& x : xs) {
            auto r = check_sc_exact(t, x, caps);
            rep.tuples_checked += r.tuples_checked;
            if (!have || r.delta_star > rep.delta_star) {
                have = true;
                rep.delta_star = r.delta_star;
                rep.witness_tech = t.id;
                rep.witness_x = x;
                rep.witness = r.witness;
            }
        }
    rep.bound_finite = rep.delta_star < 1;
    if (rep.bound_finite) rep.poa_bound = delta_poa_bound(rep.delta_star);
    return rep;
}

JointDensity iid_noise_density(const NoiseSpec& noise, int m) {
    if (!noise.continuous()) throw InputError("spot check targets continuous densities");
    JointDensity d;
    d.m = m;
    switch (noise.family) {
    case NoiseSpec::Family::gaussian: {
        double s = noise.param;
        d.spread = s / 2;
        d.pdf = [s, m](const std::vector<double>& z) {
            double lp = 0;
            for (double v : z) lp += -v * v / (2 * s * s);
            return std::exp(lp) / std::pow(s * std::sqrt(2 * M_PI), m);
        };
        d.draw_coord = [s](std::mt19937_64& rng) {
            return std::normal_distribution<double>(0.0, s)(rng);
        };
        break;
    }
    case NoiseSpec::Family::laplacian: {
        double b = noise.param;
        d.spread = b / 2;
        d.pdf = [b, m](const std::vector<double>& z) {
            double lp = 0;
            for (double v : z) lp += -std::abs(v) / b;
            return std::exp(lp) / std::pow(2 * b, m);
        };
        d.draw_coord = [b](std::mt19937_64& rng) {
            double u = std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
            double s = u < 0 ? -1.0 : 1.0;
            return -b * s * std::log(1.0 - 2.0 * std::abs(u));
        };
        break;
    }
    case NoiseSpec::Family::uniform: {
        double w = noise.param;
        d.spread = w / 4;
        d.pdf = [w, m](const std::vector<double>& z) {
            for (double v : z)
                if (v < 0 || v > w) return 0.0;
            return std::pow(1 / w, m);
        };
        d.draw_coord = [w](std::mt19937_64& rng) {
            return std::uniform_real_distribution<double>(0.0, w)(rng);
        };
        break;
    }
    case NoiseSpec::Family::discrete_iid:
        throw InputError("spot check targets continuous densities");
    }
    return d;
}

JointDensity box_spreading_density(int m, double half_width) {
    JointDensity d;
    d.m = m;
    d.spread = half_width / 4;
    double w = half_width;
    d.pdf = [w](const std::vector<double>& z) {
        double ss = 0;
        for (double v : z) {
            if (std::abs(v) > w) return 0.0;
            ss += v * v;
        }
        return std::exp(ss); // unnormalized; comparisons only
    };
    d.draw_coord = [w](std::mt19937_64& rng) {
        return std::uniform_real_distribution<double>(-w, w)(rng);
    };
    return d;
}

SchurCheckResult schur_spot_check(const JointDensity& density, long long trials,
                                  std::mt19937_64& rng, double tol) {
    if (density.m < 2) throw InputError("spot check needs at least two coordinates");
    SchurCheckResult res;
    std::vector<double> y(density.m), x;
    for (long long t = 0; t < trials; ++t) {
        ++res.trials;
        for (auto& v : y) v = density.draw_coord(rng);
        int a = uniform_int(rng, 0, density.m - 1);
        int b = uniform_int(rng, 0, density.m - 2);
        if (b >= a) ++b;
        if (y[a] < y[b]) std::swap(a, b);
        double c = std::uniform_real_distribution<double>(0.0, density.spread)(rng);
        x = y;
        x[a] += c;
        x[b] -= c;
        double fx = density.pdf(x), fy = density.pdf(y);
        if (fx > fy + tol) {
            res.pass = false;
            res.x = x;
            res.y = y;
            res.fx = fx;
            res.fy = fy;
            return res;
        }
    }
    return res;
}

} // namespace rsdlab
