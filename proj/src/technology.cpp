#include "rsdlab/technology.hpp"

#include "rsdlab/errors.hpp"
#include "rsdlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace rsdlab {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

bool value_listed(const std::vector<Rat>& values, const Rat& v) {
    return std::find(values.begin(), values.end(), v) != values.end();
}

} // namespace

bool RankingTechnology::stochastic() const {
    return std::visit(
        overloaded{
            [](const MallowsSpec&) { return true; },
            [](const NoiseTechSpec&) { return true; },
            [](const TableSpec& t) {
                for (const auto& e : t.entries)
                    if (e.pmf.size() > 1) return true;
                return false;
            },
            [](const DeterministicSpec&) { return false; },
            [](const ShortlistSpec&) { return true; },
            [](const TieredSpec&) { return true; },
        },
        spec);
}

bool RankingTechnology::value_equivariant() const {
    return std::visit(overloaded{
                          [](const MallowsSpec&) { return true; },
                          [](const NoiseTechSpec&) { return true; },
                          [](const TableSpec&) { return false; },
                          [](const DeterministicSpec&) { return false; },
                          [](const ShortlistSpec&) { return true; },
                          [](const TieredSpec&) { return true; },
                      },
                      spec);
}

bool RankingTechnology::exactly_enumerable() const {
    if (const auto* n = std::get_if<NoiseTechSpec>(&spec)) return !n->noise.continuous();
    return true;
}

std::string RankingTechnology::kind_name() const {
    return std::visit(overloaded{
                          [](const MallowsSpec&) { return std::string("mallows"); },
                          [](const NoiseTechSpec&) { return std::string("additive_noise"); },
                          [](const TableSpec&) { return std::string("table"); },
                          [](const DeterministicSpec&) { return std::string("deterministic"); },
                          [](const ShortlistSpec&) { return std::string("shortlist"); },
                          [](const TieredSpec&) { return std::string("tiered"); },
                      },
                      spec);
}

void RankingTechnology::validate() const {
    if (id.empty()) throw InputError("technology id must not be empty");
    std::visit(
        overloaded{
            [](const MallowsSpec& ms) {
                if (ms.phi <= 0 || ms.phi > 1)
                    throw InputError("mallows dispersion must be in (0, 1]");
                if (!ms.dist.integer_valued())
                    throw UnsupportedError(
                        "mallows over a non-integer distance has no rational pmf");
            },
            [](const NoiseTechSpec& ns) {
                if (ns.noise.continuous()) {
                    if (!(ns.noise.param > 0)) throw InputError("noise scale must be positive");
                } else {
                    if (ns.noise.atoms.empty()) throw InputError("discrete noise needs atoms");
                    Rat total(0);
                    for (const auto& [p, v] : ns.noise.atoms) {
                        if (p <= 0) throw InputError("noise atom probabilities must be positive");
                        total += p;
                    }
                    if (total != 1) throw InputError("noise atom probabilities must sum to 1");
                }
            },
            [](const TableSpec& ts) {
                if (ts.entries.empty()) throw InputError("table technology needs entries");
                std::set<std::string> keys;
                for (const auto& e : ts.entries) {
                    if (!keys.insert(vec_key(e.x)).second)
                        throw InputError("duplicate value vector in table technology");
                    if (e.pmf.empty()) throw InputError("empty pmf in table technology");
                    Rat total(0);
                    std::set<std::vector<int>> seen;
                    for (const auto& [r, p] : e.pmf) {
                        if (p <= 0) throw InputError("table pmf probabilities must be positive");
                        if (r.m() != static_cast<int>(e.x.size()))
                            throw InputError("table ranking size mismatch");
                        if (!seen.insert(r.order()).second)
                            throw InputError("duplicate ranking in table pmf");
                        total += p;
                    }
                    if (total != 1) throw InputError("table pmf must sum to 1");
                }
            },
            [](const DeterministicSpec& ds) {
                if (ds.entries.empty() && !ds.fallback)
                    throw InputError("deterministic technology needs entries or a fallback");
                std::set<std::string> keys;
                for (const auto& [x, r] : ds.entries) {
                    if (!keys.insert(vec_key(x)).second)
                        throw InputError("duplicate value vector in deterministic technology");
                    if (r.m() != static_cast<int>(x.size()))
                        throw InputError("deterministic ranking size mismatch");
                }
            },
            [](const ShortlistSpec& ss) {
                if (ss.window < 1) throw InputError("shortlist window must be at least 1");
                if (ss.values.empty()) throw InputError("shortlist needs designated values");
            },
            [](const TieredSpec& ts) {
                if (ts.tiers.empty()) throw InputError("tiered technology needs tiers");
                for (const auto& t : ts.tiers)
                    if (t.values.empty()) throw InputError("tier needs designated values");
            },
        },
        spec);
}

RankingTechnology make_mallows(std::string id, Rat phi, RankDistance dist, TieBreak tie_break) {
    RankingTechnology t;
    t.id = std::move(id);
    t.spec = MallowsSpec{std::move(phi), std::move(dist), tie_break};
    t.validate();
    return t;
}

Ranking ground_truth_ranking(const ValueVector& x, TieBreak mode, std::mt19937_64* rng) {
    const int m = static_cast<int>(x.size());
    std::vector<int> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return x[a] > x[b]; });
    if (mode == TieBreak::uniform) {
        if (rng == nullptr) throw InputError("uniform tie-break needs an rng");
        int lo = 0;
        while (lo < m) {
            int hi = lo + 1;
            while (hi < m && x[idx[hi]] == x[idx[lo]]) ++hi;
            for (int i = hi - 1; i > lo; --i) std::swap(idx[i], idx[lo + uniform_int(*rng, 0, i - lo)]);
            lo = hi;
        }
    }
    return Ranking(std::move(idx));
}

std::vector<Ranking> ground_truth_orders(const ValueVector& x, long long cap) {
    Ranking base = ground_truth_ranking(x);
    const int m = base.m();
    // tie blocks over the sorted order
    std::vector<std::pair<int, int>> blocks;
    int lo = 0;
    while (lo < m) {
        int hi = lo + 1;
        while (hi < m && x[base.at(hi)] == x[base.at(lo)]) ++hi;
        blocks.emplace_back(lo, hi);
        lo = hi;
    }
    long long count = 1;
    for (auto [b, e] : blocks) {
        for (int i = 2; i <= e - b; ++i) {
            count *= i;
            if (count > cap) throw ResourceLimitError("too many tie orders", count);
        }
    }
    std::vector<Ranking> out;
    out.reserve(count);
    std::vector<int> order = base.order();
    std::function<void(size_t)> rec = [&](size_t bi) {
        if (bi == blocks.size()) {
            out.emplace_back(order);
            return;
        }
        auto [b, e] = blocks[bi];
        std::vector<int> block(order.begin() + b, order.begin() + e);
        std::sort(block.begin(), block.end());
        do {
            std::copy(block.begin(), block.end(), order.begin() + b);
            rec(bi + 1);
        } while (std::next_permutation(block.begin(), block.end()));
    };
    rec(0);
    return out;
}

namespace {

unsigned long rat_to_exponent(const Rat& d) {
    if (d.get_den() != 1 || d < 0)
        throw UnsupportedError("mallows exponent must be a non-negative integer");
    if (!d.get_num().fits_ulong_p()) throw ResourceLimitError("mallows exponent too large", 0);
    return d.get_num().get_ui();
}

std::vector<PmfCell> mallows_cells(const MallowsSpec& ms, const ValueVector& x,
                                   const TechCaps& caps) {
    const int m = static_cast<int>(x.size());
    if (m > caps.pmf_m_cap)
        throw ResourceLimitError("mallows pmf enumeration beyond the cap", m);
    std::vector<Ranking> centers;
    if (ms.tie_break == TieBreak::index)
        centers.push_back(ground_truth_ranking(x));
    else
        centers = ground_truth_orders(x, caps.support_cap);
    std::vector<PmfCell> cells;
    Rat total(0);
    for_each_ranking(m, [&](const Ranking& pi) {
        Rat w(0);
        for (const auto& c : centers) w += rat_pow(ms.phi, rat_to_exponent(distance(ms.dist, pi, c)));
        total += w;
        cells.push_back(PmfCell{pi, std::move(w)});
    });
    for (auto& c : cells) c.p /= total;
    return cells;
}

// Sorts candidates by exact scores, descending; equal scores either keep
// ascending candidate order or fan out into every order of the tie block.
void rankings_for_scores(const std::vector<Rat>& scores, TieBreak tie_break, const Rat& p,
                         std::map<Ranking, Rat>& acc, long long cap) {
    if (tie_break == TieBreak::index) {
        acc[ground_truth_ranking(scores)] += p;
        return;
    }
    auto orders = ground_truth_orders(scores, cap);
    Rat share = p / Rat(static_cast<unsigned long>(orders.size()));
    for (auto& r : orders) acc[r] += share;
}

std::vector<PmfCell> discrete_noise_cells(const NoiseTechSpec& ns, const ValueVector& x,
                                          const TechCaps& caps) {
    const int m = static_cast<int>(x.size());
    if (m > caps.pmf_m_cap)
        throw ResourceLimitError("discrete noise enumeration beyond the cap", m);
    const auto& atoms = ns.noise.atoms;
    const int k = static_cast<int>(atoms.size());
    long long combos = 1;
    for (int i = 0; i < m; ++i) {
        combos *= k;
        if (combos > caps.support_cap)
            throw ResourceLimitError("discrete noise combinations beyond the cap", combos);
    }
    std::map<Ranking, Rat> acc;
    std::vector<int> idx(m, 0);
    for (;;) {
        Rat p(1);
        std::vector<Rat> scores(m);
        for (int c = 0; c < m; ++c) {
            p *= atoms[idx[c]].first;
            scores[c] = x[c] + atoms[idx[c]].second;
        }
        rankings_for_scores(scores, ns.tie_break, p, acc, caps.support_cap);
        int c = m - 1;
        while (c >= 0 && ++idx[c] == k) idx[c--] = 0;
        if (c < 0) break;
    }
    std::vector<PmfCell> cells;
    cells.reserve(acc.size());
    for (auto& [r, p] : acc) cells.push_back(PmfCell{r, p});
    return cells;
}

const TableEntry* table_entry_for(const TableSpec& ts, const ValueVector& x) {
    auto key = vec_key(x);
    for (const auto& e : ts.entries)
        if (vec_key(e.x) == key) return &e;
    return nullptr;
}

std::vector<PmfCell> table_cells(const TableSpec& ts, const ValueVector& x) {
    const auto* e = table_entry_for(ts, x);
    if (e == nullptr) throw InputError("table technology has no entry for the given values");
    std::vector<PmfCell> cells;
    cells.reserve(e->pmf.size());
    for (const auto& [r, p] : e->pmf) cells.push_back(PmfCell{r, p});
    return cells;
}

const Ranking* deterministic_ranking_for(const DeterministicSpec& ds, const ValueVector& x) {
    auto key = vec_key(x);
    for (const auto& [ex, r] : ds.entries)
        if (vec_key(ex) == key) return &r;
    if (ds.fallback) return &*ds.fallback;
    return nullptr;
}

std::vector<PmfCell> deterministic_cells(const DeterministicSpec& ds, const ValueVector& x) {
    const auto* r = deterministic_ranking_for(ds, x);
    if (r == nullptr) throw InputError("deterministic technology has no entry for the given values");
    return {PmfCell{*r, Rat(1)}};
}

struct ShortlistSplit {
    std::vector<int> listed, rest;
};

ShortlistSplit shortlist_split(const ShortlistSpec& ss, const ValueVector& x) {
    const int m = static_cast<int>(x.size());
    if (ss.window > m) throw InputError("shortlist window larger than the candidate count");
    ShortlistSplit sp;
    for (int c = 0; c < m; ++c)
        (value_listed(ss.values, x[c]) ? sp.listed : sp.rest).push_back(c);
    if (static_cast<int>(sp.listed.size()) > ss.window)
        throw InputError("more designated candidates than shortlist window slots");
    return sp;
}

std::vector<PmfCell> shortlist_cells(const ShortlistSpec& ss, const ValueVector& x,
                                     const TechCaps& caps) {
    const int m = static_cast<int>(x.size());
    auto sp = shortlist_split(ss, x);
    const int s = static_cast<int>(sp.listed.size());
    long long count = 1;
    for (int i = 0; i < s; ++i) count *= ss.window - i;
    for (int i = 2; i <= m - s; ++i) {
        count *= i;
        if (count > caps.support_cap)
            throw ResourceLimitError("shortlist support beyond the cap", count);
    }
    if (count > caps.support_cap) throw ResourceLimitError("shortlist support beyond the cap", count);
    std::vector<PmfCell> cells;
    cells.reserve(count);
    Rat p(1, 1);
    p /= Rat(static_cast<long>(count));
    std::vector<int> slot(s, -1);
    std::vector<char> used(ss.window, 0);
    std::function<void(int)> place = [&](int i) {
        if (i == s) {
            std::vector<int> rest = sp.rest;
            std::sort(rest.begin(), rest.end());
            do {
                std::vector<int> order(m, -1);
                for (int j = 0; j < s; ++j) order[slot[j]] = sp.listed[j];
                size_t ri = 0;
                for (int pos = 0; pos < m; ++pos)
                    if (order[pos] < 0) order[pos] = rest[ri++];
                cells.push_back(PmfCell{Ranking(std::move(order)), p});
            } while (std::next_permutation(rest.begin(), rest.end()));
            return;
        }
        for (int w = 0; w < ss.window; ++w) {
            if (used[w]) continue;
            used[w] = 1;
            slot[i] = w;
            place(i + 1);
            used[w] = 0;
        }
    };
    place(0);
    return cells;
}

struct TierAssignment {
    std::vector<std::vector<int>> members; // per tier, plus implicit last
    std::vector<TieredSpec::Order> orders;
};

TierAssignment tier_assignment(const TieredSpec& ts, const ValueVector& x) {
    const int m = static_cast<int>(x.size());
    TierAssignment a;
    a.members.resize(ts.tiers.size() + 1);
    for (const auto& t : ts.tiers) a.orders.push_back(t.order);
    a.orders.push_back(TieredSpec::Order::uniform);
    for (int c = 0; c < m; ++c) {
        size_t ti = ts.tiers.size();
        for (size_t i = 0; i < ts.tiers.size(); ++i)
            if (value_listed(ts.tiers[i].values, x[c])) {
                ti = i;
                break;
            }
        a.members[ti].push_back(c);
    }
    return a;
}

// Orders a tier's members: shuffled, or sorted by value with tied candidates
// fanned out uniformly. Returns each arrangement with equal weight.
std::vector<std::vector<int>> tier_arrangements(const std::vector<int>& members,
                                                TieredSpec::Order order, const ValueVector& x,
                                                long long cap) {
    if (members.empty()) return {{}};
    if (order == TieredSpec::Order::uniform) {
        std::vector<int> sorted = members;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::vector<int>> out;
        long long count = 0;
        do {
            if (++count > cap) throw ResourceLimitError("tier arrangements beyond the cap", count);
            out.push_back(sorted);
        } while (std::next_permutation(sorted.begin(), sorted.end()));
        return out;
    }
    ValueVector scores(x.size(), Rat(0));
    for (int c : members) scores[c] = order == TieredSpec::Order::asc ? -x[c] : x[c];
    // reuse the descending sorter on signed scores, restricted to members
    std::vector<int> sorted = members;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });
    std::vector<std::pair<int, int>> blocks;
    int lo = 0;
    const int k = static_cast<int>(sorted.size());
    while (lo < k) {
        int hi = lo + 1;
        while (hi < k && scores[sorted[hi]] == scores[sorted[lo]]) ++hi;
        blocks.emplace_back(lo, hi);
        lo = hi;
    }
    std::vector<std::vector<int>> out;
    std::vector<int> cur = sorted;
    std::function<void(size_t)> rec = [&](size_t bi) {
        if (bi == blocks.size()) {
            out.push_back(cur);
            if (static_cast<long long>(out.size()) > cap)
                throw ResourceLimitError("tier arrangements beyond the cap",
                                         static_cast<long long>(out.size()));
            return;
        }
        auto [b, e] = blocks[bi];
        std::vector<int> block(sorted.begin() + b, sorted.begin() + e);
        std::sort(block.begin(), block.end());
        do {
            std::copy(block.begin(), block.end(), cur.begin() + b);
            rec(bi + 1);
        } while (std::next_permutation(block.begin(), block.end()));
    };
    rec(0);
    return out;
}

std::vector<PmfCell> tiered_cells(const TieredSpec& ts, const ValueVector& x,
                                  const TechCaps& caps) {
    auto assign = tier_assignment(ts, x);
    std::vector<std::vector<std::vector<int>>> per_tier;
    long long count = 1;
    for (size_t i = 0; i < assign.members.size(); ++i) {
        per_tier.push_back(tier_arrangements(assign.members[i], assign.orders[i], x,
                                             caps.support_cap));
        count *= static_cast<long long>(per_tier.back().size());
        if (count > caps.support_cap)
            throw ResourceLimitError("tiered support beyond the cap", count);
    }
    std::vector<PmfCell> cells;
    cells.reserve(count);
    Rat p(1, 1);
    p /= Rat(static_cast<long>(count));
    std::vector<size_t> pick(per_tier.size(), 0);
    for (;;) {
        std::vector<int> order;
        for (size_t i = 0; i < per_tier.size(); ++i)
            order.insert(order.end(), per_tier[i][pick[i]].begin(), per_tier[i][pick[i]].end());
        cells.push_back(PmfCell{Ranking(std::move(order)), p});
        int i = static_cast<int>(per_tier.size()) - 1;
        while (i >= 0 && ++pick[i] == per_tier[i].size()) pick[i--] = 0;
        if (i < 0) break;
    }
    return cells;
}

std::vector<PmfCell> exact_support_cells(const RankingTechnology& t, const ValueVector& x,
                                         const TechCaps& caps) {
    return std::visit(
        overloaded{
            [&](const MallowsSpec& ms) { return mallows_cells(ms, x, caps); },
            [&](const NoiseTechSpec& ns) {
                if (ns.noise.continuous())
                    throw UnsupportedError("continuous noise has no exact pmf");
                return discrete_noise_cells(ns, x, caps);
            },
            [&](const TableSpec& ts) { return table_cells(ts, x); },
            [&](const DeterministicSpec& ds) { return deterministic_cells(ds, x); },
            [&](const ShortlistSpec& ss) { return shortlist_cells(ss, x, caps); },
            [&](const TieredSpec& ts) { return tiered_cells(ts, x, caps); },
        },
        t.spec);
}

double draw_noise(const NoiseSpec& ns, std::mt19937_64& rng) {
    switch (ns.family) {
    case NoiseSpec::Family::gaussian:
        return std::normal_distribution<double>(0.0, ns.param)(rng);
    case NoiseSpec::Family::laplacian: {
        double u = std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
        double s = u < 0 ? -1.0 : 1.0;
        return -ns.param * s * std::log(1.0 - 2.0 * std::abs(u));
    }
    case NoiseSpec::Family::uniform:
        return std::uniform_real_distribution<double>(0.0, ns.param)(rng);
    case NoiseSpec::Family::discrete_iid:
        throw InputError("discrete noise drawn through the continuous path");
    }
    throw InputError("bad noise family");
}

Ranking sample_mallows_kt(const Rat& phi, const Ranking& center, std::mt19937_64& rng) {
    const int m = center.m();
    const double f = rat_double(phi);
    std::vector<int> order;
    order.reserve(m);
    std::vector<double> w;
    for (int j = 0; j < m; ++j) {
        // insert the (j+1)-th most preferred item; position i among j+1 slots
        // introduces j-i inversions
        w.assign(j + 1, 0.0);
        double acc = 0;
        for (int i = 0; i <= j; ++i) acc += w[i] = i == 0 ? std::pow(f, j) : w[i - 1] / f;
        double u = std::uniform_real_distribution<double>(0.0, acc)(rng);
        int pos = j;
        double run = 0;
        for (int i = 0; i <= j; ++i) {
            run += w[i];
            if (u <= run) {
                pos = i;
                break;
            }
        }
        order.insert(order.begin() + pos, center.at(j));
    }
    return Ranking(std::move(order));
}

Ranking sample_from_cells(const std::vector<PmfCell>& cells, std::mt19937_64& rng) {
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0;
    for (const auto& c : cells) {
        acc += rat_double(c.p);
        if (u <= acc) return c.r;
    }
    return cells.back().r;
}

Ranking sample_scores_desc(const std::vector<double>& scores, TieBreak tie_break,
                           std::mt19937_64& rng) {
    const int m = static_cast<int>(scores.size());
    std::vector<int> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    if (tie_break == TieBreak::uniform)
        for (int i = m - 1; i > 0; --i) std::swap(idx[i], idx[uniform_int(rng, 0, i)]);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return scores[a] > scores[b]; });
    return Ranking(std::move(idx));
}

} // namespace

RankingPmf exact_pmf(const RankingTechnology& t, const ValueVector& x, const TechCaps& caps,
                     uint64_t est_seed) {
    if (t.exactly_enumerable()) {
        RankingPmf pmf;
        pmf.exact = true;
        pmf.cells = exact_support_cells(t, x, caps);
        return pmf;
    }
    const int m = static_cast<int>(x.size());
    if (m > caps.est_m_cap)
        throw ResourceLimitError("estimated pmf enumeration beyond the cap", m);
    RankingPmf pmf;
    pmf.exact = false;
    pmf.samples = caps.est_samples;
    std::map<Ranking, long long> counts;
    auto rng = make_stream(est_seed, 0);
    for (long long i = 0; i < caps.est_samples; ++i) counts[sample_ranking(t, x, rng, caps)]++;
    const double n = static_cast<double>(caps.est_samples);
    for (auto& [r, c] : counts) {
        double p = c / n;
        pmf.est_cells.push_back(EstCell{r, p, std::sqrt(p * (1 - p) / n)});
    }
    return pmf;
}

Ranking sample_ranking(const RankingTechnology& t, const ValueVector& x, std::mt19937_64& rng,
                       const TechCaps& caps) {
    const int m = static_cast<int>(x.size());
    return std::visit(
        overloaded{
            [&](const MallowsSpec& ms) {
                Ranking center = ms.tie_break == TieBreak::uniform
                                     ? ground_truth_ranking(x, TieBreak::uniform, &rng)
                                     : ground_truth_ranking(x);
                if (ms.dist.kind == DistanceKind::kendall_tau)
                    return sample_mallows_kt(ms.phi, center, rng);
                MallowsSpec fixed = ms;
                fixed.tie_break = TieBreak::index;
                ValueVector proxy(m);
                // center is already resolved; rank by center positions
                auto pos = center.positions();
                for (int c = 0; c < m; ++c) proxy[c] = Rat(static_cast<long>(m - pos[c]));
                return sample_from_cells(mallows_cells(fixed, proxy, caps), rng);
            },
            [&](const NoiseTechSpec& ns) {
                if (ns.noise.continuous()) {
                    std::vector<double> scores(m);
                    for (int c = 0; c < m; ++c) scores[c] = rat_double(x[c]) + draw_noise(ns.noise, rng);
                    return sample_scores_desc(scores, ns.tie_break, rng);
                }
                std::vector<Rat> scores(m);
                for (int c = 0; c < m; ++c) {
                    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                    double acc = 0;
                    scores[c] = x[c] + ns.noise.atoms.back().second;
                    for (const auto& [p, v] : ns.noise.atoms) {
                        acc += rat_double(p);
                        if (u <= acc) {
                            scores[c] = x[c] + v;
                            break;
                        }
                    }
                }
                return ns.tie_break == TieBreak::uniform
                           ? ground_truth_ranking(scores, TieBreak::uniform, &rng)
                           : ground_truth_ranking(scores);
            },
            [&](const TableSpec& ts) {
                const auto* e = table_entry_for(ts, x);
                if (e == nullptr)
                    throw InputError("table technology has no entry for the given values");
                double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                double acc = 0;
                for (const auto& [r, p] : e->pmf) {
                    acc += rat_double(p);
                    if (u <= acc) return r;
                }
                return e->pmf.back().first;
            },
            [&](const DeterministicSpec& ds) {
                const auto* r = deterministic_ranking_for(ds, x);
                if (r == nullptr)
                    throw InputError("deterministic technology has no entry for the given values");
                return *r;
            },
            [&](const ShortlistSpec& ss) {
                auto sp = shortlist_split(ss, x);
                const int s = static_cast<int>(sp.listed.size());
                std::vector<int> slots(ss.window);
                std::iota(slots.begin(), slots.end(), 0);
                for (int i = 0; i < s; ++i)
                    std::swap(slots[i], slots[uniform_int(rng, i, ss.window - 1)]);
                std::vector<int> order(m, -1);
                for (int i = 0; i < s; ++i) order[slots[i]] = sp.listed[i];
                std::vector<int> rest = sp.rest;
                for (int i = static_cast<int>(rest.size()) - 1; i > 0; --i)
                    std::swap(rest[i], rest[uniform_int(rng, 0, i)]);
                size_t ri = 0;
                for (int pos = 0; pos < m; ++pos)
                    if (order[pos] < 0) order[pos] = rest[ri++];
                return Ranking(std::move(order));
            },
            [&](const TieredSpec& ts) {
                auto assign = tier_assignment(ts, x);
                std::vector<int> order;
                order.reserve(m);
                for (size_t i = 0; i < assign.members.size(); ++i) {
                    std::vector<int> mem = assign.members[i];
                    if (assign.orders[i] == TieredSpec::Order::uniform) {
                        for (int j = static_cast<int>(mem.size()) - 1; j > 0; --j)
                            std::swap(mem[j], mem[uniform_int(rng, 0, j)]);
                    } else {
                        // shuffle first so tied values land in random order
                        for (int j = static_cast<int>(mem.size()) - 1; j > 0; --j)
                            std::swap(mem[j], mem[uniform_int(rng, 0, j)]);
                        bool asc = assign.orders[i] == TieredSpec::Order::asc;
                        std::stable_sort(mem.begin(), mem.end(), [&](int a, int b) {
                            return asc ? x[a] < x[b] : x[a] > x[b];
                        });
                    }
                    order.insert(order.end(), mem.begin(), mem.end());
                }
                return Ranking(std::move(order));
            },
        },
        t.spec);
}

namespace {

class CellSupportModel final : public SupportModel {
public:
    explicit CellSupportModel(std::vector<PmfCell> cells) : cells_(std::move(cells)) {
        if (cells_.empty()) throw InputError("empty support model");
        m_ = cells_[0].r.m();
    }
    int m() const override { return m_; }
    std::vector<std::pair<int, Rat>>
    next_given_prefix(const std::vector<int>& prefix) const override {
        const size_t len = prefix.size();
        std::map<int, Rat> next;
        Rat total(0);
        for (const auto& cell : cells_) {
            bool match = true;
            for (size_t i = 0; i < len && match; ++i)
                match = cell.r.at(static_cast<int>(i)) == prefix[i];
            if (!match) continue;
            next[cell.r.at(static_cast<int>(len))] += cell.p;
            total += cell.p;
        }
        if (next.empty()) throw InputError("prefix outside the support model");
        std::vector<std::pair<int, Rat>> out;
        out.reserve(next.size());
        for (auto& [c, p] : next) out.emplace_back(c, p / total);
        return out;
    }

private:
    int m_ = 0;
    std::vector<PmfCell> cells_;
};

class ShortlistSupportModel final : public SupportModel {
public:
    ShortlistSupportModel(const ShortlistSpec& ss, const ValueVector& x)
        : m_(static_cast<int>(x.size())), window_(ss.window) {
        auto sp = shortlist_split(ss, x);
        listed_.assign(m_, 0);
        for (int c : sp.listed) listed_[c] = 1;
        s_ = static_cast<int>(sp.listed.size());
    }
    int m() const override { return m_; }
    std::vector<std::pair<int, Rat>>
    next_given_prefix(const std::vector<int>& prefix) const override {
        const int len = static_cast<int>(prefix.size());
        if (len >= m_) throw InputError("prefix outside the support model");
        std::vector<char> used(m_, 0);
        int placed_listed = 0;
        for (int i = 0; i < len; ++i) {
            int c = prefix[i];
            if (used[c]) throw InputError("prefix outside the support model");
            used[c] = 1;
            if (listed_[c]) {
                if (i >= window_) throw InputError("prefix outside the support model");
                ++placed_listed;
            }
        }
        int left_listed = s_ - placed_listed;
        std::vector<std::pair<int, Rat>> out;
        if (len >= window_) {
            if (left_listed > 0) throw InputError("prefix outside the support model");
            int left_rest = m_ - len;
            for (int c = 0; c < m_; ++c)
                if (!used[c]) out.emplace_back(c, Rat(1, left_rest));
            return out;
        }
        // slots len..window-1 hold the remaining listed candidates in
        // exchangeable positions: each remaining listed candidate sits at
        // slot len with probability 1/(window-len)
        int slots_left = window_ - len;
        if (left_listed > slots_left) throw InputError("prefix outside the support model");
        Rat p_listed(1, slots_left);
        int rest_remaining = (m_ - s_) - (len - placed_listed);
        Rat p_rest(0);
        if (rest_remaining > 0)
            p_rest = rat_frac(slots_left - left_listed, slots_left) /
                     Rat(static_cast<long>(rest_remaining));
        for (int c = 0; c < m_; ++c) {
            if (used[c]) continue;
            const Rat& p = listed_[c] ? p_listed : p_rest;
            if (p > 0) out.emplace_back(c, p);
        }
        if (out.empty()) throw InputError("prefix outside the support model");
        return out;
    }

private:
    int m_, window_, s_ = 0;
    std::vector<char> listed_;
};

// Groups of candidates filling consecutive position blocks, each group in
// uniform random internal order. Sorted tiers contribute one group per tie
// block, uniform tiers one group each.
class GroupedSupportModel final : public SupportModel {
public:
    GroupedSupportModel(const TieredSpec& ts, const ValueVector& x)
        : m_(static_cast<int>(x.size())) {
        auto assign = tier_assignment(ts, x);
        for (size_t i = 0; i < assign.members.size(); ++i) {
            const auto& mem = assign.members[i];
            if (mem.empty()) continue;
            if (assign.orders[i] == TieredSpec::Order::uniform) {
                groups_.push_back(mem);
                continue;
            }
            ValueVector scores(x.size(), Rat(0));
            for (int c : mem)
                scores[c] = assign.orders[i] == TieredSpec::Order::asc ? -x[c] : x[c];
            std::vector<int> sorted = mem;
            std::stable_sort(sorted.begin(), sorted.end(),
                             [&](int a, int b) { return scores[a] > scores[b]; });
            size_t lo = 0;
            while (lo < sorted.size()) {
                size_t hi = lo + 1;
                while (hi < sorted.size() && scores[sorted[hi]] == scores[sorted[lo]]) ++hi;
                groups_.emplace_back(sorted.begin() + lo, sorted.begin() + hi);
                lo = hi;
            }
        }
    }
    int m() const override { return m_; }
    std::vector<std::pair<int, Rat>>
    next_given_prefix(const std::vector<int>& prefix) const override {
        size_t len = prefix.size(), consumed = 0;
        for (const auto& g : groups_) {
            if (len >= consumed + g.size()) {
                consumed += g.size();
                continue;
            }
            std::vector<char> used(m_, 0);
            for (size_t i = consumed; i < len; ++i) used[prefix[i]] = 1;
            std::vector<std::pair<int, Rat>> out;
            long open = static_cast<long>(g.size() - (len - consumed));
            for (int c : g)
                if (!used[c]) out.emplace_back(c, Rat(1, open));
            std::sort(out.begin(), out.end());
            if (out.empty()) throw InputError("prefix outside the support model");
            return out;
        }
        throw InputError("prefix outside the support model");
    }

private:
    int m_;
    std::vector<std::vector<int>> groups_;
};

} // namespace

std::shared_ptr<const SupportModel> make_support_model(const RankingTechnology& t,
                                                       const ValueVector& x,
                                                       const TechCaps& caps) {
    if (const auto* ss = std::get_if<ShortlistSpec>(&t.spec))
        return std::make_shared<const ShortlistSupportModel>(*ss, x);
    if (const auto* ts = std::get_if<TieredSpec>(&t.spec))
        return std::make_shared<const GroupedSupportModel>(*ts, x);
    return std::make_shared<const CellSupportModel>(exact_support_cells(t, x, caps));
}

std::shared_ptr<const SupportModel> ModelCache::get(const RankingTechnology& t,
                                                    const ValueVector& x) {
    std::string key = t.id + '\x1f' + vec_key(x);
    auto it = models_.find(key);
    if (it != models_.end()) return it->second;
    auto model = make_support_model(t, x, caps_);
    models_.emplace(std::move(key), model);
    return model;
}

} // namespace rsdlab
