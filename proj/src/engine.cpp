#include "rsdlab/engine.hpp"

#include "rsdlab/errors.hpp"
#include "rsdlab/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>
#include <tuple>

namespace rsdlab {

namespace {

std::string history_key(const std::vector<std::tuple<int, std::string, int>>& events) {
    std::string k;
    for (const auto& [f, tech, c] : events) {
        if (!k.empty()) k += ';';
        k += 'f';
        k += std::to_string(f + 1) + ':' + tech + ':' + std::to_string(c + 1);
    }
    return k;
}

int qth_available_full(const Ranking& r, const std::vector<char>& taken, int q) {
    int seen = 0;
    for (int p = 0; p < r.m(); ++p) {
        int c = r.at(p);
        if (taken[c]) continue;
        if (++seen == q) return c;
    }
    throw InputError("no candidate left to hire");
}

int pick_full(const Ranking& r, const std::vector<char>& taken, int remaining,
              const SelectionPolicy& pol, const std::string& hkey) {
    switch (pol.kind) {
    case SelectionPolicy::Kind::obedient: return qth_available_full(r, taken, 1);
    case SelectionPolicy::Kind::qth_available:
        return qth_available_full(r, taken, std::min(pol.q, remaining));
    case SelectionPolicy::Kind::fixed_candidate_preference:
        for (int c : pol.preference)
            if (!taken[c]) return c;
        return qth_available_full(r, taken, 1);
    case SelectionPolicy::Kind::table_lookup: {
        auto it = pol.table.find(hkey);
        if (it == pol.table.end()) return qth_available_full(r, taken, 1);
        int c = it->second;
        if (c < 0 || c >= r.m() || taken[c])
            throw InputError("policy picked an unavailable candidate");
        return c;
    }
    }
    throw InputError("bad selection policy");
}

std::vector<std::string> distinct_tech_ids(const std::vector<const Profile*>& runs) {
    std::set<std::string> ids;
    for (const auto* p : runs) ids.insert(p->choices.begin(), p->choices.end());
    return {ids.begin(), ids.end()};
}

// Plays every profile on shared randomness: one value draw, one order, one
// ranking draw per distinct technology id. Samples are drawn in sorted id
// order so replicates are reproducible.
void play_coupled_once(const GameSpec& spec, const std::vector<const Profile*>& runs,
                       const std::vector<std::string>& tech_order, std::mt19937_64& rng,
                       const TechCaps& caps, ValueVector& x, std::vector<int>& beta,
                       std::vector<std::vector<int>>& hires,
                       std::map<std::string, Ranking>& samples) {
    spec.values.sample_into(rng, x);
    beta.resize(spec.n);
    std::iota(beta.begin(), beta.end(), 0);
    for (int i = spec.n - 1; i > 0; --i) std::swap(beta[i], beta[uniform_int(rng, 0, i)]);
    samples.clear();
    for (const auto& id : tech_order)
        samples.emplace(id, sample_ranking(*spec.tech_by_id(id), x, rng, caps));

    hires.assign(runs.size(), std::vector<int>(spec.n, -1));
    std::vector<char> taken(spec.m, 0);
    std::vector<std::tuple<int, std::string, int>> events;
    for (size_t run = 0; run < runs.size(); ++run) {
        std::fill(taken.begin(), taken.end(), 0);
        events.clear();
        const Profile& prof = *runs[run];
        for (int slot = 0; slot < spec.n; ++slot) {
            int f = beta[slot];
            const auto& tech = prof.choices[f];
            const auto& pol = prof.policy(f);
            std::string hkey = pol.kind == SelectionPolicy::Kind::table_lookup
                                   ? history_key(events)
                                   : std::string();
            int c = pick_full(samples.at(tech), taken, spec.m - slot, pol, hkey);
            taken[c] = 1;
            hires[run][f] = c;
            events.emplace_back(f, tech, c);
        }
    }
}

class CoupledEnumerator {
public:
    CoupledEnumerator(const GameSpec& spec, std::vector<const Profile*> runs,
                      const EngineConfig& cfg,
                      const std::function<void(const Rat&, const CoupledLeaf&)>& fn)
        : spec_(spec), runs_(std::move(runs)), cfg_(cfg), cache_(cfg.caps), fn_(fn) {
        n_ = spec.n;
        m_ = spec.m;
        K_ = static_cast<int>(runs_.size());
        if (m_ > 64) throw ResourceLimitError("exact engine handles at most 64 candidates", m_);
        spec.validate();
        for (const auto* p : runs_) validate_profile(spec, *p);
        collapse_ = cfg.allow_orbit_collapse && spec_.values.permutation_invariant();
        for (const auto* p : runs_)
            for (int i = 0; i < n_ && collapse_; ++i)
                collapse_ = spec_.tech_by_id(p->choices[i])->value_equivariant() &&
                            p->policy(i).candidate_blind();
    }

    long long leaves() const { return leaves_; }

    void run() {
        auto atoms = collapse_ ? spec_.values.orbit_support(cfg_.caps.support_cap)
                               : spec_.values.support(cfg_.caps.support_cap);
        Rat fact(1);
        for (int i = 2; i <= n_; ++i) fact *= i;
        hires_.assign(K_, std::vector<int>(n_, -1));
        taken_.assign(K_, 0);
        auto ids = distinct_tech_ids(runs_);
        for (long long xi = 0; xi < static_cast<long long>(atoms.size()); ++xi) {
            const auto& atom = atoms[xi];
            x_ = &atom.x;
            x_index_ = xi;
            models_.clear();
            prefixes_.clear();
            for (const auto& id : ids) {
                models_.emplace(id, cache_.get(*spec_.tech_by_id(id), atom.x));
                prefixes_.emplace(id, std::vector<int>{});
            }
            Rat w0 = atom.p / fact;
            beta_index_ = 0;
            for_each_ranking(n_, [&](const Ranking& beta) {
                beta_ = beta.order();
                step(0, 0, w0);
                ++beta_index_;
            });
        }
    }

private:
    void step(int slot, int run, const Rat& w) {
        if (slot == n_) {
            if (++leaves_ > cfg_.atom_budget)
                throw ResourceLimitError("exact enumeration budget exceeded", leaves_);
            fn_(w, CoupledLeaf{*x_, beta_, hires_, x_index_, beta_index_});
            return;
        }
        int f = beta_[slot];
        const Profile& prof = *runs_[run];
        const auto& pol = prof.policy(f);
        const std::string& tech = prof.choices[f];
        uint64_t mask = taken_[run];

        int pick = -1;
        bool need_walk = true;
        if (pol.kind == SelectionPolicy::Kind::fixed_candidate_preference) {
            for (int c : pol.preference)
                if (!(mask >> c & 1)) {
                    pick = c;
                    need_walk = false;
                    break;
                }
        } else if (pol.kind == SelectionPolicy::Kind::table_lookup) {
            std::vector<std::tuple<int, std::string, int>> events;
            for (int t = 0; t < slot; ++t)
                events.emplace_back(beta_[t], prof.choices[beta_[t]],
                                    hires_[run][beta_[t]]);
            auto it = pol.table.find(history_key(events));
            if (it != pol.table.end()) {
                int c = it->second;
                if (c < 0 || c >= m_ || (mask >> c & 1))
                    throw InputError("policy picked an unavailable candidate");
                pick = c;
                need_walk = false;
            }
        }
        if (need_walk) {
            int remaining = m_ - slot;
            int q = pol.kind == SelectionPolicy::Kind::qth_available
                        ? std::min(pol.q, remaining)
                        : 1;
            const auto& prefix = prefixes_.at(tech);
            int seen = 0;
            for (int c : prefix)
                if (!(mask >> c & 1) && ++seen == q) {
                    pick = c;
                    break;
                }
            if (pick < 0) {
                // the sample is not revealed deeply enough; branch on the
                // next element and retry this same turn
                auto options = models_.at(tech)->next_given_prefix(prefix);
                auto& mut = prefixes_.at(tech);
                for (const auto& [c, p] : options) {
                    mut.push_back(c);
                    step(slot, run, w * p);
                    mut.pop_back();
                }
                return;
            }
        }
        taken_[run] |= 1ull << pick;
        hires_[run][f] = pick;
        if (run + 1 < K_)
            step(slot, run + 1, w);
        else
            step(slot + 1, 0, w);
        taken_[run] &= ~(1ull << pick);
        hires_[run][f] = -1;
    }

    const GameSpec& spec_;
    std::vector<const Profile*> runs_;
    const EngineConfig& cfg_;
    ModelCache cache_;
    std::function<void(const Rat&, const CoupledLeaf&)> fn_;
    int n_ = 0, m_ = 0, K_ = 0;
    bool collapse_ = false;
    const ValueVector* x_ = nullptr;
    std::vector<int> beta_;
    long long x_index_ = 0, beta_index_ = 0, leaves_ = 0;
    std::vector<uint64_t> taken_;
    std::vector<std::vector<int>> hires_;
    std::map<std::string, std::shared_ptr<const SupportModel>> models_;
    std::map<std::string, std::vector<int>> prefixes_;
};

} // namespace

OutcomeRecord play_once(const GameSpec& spec, const Profile& profile, std::mt19937_64& rng,
                        const TechCaps& caps) {
    spec.validate();
    validate_profile(spec, profile);
    std::vector<const Profile*> runs{&profile};
    auto ids = distinct_tech_ids(runs);
    OutcomeRecord rec;
    std::vector<std::vector<int>> hires;
    play_coupled_once(spec, runs, ids, rng, caps, rec.x, rec.beta, hires, rec.tech_samples);
    rec.hires = hires[0];
    rec.hire_values.reserve(spec.n);
    for (int f = 0; f < spec.n; ++f) rec.hire_values.push_back(rec.x[rec.hires[f]]);
    return rec;
}

void enumerate_coupled(const GameSpec& spec, const std::vector<const Profile*>& runs,
                       const EngineConfig& cfg,
                       const std::function<void(const Rat&, const CoupledLeaf&)>& fn) {
    if (runs.empty()) throw InputError("enumeration needs at least one profile");
    CoupledEnumerator e(spec, runs, cfg, fn);
    e.run();
}

UtilityResult expected_utilities_exact(const GameSpec& spec, const Profile& profile,
                                       const EngineConfig& cfg) {
    UtilityResult res;
    res.utilities.assign(spec.n, Rat(0));
    Rat total(0);
    long long leaves = 0;
    enumerate_coupled(spec, {&profile}, cfg, [&](const Rat& w, const CoupledLeaf& leaf) {
        ++leaves;
        total += w;
        for (int f = 0; f < spec.n; ++f) res.utilities[f] += w * leaf.x[leaf.hires[0][f]];
    });
    if (total != 1) throw std::logic_error("enumeration weights do not sum to 1");
    res.social_welfare = rat_sum(res.utilities);
    res.atoms_visited = leaves;
    return res;
}

namespace {

struct McBlock {
    std::vector<double> sum, sumsq;
};

// Deterministic blocked reduction: replicate r uses stream make_stream(seed,
// r); blocks are accumulated in replicate order and reduced in block order,
// so results do not depend on the worker count.
void mc_blocks(const GameSpec& spec, const std::vector<const Profile*>& runs, long long samples,
               uint64_t seed, const EngineConfig& cfg, int metric_count,
               const std::function<void(const ValueVector&, const std::vector<int>&,
                                        const std::vector<std::vector<int>>&,
                                        std::vector<double>&)>& metric_fn,
               std::vector<double>& sum_out, std::vector<double>& sumsq_out) {
    spec.validate();
    for (const auto* p : runs) validate_profile(spec, *p);
    if (samples < 1) throw InputError("need at least one replicate");
    auto ids = distinct_tech_ids(runs);
    const long long block = std::max<long long>(1, cfg.mc_block);
    const long long nblocks = (samples + block - 1) / block;
    std::vector<McBlock> blocks(nblocks);
    std::atomic<long long> next{0};
    int workers = std::max(1, cfg.workers);
    auto work = [&]() {
        ValueVector x;
        std::vector<int> beta;
        std::vector<std::vector<int>> hires;
        std::map<std::string, Ranking> tech_samples;
        std::vector<double> metrics(metric_count);
        for (;;) {
            long long b = next.fetch_add(1);
            if (b >= nblocks) return;
            auto& out = blocks[b];
            out.sum.assign(metric_count, 0.0);
            out.sumsq.assign(metric_count, 0.0);
            long long lo = b * block, hi = std::min(samples, lo + block);
            for (long long r = lo; r < hi; ++r) {
                auto rng = make_stream(seed, static_cast<uint64_t>(r));
                play_coupled_once(spec, runs, ids, rng, cfg.caps, x, beta, hires, tech_samples);
                metric_fn(x, beta, hires, metrics);
                for (int k = 0; k < metric_count; ++k) {
                    out.sum[k] += metrics[k];
                    out.sumsq[k] += metrics[k] * metrics[k];
                }
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    sum_out.assign(metric_count, 0.0);
    sumsq_out.assign(metric_count, 0.0);
    for (const auto& blk : blocks)
        for (int k = 0; k < metric_count; ++k) {
            sum_out[k] += blk.sum[k];
            sumsq_out[k] += blk.sumsq[k];
        }
}

double stderr_of(double sum, double sumsq, long long n) {
    if (n < 2) return 0.0;
    double mean = sum / n;
    double var = (sumsq - n * mean * mean) / (n - 1);
    return std::sqrt(std::max(0.0, var) / n);
}

} // namespace

McMetrics mc_coupled_metrics(const GameSpec& spec, const std::vector<const Profile*>& runs,
                             int metric_count, const McMetricFn& metric_fn, long long samples,
                             uint64_t seed, const EngineConfig& cfg) {
    if (runs.empty()) throw InputError("need at least one profile");
    if (metric_count < 1) throw InputError("need at least one metric");
    std::vector<double> sum, sumsq;
    mc_blocks(spec, runs, samples, seed, cfg, metric_count, metric_fn, sum, sumsq);
    McMetrics res;
    res.samples = samples;
    res.mean.resize(metric_count);
    res.se.resize(metric_count);
    for (int k = 0; k < metric_count; ++k) {
        res.mean[k] = sum[k] / samples;
        res.se[k] = stderr_of(sum[k], sumsq[k], samples);
    }
    return res;
}

UtilityResult expected_utilities_mc(const GameSpec& spec, const Profile& profile,
                                    long long samples, uint64_t seed, const EngineConfig& cfg) {
    UtilityResult res;
    res.exact = false;
    res.samples = samples;
    const int n = spec.n;
    std::vector<double> sum, sumsq;
    mc_blocks(spec, {&profile}, samples, seed, cfg, n + 1,
              [&](const ValueVector& x, const std::vector<int>&,
                  const std::vector<std::vector<int>>& hires, std::vector<double>& out) {
                  double sw = 0;
                  for (int f = 0; f < n; ++f) {
                      out[f] = rat_double(x[hires[0][f]]);
                      sw += out[f];
                  }
                  out[n] = sw;
              },
              sum, sumsq);
    res.utilities_mc.resize(n);
    res.stderrs.resize(n);
    for (int f = 0; f < n; ++f) {
        res.utilities_mc[f] = sum[f] / samples;
        res.stderrs[f] = stderr_of(sum[f], sumsq[f], samples);
    }
    res.social_welfare_mc = sum[n] / samples;
    res.sw_stderr = stderr_of(sum[n], sumsq[n], samples);
    return res;
}

McGap mc_utility_gap(const GameSpec& spec, const Profile& base, const Profile& deviation,
                     int firm, long long samples, uint64_t seed, const EngineConfig& cfg) {
    if (firm < 0 || firm >= spec.n) throw InputError("firm index out of range");
    std::vector<double> sum, sumsq;
    mc_blocks(spec, {&base, &deviation}, samples, seed, cfg, 1,
              [&](const ValueVector& x, const std::vector<int>&,
                  const std::vector<std::vector<int>>& hires, std::vector<double>& out) {
                  out[0] = rat_double(x[hires[1][firm]]) - rat_double(x[hires[0][firm]]);
              },
              sum, sumsq);
    McGap g;
    g.samples = samples;
    g.mean = sum[0] / samples;
    g.se = stderr_of(sum[0], sumsq[0], samples);
    return g;
}

DeviationGapReport conditional_deviation_gap(const GameSpec& spec, const Profile& s,
                                             const Profile& s_star, int firm, const Rat& delta,
                                             std::optional<int> firm_slot,
                                             const EngineConfig& cfg) {
    if (firm < 0 || firm >= spec.n) throw InputError("firm index out of range");
    if (delta < 0 || delta >= 1) throw InputError("delta must be in [0, 1)");
    Profile dev = s;
    dev.choices[firm] = s_star.choices[firm];
    if (!dev.policies.empty() || !s_star.policies.empty()) {
        if (dev.policies.empty()) dev.policies.assign(spec.n, SelectionPolicy::obedient());
        dev.policies[firm] = s_star.policy(firm);
    }
    EngineConfig literal = cfg;
    literal.allow_orbit_collapse = false; // pieces are literal (x, order) cells

    struct Piece {
        Rat mass, num;
        ValueVector x;
        std::vector<int> beta;
    };
    std::map<std::pair<long long, long long>, Piece> pieces;
    Rat factor = (1 - delta) * (1 - delta);

    enumerate_coupled(spec, {&s, &s_star, &dev}, literal,
                      [&](const Rat& w, const CoupledLeaf& leaf) {
                          int slot = 0;
                          while (leaf.beta[slot] != firm) ++slot;
                          if (firm_slot && slot != *firm_slot) return;
                          int c_star = leaf.hires[1][firm];
                          for (int t = 0; t < slot; ++t)
                              if (leaf.hires[0][leaf.beta[t]] == c_star) return;
                          auto& pc = pieces[{leaf.x_index, leaf.beta_index}];
                          if (pc.x.empty()) {
                              pc.x = leaf.x;
                              pc.beta = leaf.beta;
                          }
                          pc.mass += w;
                          pc.num += w * (leaf.x[leaf.hires[2][firm]] - factor * leaf.x[c_star]);
                      });

    DeviationGapReport rep;
    rep.delta = delta;
    Rat mass(0), num(0);
    bool first = true;
    for (const auto& [key, pc] : pieces) {
        if (pc.mass == 0) continue;
        ++rep.pieces;
        mass += pc.mass;
        num += pc.num;
        Rat g = pc.num / pc.mass;
        if (first || g < rep.min_conditional_gap) {
            first = false;
            rep.min_conditional_gap = g;
            rep.min_x = pc.x;
            rep.min_beta = pc.beta;
        }
    }
    rep.event_mass = mass;
    rep.vacuous = mass == 0;
    if (!rep.vacuous) rep.gap = num / mass;
    return rep;
}

SnatchedSplit snatched_available_split(const GameSpec& spec, const Profile& s,
                                       const Profile& s_star, const EngineConfig& cfg) {
    SnatchedSplit split;
    split.snatched = 0;
    split.available = 0;
    enumerate_coupled(spec, {&s, &s_star}, cfg, [&](const Rat& w, const CoupledLeaf& leaf) {
        std::vector<int> slot_of(spec.n);
        for (int t = 0; t < spec.n; ++t) slot_of[leaf.beta[t]] = t;
        for (int f = 0; f < spec.n; ++f) {
            int c_star = leaf.hires[1][f];
            bool snatched = false;
            for (int t = 0; t < slot_of[f] && !snatched; ++t)
                snatched = leaf.hires[0][leaf.beta[t]] == c_star;
            (snatched ? split.snatched : split.available) += w * leaf.x[c_star];
        }
    });
    split.sw_star = split.snatched + split.available;
    return split;
}

IcAuditReport ic_audit(const GameSpec& spec, const Profile& profile, const EngineConfig& cfg) {
    if (spec.mechanism != Mechanism::unconstrained)
        throw InputError("ic_audit needs the unconstrained mechanism");
    if (spec.n > 3 || spec.m > 5)
        throw ResourceLimitError("ic audit handles up to 3 firms and 5 candidates",
                                 static_cast<long long>(spec.n) * spec.m);
    EngineConfig literal = cfg;
    literal.allow_orbit_collapse = false; // histories address candidate identities

    struct PointAcc {
        Rat mass, obed;
        std::map<int, Rat> snipe; // candidate -> mass-weighted value if asked for
        std::vector<std::pair<int, int>> history;
        int firm = 0, slot = 0;
    };
    auto point_key = [](int firm, int slot, const std::string& h) {
        return std::to_string(firm) + '/' + std::to_string(slot) + '/' + h;
    };
    std::map<std::string, PointAcc> points;

    enumerate_coupled(spec, {&profile}, literal, [&](const Rat& w, const CoupledLeaf& leaf) {
        std::vector<char> taken(spec.m, 0);
        std::vector<std::tuple<int, std::string, int>> events;
        for (int slot = 0; slot < spec.n; ++slot) {
            int f = leaf.beta[slot];
            auto& acc = points[point_key(f, slot, history_key(events))];
            if (acc.mass == 0) {
                acc.firm = f;
                acc.slot = slot;
                for (const auto& [pf, ptech, pc] : events) acc.history.emplace_back(pf, pc);
            }
            acc.mass += w;
            acc.obed += w * leaf.x[leaf.hires[0][f]];
            for (int c = 0; c < spec.m; ++c)
                if (!taken[c]) acc.snipe[c] += w * leaf.x[c];
            int hired = leaf.hires[0][f];
            taken[hired] = 1;
            events.emplace_back(f, profile.choices[f], hired);
        }
    });

    // q-th-place deviations need their own coupled runs: the deviating pick
    // depends on sample depth the obedient run never reveals
    std::map<std::string, std::map<int, std::pair<Rat, Rat>>> qvals; // key -> q -> (mass, val)
    for (int f = 0; f < spec.n; ++f) {
        for (int q = 2; q <= spec.m; ++q) {
            Profile dev = profile;
            if (dev.policies.empty()) dev.policies.assign(spec.n, SelectionPolicy::obedient());
            dev.policies[f] = SelectionPolicy::qth(q);
            enumerate_coupled(spec, {&profile, &dev}, literal,
                              [&](const Rat& w, const CoupledLeaf& leaf) {
                                  std::vector<std::tuple<int, std::string, int>> events;
                                  int slot = 0;
                                  while (leaf.beta[slot] != f) {
                                      int g = leaf.beta[slot];
                                      events.emplace_back(g, profile.choices[g],
                                                          leaf.hires[0][g]);
                                      ++slot;
                                  }
                                  auto& cell = qvals[point_key(f, slot, history_key(events))][q];
                                  cell.first += w;
                                  cell.second += w * leaf.x[leaf.hires[1][f]];
                              });
        }
    }

    IcAuditReport rep;
    rep.decision_points = static_cast<long long>(points.size());
    for (const auto& [key, acc] : points) {
        IcDecisionPoint pt;
        pt.firm = acc.firm;
        pt.slot = acc.slot;
        pt.history = acc.history;
        pt.mass = acc.mass;
        pt.obedient_value = acc.obed / acc.mass;
        bool have_best = false;
        Rat best;
        std::string best_name;
        for (const auto& [c, val] : acc.snipe) {
            ++rep.alternatives_checked;
            Rat v = val / acc.mass;
            if (!have_best || v > best) {
                have_best = true;
                best = v;
                best_name = SelectionPolicy::prefer({c}).describe();
            }
        }
        auto qit = qvals.find(key);
        if (qit != qvals.end())
            for (const auto& [q, cell] : qit->second) {
                if (q > spec.m - acc.slot) continue; // clamps onto a smaller q
                ++rep.alternatives_checked;
                Rat v = cell.second / cell.first;
                if (!have_best || v > best) {
                    have_best = true;
                    best = v;
                    best_name = "qth(" + std::to_string(q) + ")";
                }
            }
        if (!have_best) continue;
        pt.best_policy = best_name;
        pt.best_value = best;
        pt.gap = best - pt.obedient_value;
        if (pt.gap > 0) {
            rep.any_violation = true;
            rep.violations.push_back(pt);
        }
        if (!rep.worst || pt.gap > rep.worst->gap) rep.worst = pt;
    }
    return rep;
}

} // namespace rsdlab
