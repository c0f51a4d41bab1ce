#pragma once

#include "rsdlab/game.hpp"

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rsdlab {

struct EngineConfig {
    TechCaps caps;
    long long atom_budget = 100000000; // leaves visited by the exact engine
    bool allow_orbit_collapse = true;
    int workers = 1;        // Monte Carlo only
    long long mc_block = 4096; // replicates per reduction block
};

struct OutcomeRecord {
    ValueVector x;
    std::vector<int> beta;  // beta[slot] = firm acting at that slot
    std::vector<int> hires; // per firm
    std::vector<Rat> hire_values;
    std::map<std::string, Ranking> tech_samples; // per distinct technology id
};

OutcomeRecord play_once(const GameSpec& spec, const Profile& profile, std::mt19937_64& rng,
                        const TechCaps& caps = {});

// Several profiles evaluated on one probability space: shared x, shared beta,
// and one lazily revealed ranking per technology id, common to every run.
struct CoupledLeaf {
    const ValueVector& x;
    const std::vector<int>& beta;
    const std::vector<std::vector<int>>& hires; // [run][firm]
    long long x_index = 0, beta_index = 0;
};

// Exact enumeration over the value support, the n! orders, and each ranking
// prefix down to the depth the policies actually inspect. Calls fn once per
// leaf with the leaf's exact probability; weights sum to 1.
void enumerate_coupled(const GameSpec& spec, const std::vector<const Profile*>& runs,
                       const EngineConfig& cfg,
                       const std::function<void(const Rat&, const CoupledLeaf&)>& fn);

struct UtilityResult {
    bool exact = true;
    std::vector<Rat> utilities;
    Rat social_welfare;
    std::vector<double> utilities_mc, stderrs;
    double social_welfare_mc = 0, sw_stderr = 0;
    long long samples = 0;
    long long atoms_visited = 0;
};

UtilityResult expected_utilities_exact(const GameSpec& spec, const Profile& profile,
                                       const EngineConfig& cfg = {});

UtilityResult expected_utilities_mc(const GameSpec& spec, const Profile& profile,
                                    long long samples, uint64_t seed,
                                    const EngineConfig& cfg = {});

// One scalar summary per replicate, evaluated on the shared play of all runs.
using McMetricFn = std::function<void(const ValueVector& x, const std::vector<int>& beta,
                                      const std::vector<std::vector<int>>& hires,
                                      std::vector<double>& out)>;

struct McMetrics {
    std::vector<double> mean, se;
    long long samples = 0;
};

// Plays every run on shared randomness each replicate and averages the
// metrics; one pass covers many coupled comparisons at once.
McMetrics mc_coupled_metrics(const GameSpec& spec, const std::vector<const Profile*>& runs,
                             int metric_count, const McMetricFn& metric_fn, long long samples,
                             uint64_t seed, const EngineConfig& cfg = {});

struct McGap {
    double mean = 0, se = 0;
    long long samples = 0;
};

// E[u_firm(deviation) - u_firm(base)] with both profiles played on shared
// randomness, replicate by replicate.
McGap mc_utility_gap(const GameSpec& spec, const Profile& base, const Profile& deviation,
                     int firm, long long samples, uint64_t seed, const EngineConfig& cfg = {});

struct DeviationGapReport {
    bool vacuous = true; // conditioning event never happens
    Rat event_mass;
    Rat gap;   // E[x_i(dev) - (1-delta)^2 x_i(s*) | event]
    Rat delta; // 0 gives the plain comparison
    Rat min_conditional_gap; // worst (x, beta) piece
    ValueVector min_x;
    std::vector<int> min_beta;
    long long pieces = 0; // (x, beta) pieces with positive event mass
};

// Couples three runs (s, s*, and s with firm i deviating to her s* choice)
// and conditions on firm i's s* hire not being taken by the firms before her
// in s. firm_slot restricts to orders placing firm i at that slot.
DeviationGapReport conditional_deviation_gap(const GameSpec& spec, const Profile& s,
                                             const Profile& s_star, int firm,
                                             const Rat& delta = Rat(0),
                                             std::optional<int> firm_slot = {},
                                             const EngineConfig& cfg = {});

struct SnatchedSplit {
    Rat snatched;  // value of s* hires already taken by earlier firms in s
    Rat available; // value of the rest; snatched + available = SW(s*)
    Rat sw_star;
};

SnatchedSplit snatched_available_split(const GameSpec& spec, const Profile& s,
                                       const Profile& s_star, const EngineConfig& cfg = {});

struct IcDecisionPoint {
    int firm = 0, slot = 0;
    std::vector<std::pair<int, int>> history; // (firm, hire) of earlier slots
    Rat mass;
    Rat obedient_value;
    std::string best_policy;
    Rat best_value;
    Rat gap; // best_value - obedient_value; positive means a violation
};

struct IcAuditReport {
    bool any_violation = false;
    long long decision_points = 0;
    long long alternatives_checked = 0;
    std::vector<IcDecisionPoint> violations;
    std::optional<IcDecisionPoint> worst; // largest gap, violation or not
};

// For every firm, order slot, and observable history (who went before, with
// which technology, hiring whom), compares the obedient conditional value
// against every qth_available rank and every fixed single-candidate
// preference. Exact; never uses orbit collapse.
IcAuditReport ic_audit(const GameSpec& spec, const Profile& profile,
                       const EngineConfig& cfg = {});

} // namespace rsdlab
