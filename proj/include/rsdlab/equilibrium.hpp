#pragma once

#include "rsdlab/consistency.hpp"
#include "rsdlab/engine.hpp"

namespace rsdlab {

struct EquilibriumOptions {
    Rat epsilon;                    // exact-mode tolerance, 0 by default
    long long profile_cap = 10000;  // product of strategy-set sizes
    EngineConfig engine;
};

struct GapReport {
    Rat gap; // max over own strategies of the utility improvement, >= 0
    std::string best_tech;
};

GapReport best_response_gap(const GameSpec& spec, const Profile& profile, int firm,
                            const EngineConfig& cfg = {});

struct DominanceVerdict {
    enum class Kind { strict, weak, none };
    Kind kind = Kind::none;
    std::string tech; // set for strict and weak
};

std::string dominance_name(DominanceVerdict::Kind k);

DominanceVerdict dominant_strategy(const GameSpec& spec, int firm,
                                   const EquilibriumOptions& opt = {});

struct NashEntry {
    Profile profile;
    std::vector<Rat> utilities;
    std::vector<Rat> gaps; // per-firm best-response gaps
    Rat sw;
    Rat max_gap;
};

struct SocialOptimum {
    Profile profile; // lexicographically first among maximizers
    std::vector<Rat> utilities;
    Rat sw;
};

struct EquilibriumReport {
    bool exact = true;
    Rat epsilon;
    long long profiles_scanned = 0;
    std::vector<NashEntry> pure_nash;
    std::vector<DominanceVerdict> dominant; // per firm
    SocialOptimum optimum;
    bool poa_defined = false; // false when no pure NE exists
    Rat worst_ne_sw;
    Rat poa; // optimum.sw / worst_ne_sw

    // cross-check against the measured ranking-noise level: every pure NE
    // must keep SW >= SW* / (1 + 1/(1-delta*)^2)
    bool bound_checked = false;
    Rat delta_star;
    bool bound_finite = true;
    Rat ne_sw_floor;
    bool bound_violated = false;
};

EquilibriumReport find_pure_nash(const GameSpec& spec, const EquilibriumOptions& opt = {});

SocialOptimum social_optimum(const GameSpec& spec, const EquilibriumOptions& opt = {});

// Full pipeline: NE scan, optimum, per-firm dominance, PoA, noise-bound check.
EquilibriumReport price_of_anarchy(const GameSpec& spec, const EquilibriumOptions& opt = {});

struct SmoothnessReport {
    bool pass = true;
    long long pairs_checked = 0;
    Profile s, t; // first violating ordered pair, when pass is false
    Rat lhs, rhs; // sum of unilateral-move utilities vs SW(t) - SW(s)
};

// Checks sum_i u_i(t_i, s_-i) >= SW(t) - SW(s) over all ordered profile pairs.
SmoothnessReport smoothness_check(const GameSpec& spec, const EquilibriumOptions& opt = {});

enum class NeStatus { yes, no, inconclusive };

std::string ne_status_name(NeStatus s);

struct McNeOptions {
    long long samples = 100000;
    uint64_t seed = 1;
    double confidence = 0.95;
    double epsilon = -1;     // < 0: defaults to 1e-3 * sw_star_hint
    double sw_star_hint = 0; // known optimum welfare, used for the default epsilon
    EngineConfig engine;
};

struct McDeviationGap {
    int firm = 0;
    std::string tech;
    double mean = 0, se = 0, lcb = 0, ucb = 0;
};

struct McNeReport {
    NeStatus status = NeStatus::inconclusive;
    double epsilon = 0;
    double confidence = 0;
    long long samples = 0;
    std::vector<McDeviationGap> gaps;
    double max_gap_ucb = 0;
};

// Tests one profile for epsilon-equilibrium with paired-sample gap estimates.
// Membership is asserted only when every deviation's upper confidence bound
// clears epsilon; a straddling interval yields "inconclusive".
McNeReport check_ne_mc(const GameSpec& spec, const Profile& profile, const McNeOptions& opt);

struct McProfileRecord {
    Profile profile;
    double sw = 0, sw_se = 0;
    double max_gap_ucb = 0;
    NeStatus status = NeStatus::no;
};

struct McEquilibriumReport {
    double epsilon = 0;
    double confidence = 0;
    long long samples = 0;
    long long profiles_scanned = 0;
    std::vector<McProfileRecord> profiles;
    Profile opt_profile;
    double sw_star = 0;
    bool poa_defined = false; // at least one conclusive NE
    double poa_point = 0;     // sw_star / worst conclusive-NE welfare
    bool has_candidates = false;
    double poa_lo = 0, poa_hi = 0; // interval over possible NEs (yes + inconclusive)
};

McEquilibriumReport price_of_anarchy_mc(const GameSpec& spec, const McNeOptions& opt,
                                        long long profile_cap = 10000);

} // namespace rsdlab
