#pragma once

#include "rsdlab/equilibrium.hpp"

namespace rsdlab {

// A generated game plus the numeric verification of the claims it was built
// to exhibit. Instances must end up verified before a test suite relies on
// their structural claims.
struct InstanceDescriptor {
    std::string name;
    std::map<std::string, std::string> parameters;
    GameSpec spec;
    std::string notes;
    bool verified = false;
    std::map<std::string, Rat> exact_stats;
    std::map<std::string, double> mc_stats;
    std::string failure; // first failed verification step, empty when verified
};

// Two shared technologies over a random high/low value pair among 2^n
// candidates: "A" pins the high candidate to the first position, "Aprime"
// deals both valuable candidates into the top n positions. All firms playing
// A is an equilibrium whose welfare stays near 1 while the optimum reaches
// 1 + v, so the welfare ratio approaches 2 as n grows.
struct TightPoaOptions {
    Rat eta = Rat(1, 20); // shrinks v below the equilibrium-breaking threshold
    long long mc_samples = 200000;
    uint64_t seed = 20260814u;
    double confidence = 0.95;
    EngineConfig engine;
};

InstanceDescriptor gen_tight_poa(int n, const TightPoaOptions& opt = {});

// One candidate worth n, n-1 worthless ones, and n mid-value candidates with
// an escalating value sequence. The shared technology "A" chases the value-n
// candidate and is strictly dominant, yet everyone using their own "H"
// harvests the whole mid-value sequence, so the welfare ratio grows linearly
// in n.
struct LinearPoaOptions {
    Rat eps = Rat(9, 100); // dominance margin spread across the sequence
    EngineConfig engine;
};

InstanceDescriptor gen_linear_poa(int n, const LinearPoaOptions& opt = {});

// n+3 candidates with decreasing values and one noisy firm placed last in
// the hiring order. The two profiles steer the earlier deterministic firms
// so that conditioning on "your optimistic hire was still available" selects
// exactly the replicates where the noisy ranking was misleading: the
// conditional utility comparison comes out negative.
struct DeviationOptions {
    Rat phi = Rat(1, 2); // ranking noise level of the last firm
    EngineConfig engine;
};

struct DeviationInstance {
    InstanceDescriptor descriptor;
    Profile s, s_star;
    int firm = 0;      // the noisy firm
    int firm_slot = 0; // conditioning slot (last)
    DeviationGapReport report;
};

DeviationInstance gen_deviation_counterexample(int n, const DeviationOptions& opt = {});

// Random game over position-noise technologies that pass the exact ranking
// consistency certificate; used for randomized equilibrium/welfare suites.
struct RandomGameOptions {
    int common_count = 2;
    int idio_count = 1; // per firm
    std::vector<std::pair<Rat, Rat>> value_marginal = {
        {Rat(1, 2), Rat(0)}, {Rat(1, 4), Rat(1)}, {Rat(1, 4), Rat(2)}};
    EngineConfig engine;
};

InstanceDescriptor gen_random_sc_game(int n, int m, uint64_t seed,
                                      const RandomGameOptions& opt = {});

// Small unconstrained-mechanism games whose information structure is fully
// candidate-symmetric: exchangeable values, value-addressed technologies,
// uniform tie handling. Obedient play should survive the audit at every
// decision point.
std::vector<InstanceDescriptor> gen_obedience_suite();

// Two asymmetric games where the audit must flag deviations: a ranking that
// deterministically inverts the values, and an uninformative ranking next to
// publicly known unequal values.
std::vector<InstanceDescriptor> gen_obedience_violations();

} // namespace rsdlab
