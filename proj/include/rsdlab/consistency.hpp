#pragma once

#include "rsdlab/technology.hpp"

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rsdlab {

// One comparison from the consistency sweep: full rankings carry the
// conditioning (everything outside positions i, j agrees between the two).
struct ConsistencyTuple {
    int i = 0, j = 0; // positions, i < j
    int k = 0, l = 0; // candidates with x[k] >= x[l]
    Ranking correct, incorrect;
    Rat p_correct, p_incorrect;
};

enum class Verdict { consistent, violated, inconclusive };

std::string verdict_name(Verdict v);

struct ConsistencyReport {
    Verdict verdict = Verdict::consistent;
    bool statistical = false;
    double confidence = 0; // statistical mode only
    Rat delta_star;        // exact mode; 1 - p_correct/p_incorrect, clamped at 0
    double delta_star_est = 0;
    double delta_star_ucb = 0; // statistical mode, Bonferroni-level Wilson bound
    std::optional<ConsistencyTuple> witness;
    long long tuples_checked = 0;
    long long tuples_tested = 0;       // statistical: tuples with enough mass
    long long tuples_inconclusive = 0; // statistical: cells below the minimum count
    long long samples = 0;
    double worst_p_value = 1.0; // statistical: smallest per-tuple p-value
};

// Exhaustive sweep of Def-style tuples over the exact pmf: every ranking,
// every position pair i < j whose candidates satisfy x[k] >= x[l], compared
// against the same ranking with k and l exchanged. Ties generate both
// directions, forcing equality.
ConsistencyReport check_sc_exact(const RankingTechnology& t, const ValueVector& x,
                                 const TechCaps& caps = {});

// Same tuple sweep on empirical frequencies from shared samples; one-sided
// binomial test per tuple with Bonferroni correction. Tuples whose two cells
// together hold fewer than min_cell samples are inconclusive.
ConsistencyReport check_sc_statistical(const RankingTechnology& t, const ValueVector& x,
                                       long long samples, double confidence,
                                       std::mt19937_64& rng, long long min_cell = 50,
                                       const TechCaps& caps = {});

struct DeltaReport {
    Rat delta_star;
    bool bound_finite = true; // false when some correct probability is 0
    Rat poa_bound;            // 1 + 1/(1-delta*)^2 when finite
    std::string witness_tech;
    ValueVector witness_x;
    std::optional<ConsistencyTuple> witness;
    long long tuples_checked = 0;
};

DeltaReport measure_delta(const std::vector<RankingTechnology>& space,
                          const std::vector<ValueVector>& xs, const TechCaps& caps = {});

Rat delta_poa_bound(const Rat& delta_star); // 1 + 1/(1-delta*)^2, needs delta* < 1

double normal_quantile(double p); // inverse standard normal cdf, p in (0, 1)

// Joint density over R^m evaluated pointwise, with an iid coordinate sampler
// used to build random majorizing pairs.
struct JointDensity {
    int m = 0;
    double spread = 1.0; // scale of the spreading perturbation in spot checks
    std::function<double(const std::vector<double>&)> pdf;
    std::function<double(std::mt19937_64&)> draw_coord;
};

JointDensity iid_noise_density(const NoiseSpec& noise, int m);
// log-convex counterexample: density proportional to exp(+|z|^2) on a box
JointDensity box_spreading_density(int m, double half_width);

struct SchurCheckResult {
    bool pass = true;
    long long trials = 0;
    std::vector<double> x, y; // witness: x majorizes y yet f(x) > f(y) + tol
    double fx = 0, fy = 0;
};

// Draws y from the density's iid sampler, spreads two coordinates to build
// x majorizing y, and asserts pdf(x) <= pdf(y) + tol.
SchurCheckResult schur_spot_check(const JointDensity& density, long long trials,
                                  std::mt19937_64& rng, double tol = 1e-12);

} // namespace rsdlab
