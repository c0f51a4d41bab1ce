#pragma once

#include "rsdlab/ranking.hpp"
#include "rsdlab/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rsdlab {

enum class DistanceKind {
    kendall_tau,       // discordant candidate pairs
    spearman_rho,      // sum of squared positional displacements
    spearman_footrule, // sum of absolute positional displacements
    cayley,            // m minus number of cycles of a∘b⁻¹
    hamming,           // positions where the two rankings disagree
    gsum,              // sum of g(|positional displacement|), tabulated g
};

struct RankDistance {
    DistanceKind kind = DistanceKind::kendall_tau;
    std::vector<Rat> g; // gsum table on {0..len-1}; must be non-negative,
                        // non-decreasing and convex

    static RankDistance kendall_tau() { return {DistanceKind::kendall_tau, {}}; }
    static RankDistance spearman_rho() { return {DistanceKind::spearman_rho, {}}; }
    static RankDistance spearman_footrule() { return {DistanceKind::spearman_footrule, {}}; }
    static RankDistance cayley() { return {DistanceKind::cayley, {}}; }
    static RankDistance hamming() { return {DistanceKind::hamming, {}}; }
    static RankDistance gsum(std::vector<Rat> table); // validates the table

    bool integer_valued() const; // true iff every distance value is an integer
};

std::string distance_kind_name(DistanceKind k);
DistanceKind distance_kind_from_name(const std::string& s);

Rat distance(const RankDistance& d, const Ranking& a, const Ranking& b);

struct InversionMonotoneViolation {
    Ranking pi;         // ranking with k ahead of l, matching the ground truth
    Ranking pi_swapped; // same ranking with k and l exchanged
    int k = 0, l = 0;   // candidates (k above l in the ground truth)
    Rat d_before, d_after;
};

struct InversionMonotoneResult {
    bool monotone = false;
    std::optional<InversionMonotoneViolation> violation;
    long long swaps_checked = 0;
};

// Exhaustive check over all rankings of m candidates: exchanging a correctly
// ordered pair must not decrease the distance to the ground truth. Reports the
// first violation (lexicographically smallest ranking, then smallest pair).
InversionMonotoneResult is_inversion_monotone(const RankDistance& d, int m,
                                              const Ranking& ground_truth, int m_cap = 6);

} // namespace rsdlab
