#pragma once

#include "rsdlab/rational.hpp"

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace rsdlab {

using ValueVector = std::vector<Rat>; // candidate c has common value x[c] >= 0

struct ValueAtom {
    Rat p;
    ValueVector x;
};

// Finite-support distribution over value vectors. Besides an explicit support
// list there are three generated families, all permutation invariant by
// construction:
//   iid               per-candidate iid draws from a discrete marginal
//   random_pair       a uniformly random ordered pair of candidates gets the
//                     two listed values, everyone else zero
//   shuffled_multiset a fixed value multiset dealt uniformly at random
class ValueDistribution {
public:
    enum class Kind { explicit_support, iid, random_pair, shuffled_multiset };

    // An empty distribution (m = 0); GameSpec validation rejects it.
    ValueDistribution() = default;

    static ValueDistribution explicit_support(std::vector<ValueAtom> atoms,
                                              bool declared_permutation_invariant);
    static ValueDistribution iid(int m, std::vector<std::pair<Rat, Rat>> marginal); // (p, value)
    static ValueDistribution random_pair(int m, Rat high, Rat low);
    static ValueDistribution shuffled_multiset(std::vector<Rat> values);

    Kind kind() const { return kind_; }
    int m() const { return m_; }
    bool permutation_invariant() const { return permutation_invariant_; }

    // Exact closure check on the explicit support (generated kinds are
    // invariant by construction). Used to police the declared flag.
    bool verify_permutation_invariance(long long atom_cap = 200000) const;

    // Full materialized support; throws ResourceLimitError past the cap.
    std::vector<ValueAtom> support(long long cap = 1000000) const;
    // One representative (sorted descending) per relabeling orbit, with the
    // orbit's total mass. Only meaningful for permutation-invariant
    // distributions.
    std::vector<ValueAtom> orbit_support(long long cap = 1000000) const;

    ValueVector sample(std::mt19937_64& rng) const;
    // Same draw, written into a reused buffer: keeps hot Monte Carlo loops
    // from reallocating large value vectors.
    void sample_into(std::mt19937_64& rng, ValueVector& x) const;

    const std::vector<ValueAtom>& explicit_atoms() const { return atoms_; }
    const std::vector<std::pair<Rat, Rat>>& iid_marginal() const { return marginal_; }
    const Rat& pair_high() const { return high_; }
    const Rat& pair_low() const { return low_; }
    const std::vector<Rat>& multiset_values() const { return multiset_; }

private:
    Kind kind_ = Kind::explicit_support;
    int m_ = 0;
    bool permutation_invariant_ = false;
    std::vector<ValueAtom> atoms_;               // explicit_support
    std::vector<std::pair<Rat, Rat>> marginal_;  // iid
    Rat high_, low_;                             // random_pair
    std::vector<Rat> multiset_;                  // shuffled_multiset
};

} // namespace rsdlab
