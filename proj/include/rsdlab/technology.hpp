#pragma once

#include "rsdlab/rank_distance.hpp"
#include "rsdlab/ranking.hpp"
#include "rsdlab/rational.hpp"
#include "rsdlab/values.hpp"

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace rsdlab {

enum class TieBreak { index, uniform };

struct NoiseSpec {
    enum class Family { gaussian, laplacian, uniform, discrete_iid };
    Family family = Family::gaussian;
    double param = 1.0;                      // sigma | scale | width
    std::vector<std::pair<Rat, Rat>> atoms;  // discrete_iid: (p, value)

    bool continuous() const { return family != Family::discrete_iid; }
};

struct MallowsSpec {
    Rat phi; // dispersion in (0, 1]
    RankDistance dist;
    TieBreak tie_break = TieBreak::index;
};

struct NoiseTechSpec {
    NoiseSpec noise;
    TieBreak tie_break = TieBreak::index;
};

struct TableEntry {
    ValueVector x;
    std::vector<std::pair<Ranking, Rat>> pmf;
};

struct TableSpec {
    std::vector<TableEntry> entries;
};

struct DeterministicSpec {
    std::vector<std::pair<ValueVector, Ranking>> entries;
    std::optional<Ranking> fallback; // used when x is not listed
};

// Candidates whose value appears in `values` are dealt uniformly at random
// into distinct positions of the top `window`; everyone else fills the rest
// uniformly.
struct ShortlistSpec {
    std::vector<Rat> values;
    int window = 1;
};

// Value-addressed tiers listed top to bottom; candidates not matched by any
// tier form an implicit final tier. Inside a tier candidates are shuffled or
// sorted by value; equal values within a sorted tier are shuffled.
struct TieredSpec {
    enum class Order { uniform, asc, desc };
    struct Tier {
        std::vector<Rat> values;
        Order order = Order::uniform;
    };
    std::vector<Tier> tiers;
};

struct RankingTechnology {
    std::string id;
    std::variant<MallowsSpec, NoiseTechSpec, TableSpec, DeterministicSpec, ShortlistSpec,
                 TieredSpec>
        spec;

    bool stochastic() const;
    // Distribution commutes with candidate relabelings up to renaming
    // equal-valued candidates; value-addressed kinds qualify, identity-addressed
    // (table, deterministic) do not.
    bool value_equivariant() const;
    bool exactly_enumerable() const; // false only for continuous noise
    std::string kind_name() const;

    void validate() const;
};

RankingTechnology make_mallows(std::string id, Rat phi, RankDistance dist,
                               TieBreak tie_break = TieBreak::index);

struct TechCaps {
    int pmf_m_cap = 5;                 // m! enumeration kinds (mallows, discrete noise)
    int est_m_cap = 4;                 // estimated pmfs for continuous noise
    long long support_cap = 1000000;   // structured/table support size
    long long est_samples = 1000000;   // sample count for estimated pmfs
};

// Candidates sorted by value, descending. Ties broken by ascending index, or
// shuffled uniformly when mode is TieBreak::uniform (rng required).
Ranking ground_truth_ranking(const ValueVector& x, TieBreak mode = TieBreak::index,
                             std::mt19937_64* rng = nullptr);

// All rankings that sort x descending (every order of each tie block).
std::vector<Ranking> ground_truth_orders(const ValueVector& x, long long cap);

struct PmfCell {
    Ranking r;
    Rat p;
};
struct EstCell {
    Ranking r;
    double p = 0, se = 0;
};

struct RankingPmf {
    bool exact = true;
    std::vector<PmfCell> cells;     // support only, probabilities sum to 1
    std::vector<EstCell> est_cells; // estimated pmfs (continuous noise)
    long long samples = 0;
};

// Exact rational pmf where the kind admits one; continuous noise yields an
// estimated pmf from at least caps.est_samples draws with per-cell standard
// errors.
RankingPmf exact_pmf(const RankingTechnology& t, const ValueVector& x, const TechCaps& caps = {},
                     uint64_t est_seed = 20260814u);

Ranking sample_ranking(const RankingTechnology& t, const ValueVector& x, std::mt19937_64& rng,
                       const TechCaps& caps = {});

// Exact conditional model of a technology at a fixed value vector, queried by
// revealed prefix. Backs the exact game engine. Structured kinds (shortlist,
// tiered) answer combinatorially and scale to large m; the others enumerate
// their support.
class SupportModel {
public:
    virtual ~SupportModel() = default;
    virtual int m() const = 0;
    // Distribution of the element at position |prefix| given that the ranking
    // starts with exactly `prefix`; candidates ascending, probabilities sum
    // to 1. Throws InputError on a prefix outside the support.
    virtual std::vector<std::pair<int, Rat>> next_given_prefix(const std::vector<int>& prefix) const = 0;
};

std::shared_ptr<const SupportModel> make_support_model(const RankingTechnology& t,
                                                       const ValueVector& x,
                                                       const TechCaps& caps);

// Shared support models keyed by (technology id, value vector).
class ModelCache {
public:
    explicit ModelCache(TechCaps caps = {}) : caps_(caps) {}
    std::shared_ptr<const SupportModel> get(const RankingTechnology& t, const ValueVector& x);
    const TechCaps& caps() const { return caps_; }

private:
    TechCaps caps_;
    std::unordered_map<std::string, std::shared_ptr<const SupportModel>> models_;
};

} // namespace rsdlab
