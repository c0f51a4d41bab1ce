#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace rsdlab {

// A strict total order over candidates 0..m-1. order()[p] is the candidate in
// position p, position 0 being the most preferred. User-facing formats are
// 1-based; everything in memory is 0-based.
class Ranking {
public:
    Ranking() = default;
    explicit Ranking(std::vector<int> order);
    static Ranking identity(int m);

    int m() const { return static_cast<int>(order_.size()); }
    int at(int pos) const { return order_[pos]; }
    const std::vector<int>& order() const { return order_; }
    // positions()[c] is the position of candidate c.
    std::vector<int> positions() const;

    bool operator==(const Ranking& o) const { return order_ == o.order_; }
    bool operator!=(const Ranking& o) const { return order_ != o.order_; }
    bool operator<(const Ranking& o) const { return order_ < o.order_; }

private:
    std::vector<int> order_;
};

// A ranking with a set of candidates struck out; what remains keeps the
// original candidate ids and relative order.
class PartialRanking {
public:
    explicit PartialRanking(Ranking base);
    PartialRanking(Ranking base, const std::vector<int>& removed);

    const Ranking& base() const { return base_; }
    const std::vector<char>& removed_mask() const { return removed_; }
    int remaining() const { return remaining_; }
    // Candidates still present, most preferred first.
    std::vector<int> sequence() const;
    // k-th remaining candidate (0-based); throws if out of range.
    int at(int k) const;

    PartialRanking without(const std::vector<int>& more) const;

private:
    Ranking base_;
    std::vector<char> removed_;
    int remaining_ = 0;
};

PartialRanking restrict(const Ranking& r, const std::vector<int>& removed);

// Visits all m! rankings in lexicographic order of their order() vectors.
void for_each_ranking(int m, const std::function<void(const Ranking&)>& fn);

long long factorial_checked(int m, long long cap); // throws ResourceLimitError past cap

struct RankingHash {
    size_t operator()(const Ranking& r) const {
        size_t h = 1469598103934665603ull;
        for (int c : r.order()) {
            h ^= static_cast<size_t>(c) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

} // namespace rsdlab
