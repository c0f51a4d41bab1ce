#include "rsdlab/ranking.hpp"

#include "rsdlab/errors.hpp"

#include <algorithm>
#include <numeric>

namespace rsdlab {

Ranking::Ranking(std::vector<int> order) : order_(std::move(order)) {
    std::vector<char> seen(order_.size(), 0);
    for (int c : order_) {
        if (c < 0 || c >= static_cast<int>(order_.size()) || seen[c])
            throw InputError("not a permutation of 0..m-1");
        seen[c] = 1;
    }
}

Ranking Ranking::identity(int m) {
    std::vector<int> v(m);
    std::iota(v.begin(), v.end(), 0);
    return Ranking(std::move(v));
}

std::vector<int> Ranking::positions() const {
    std::vector<int> pos(order_.size());
    for (int p = 0; p < m(); ++p) pos[order_[p]] = p;
    return pos;
}

PartialRanking::PartialRanking(Ranking base)
    : base_(std::move(base)), removed_(base_.m(), 0), remaining_(base_.m()) {}

PartialRanking::PartialRanking(Ranking base, const std::vector<int>& removed)
    : base_(std::move(base)), removed_(base_.m(), 0) {
    for (int c : removed) {
        if (c < 0 || c >= base_.m()) throw InputError("removed candidate out of range");
        removed_[c] = 1;
    }
    remaining_ = base_.m();
    for (char f : removed_) remaining_ -= f;
}

std::vector<int> PartialRanking::sequence() const {
    std::vector<int> out;
    out.reserve(remaining_);
    for (int p = 0; p < base_.m(); ++p)
        if (!removed_[base_.at(p)]) out.push_back(base_.at(p));
    return out;
}

int PartialRanking::at(int k) const {
    if (k < 0 || k >= remaining_) throw InputError("partial ranking index out of range");
    int seen = 0;
    for (int p = 0; p < base_.m(); ++p) {
        int c = base_.at(p);
        if (removed_[c]) continue;
        if (seen++ == k) return c;
    }
    throw InputError("partial ranking index out of range");
}

PartialRanking PartialRanking::without(const std::vector<int>& more) const {
    std::vector<int> all;
    for (int c = 0; c < base_.m(); ++c)
        if (removed_[c]) all.push_back(c);
    all.insert(all.end(), more.begin(), more.end());
    return PartialRanking(base_, all);
}

PartialRanking restrict(const Ranking& r, const std::vector<int>& removed) {
    return PartialRanking(r, removed);
}

void for_each_ranking(int m, const std::function<void(const Ranking&)>& fn) {
    std::vector<int> v(m);
    std::iota(v.begin(), v.end(), 0);
    do {
        fn(Ranking(v));
    } while (std::next_permutation(v.begin(), v.end()));
}

long long factorial_checked(int m, long long cap) {
    long long f = 1;
    for (int i = 2; i <= m; ++i) {
        f *= i;
        if (f > cap) throw ResourceLimitError("factorial exceeds budget", f);
    }
    return f;
}

} // namespace rsdlab
