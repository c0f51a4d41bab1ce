#include "rsdlab/rank_distance.hpp"

#include "rsdlab/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace rsdlab {

RankDistance RankDistance::gsum(std::vector<Rat> table) {
    if (table.empty()) throw InputError("gsum table must not be empty");
    for (size_t i = 0; i < table.size(); ++i) {
        if (table[i] < 0) throw InputError("gsum table must be non-negative");
        if (i > 0 && table[i] < table[i - 1])
            throw InputError("gsum table must be non-decreasing");
        if (i > 1 && table[i] - table[i - 1] < table[i - 1] - table[i - 2])
            throw InputError("gsum table must be convex");
    }
    return {DistanceKind::gsum, std::move(table)};
}

bool RankDistance::integer_valued() const {
    if (kind != DistanceKind::gsum) return true;
    for (const auto& v : g)
        if (v.get_den() != 1) return false;
    return true;
}

std::string distance_kind_name(DistanceKind k) {
    switch (k) {
    case DistanceKind::kendall_tau: return "kendall_tau";
    case DistanceKind::spearman_rho: return "spearman_rho";
    case DistanceKind::spearman_footrule: return "spearman_footrule";
    case DistanceKind::cayley: return "cayley";
    case DistanceKind::hamming: return "hamming";
    case DistanceKind::gsum: return "gsum";
    }
    return "?";
}

DistanceKind distance_kind_from_name(const std::string& s) {
    if (s == "kendall_tau") return DistanceKind::kendall_tau;
    if (s == "spearman_rho") return DistanceKind::spearman_rho;
    if (s == "spearman_footrule") return DistanceKind::spearman_footrule;
    if (s == "cayley") return DistanceKind::cayley;
    if (s == "hamming") return DistanceKind::hamming;
    if (s == "gsum") return DistanceKind::gsum;
    throw InputError("unknown distance kind: " + s);
}

Rat distance(const RankDistance& d, const Ranking& a, const Ranking& b) {
    if (a.m() != b.m()) throw InputError("rankings of different sizes");
    const int m = a.m();
    switch (d.kind) {
    case DistanceKind::kendall_tau: {
        auto pa = a.positions(), pb = b.positions();
        long long disc = 0;
        for (int c = 0; c < m; ++c)
            for (int e = c + 1; e < m; ++e)
                if ((pa[c] < pa[e]) != (pb[c] < pb[e])) ++disc;
        return Rat(static_cast<long>(disc));
    }
    case DistanceKind::spearman_rho: {
        auto pa = a.positions(), pb = b.positions();
        long long s = 0;
        for (int c = 0; c < m; ++c) {
            long long t = pa[c] - pb[c];
            s += t * t;
        }
        return Rat(static_cast<long>(s));
    }
    case DistanceKind::spearman_footrule: {
        auto pa = a.positions(), pb = b.positions();
        long long s = 0;
        for (int c = 0; c < m; ++c) s += std::abs(pa[c] - pb[c]);
        return Rat(static_cast<long>(s));
    }
    case DistanceKind::cayley: {
        // cycles of the candidate map a∘b⁻¹ (candidate at b's position p -> a's)
        std::vector<int> f(m);
        for (int p = 0; p < m; ++p) f[b.at(p)] = a.at(p);
        std::vector<char> seen(m, 0);
        int cycles = 0;
        for (int c = 0; c < m; ++c) {
            if (seen[c]) continue;
            ++cycles;
            for (int j = c; !seen[j]; j = f[j]) seen[j] = 1;
        }
        return Rat(static_cast<long>(m - cycles));
    }
    case DistanceKind::hamming: {
        int s = 0;
        for (int p = 0; p < m; ++p) s += a.at(p) != b.at(p);
        return Rat(static_cast<long>(s));
    }
    case DistanceKind::gsum: {
        if (static_cast<int>(d.g.size()) < m)
            throw InputError("gsum table shorter than the displacement range");
        auto pa = a.positions(), pb = b.positions();
        Rat s(0);
        for (int c = 0; c < m; ++c) s += d.g[std::abs(pa[c] - pb[c])];
        return s;
    }
    }
    throw InputError("bad distance kind");
}

InversionMonotoneResult is_inversion_monotone(const RankDistance& d, int m,
                                              const Ranking& ground_truth, int m_cap) {
    if (m < 1) throw InputError("m must be positive");
    if (m > m_cap)
        throw ResourceLimitError("inversion monotonicity check over S_" + std::to_string(m) +
                                     " exceeds the cap",
                                 m);
    if (ground_truth.m() != m) throw InputError("ground truth size mismatch");
    auto gt_pos = ground_truth.positions();

    InversionMonotoneResult res;
    res.monotone = true;
    for_each_ranking(m, [&](const Ranking& pi) {
        if (!res.monotone) return;
        auto pos = pi.positions();
        for (int a = 0; a < m && res.monotone; ++a) {
            for (int b = a + 1; b < m && res.monotone; ++b) {
                // k is the ground-truth-higher candidate of {a, b}
                int k = gt_pos[a] < gt_pos[b] ? a : b;
                int l = k == a ? b : a;
                if (pos[k] > pos[l]) continue; // pair not in ground-truth order
                std::vector<int> sw = pi.order();
                std::swap(sw[pos[k]], sw[pos[l]]);
                Ranking swapped(std::move(sw));
                Rat before = distance(d, pi, ground_truth);
                Rat after = distance(d, swapped, ground_truth);
                ++res.swaps_checked;
                if (before > after) {
                    res.monotone = false;
                    res.violation = InversionMonotoneViolation{pi, swapped, k, l, before, after};
                }
            }
        }
    });
    return res;
}

} // namespace rsdlab
