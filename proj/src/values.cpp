#include "rsdlab/values.hpp"

#include "rsdlab/errors.hpp"
#include "rsdlab/rng.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace rsdlab {

namespace {

void check_values(const ValueVector& x) {
    for (const auto& v : x)
        if (v < 0) throw InputError("candidate values must be non-negative");
}

void check_prob_sum(const Rat& total) {
    if (total != 1) throw InputError("probabilities must sum to 1, got " + rat_str(total));
}

ValueVector sorted_desc(ValueVector x) {
    std::sort(x.begin(), x.end(), std::greater<Rat>());
    return x;
}

// multinomial coefficient m! / prod(counts!)
Rat multinomial(int m, const std::vector<int>& counts) {
    mpz_class num;
    mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(m));
    mpz_class den(1);
    for (int c : counts) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(c));
        den *= f;
    }
    Rat r(num, den);
    r.canonicalize();
    return r;
}

} // namespace

ValueDistribution ValueDistribution::explicit_support(std::vector<ValueAtom> atoms,
                                                      bool declared_permutation_invariant) {
    if (atoms.empty()) throw InputError("value support must not be empty");
    ValueDistribution d;
    d.kind_ = Kind::explicit_support;
    d.m_ = static_cast<int>(atoms[0].x.size());
    Rat total(0);
    std::map<std::string, int> seen;
    for (const auto& a : atoms) {
        if (static_cast<int>(a.x.size()) != d.m_)
            throw InputError("value vectors of inconsistent length");
        if (a.p <= 0) throw InputError("support probabilities must be positive");
        check_values(a.x);
        if (++seen[vec_key(a.x)] > 1) throw InputError("duplicate value vector in support");
        total += a.p;
    }
    check_prob_sum(total);
    d.atoms_ = std::move(atoms);
    d.permutation_invariant_ = declared_permutation_invariant;
    if (declared_permutation_invariant && !d.verify_permutation_invariance())
        throw InputError("support declared permutation-invariant but is not");
    return d;
}

ValueDistribution ValueDistribution::iid(int m, std::vector<std::pair<Rat, Rat>> marginal) {
    if (m < 1) throw InputError("m must be positive");
    if (marginal.empty()) throw InputError("iid marginal must not be empty");
    Rat total(0);
    for (auto& [p, v] : marginal) {
        if (p <= 0) throw InputError("marginal probabilities must be positive");
        if (v < 0) throw InputError("candidate values must be non-negative");
        total += p;
    }
    check_prob_sum(total);
    for (size_t i = 0; i < marginal.size(); ++i)
        for (size_t j = i + 1; j < marginal.size(); ++j)
            if (marginal[i].second == marginal[j].second)
                throw InputError("iid marginal has duplicate values");
    ValueDistribution d;
    d.kind_ = Kind::iid;
    d.m_ = m;
    d.marginal_ = std::move(marginal);
    d.permutation_invariant_ = true;
    return d;
}

ValueDistribution ValueDistribution::random_pair(int m, Rat high, Rat low) {
    if (m < 2) throw InputError("random_pair needs m >= 2");
    if (high < 0 || low < 0) throw InputError("candidate values must be non-negative");
    ValueDistribution d;
    d.kind_ = Kind::random_pair;
    d.m_ = m;
    d.high_ = std::move(high);
    d.low_ = std::move(low);
    d.permutation_invariant_ = true;
    return d;
}

ValueDistribution ValueDistribution::shuffled_multiset(std::vector<Rat> values) {
    if (values.empty()) throw InputError("value multiset must not be empty");
    check_values(values);
    ValueDistribution d;
    d.kind_ = Kind::shuffled_multiset;
    d.m_ = static_cast<int>(values.size());
    d.multiset_ = std::move(values);
    d.permutation_invariant_ = true;
    return d;
}

bool ValueDistribution::verify_permutation_invariance(long long atom_cap) const {
    if (kind_ != Kind::explicit_support) return true;
    if (static_cast<long long>(atoms_.size()) * m_ > atom_cap)
        throw ResourceLimitError("permutation invariance check too large",
                                 static_cast<long long>(atoms_.size()) * m_);
    std::map<std::string, Rat> mass;
    for (const auto& a : atoms_) mass[vec_key(a.x)] = a.p;
    // closure under adjacent transpositions with equal mass generates S_m
    for (const auto& a : atoms_) {
        for (int i = 0; i + 1 < m_; ++i) {
            ValueVector y = a.x;
            std::swap(y[i], y[i + 1]);
            auto it = mass.find(vec_key(y));
            if (it == mass.end() || it->second != a.p) return false;
        }
    }
    return true;
}

std::vector<ValueAtom> ValueDistribution::support(long long cap) const {
    switch (kind_) {
    case Kind::explicit_support:
        return atoms_;
    case Kind::iid: {
        const long long k = static_cast<long long>(marginal_.size());
        long long total = 1;
        for (int i = 0; i < m_; ++i) {
            total *= k;
            if (total > cap) throw ResourceLimitError("iid support too large", total);
        }
        std::vector<ValueAtom> out;
        out.reserve(total);
        std::vector<int> idx(m_, 0);
        for (;;) {
            ValueAtom a;
            a.p = 1;
            a.x.resize(m_);
            for (int c = 0; c < m_; ++c) {
                a.p *= marginal_[idx[c]].first;
                a.x[c] = marginal_[idx[c]].second;
            }
            out.push_back(std::move(a));
            int c = m_ - 1;
            while (c >= 0 && ++idx[c] == static_cast<int>(marginal_.size())) idx[c--] = 0;
            if (c < 0) break;
        }
        return out;
    }
    case Kind::random_pair: {
        long long total = static_cast<long long>(m_) * (m_ - 1);
        if (total > cap) throw ResourceLimitError("random_pair support too large", total);
        std::vector<ValueAtom> out;
        out.reserve(total);
        Rat p(1, static_cast<unsigned long>(total));
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) {
                if (i == j) continue;
                ValueAtom a;
                a.p = p;
                a.x.assign(m_, Rat(0));
                a.x[i] = high_;
                a.x[j] = low_;
                out.push_back(std::move(a));
            }
        return out;
    }
    case Kind::shuffled_multiset: {
        // distinct arrangements of the multiset, uniformly
        std::vector<ValueAtom> out;
        ValueVector sorted = multiset_;
        std::sort(sorted.begin(), sorted.end());
        long long count = 0;
        do {
            if (++count > cap) throw ResourceLimitError("multiset support too large", count);
            out.push_back(ValueAtom{Rat(1), sorted});
        } while (std::next_permutation(sorted.begin(), sorted.end()));
        Rat p(1, static_cast<unsigned long>(out.size()));
        for (auto& a : out) a.p = p;
        return out;
    }
    }
    throw InputError("bad value distribution kind");
}

std::vector<ValueAtom> ValueDistribution::orbit_support(long long cap) const {
    switch (kind_) {
    case Kind::explicit_support: {
        std::map<std::string, ValueAtom> orbits;
        for (const auto& a : atoms_) {
            ValueVector rep = sorted_desc(a.x);
            auto key = vec_key(rep);
            auto it = orbits.find(key);
            if (it == orbits.end())
                orbits.emplace(key, ValueAtom{a.p, std::move(rep)});
            else
                it->second.p += a.p;
        }
        std::vector<ValueAtom> out;
        out.reserve(orbits.size());
        for (auto& [k, a] : orbits) out.push_back(std::move(a));
        return out;
    }
    case Kind::iid: {
        // orbit = multiset of marginal values; mass = multinomial * prod p^count
        const int k = static_cast<int>(marginal_.size());
        std::vector<ValueAtom> out;
        std::vector<int> counts(k, 0);
        std::function<void(int, int)> rec = [&](int atom, int left) {
            if (atom == k - 1) {
                counts[atom] = left;
                ValueAtom a;
                a.p = multinomial(m_, counts);
                for (int i = 0; i < k; ++i)
                    for (int c = 0; c < counts[i]; ++c) a.x.push_back(marginal_[i].second);
                for (int i = 0; i < k; ++i) a.p *= rat_pow(marginal_[i].first,
                                                           static_cast<unsigned long>(counts[i]));
                a.x = sorted_desc(std::move(a.x));
                out.push_back(std::move(a));
                if (static_cast<long long>(out.size()) > cap)
                    throw ResourceLimitError("iid orbit support too large",
                                             static_cast<long long>(out.size()));
                return;
            }
            for (int c = 0; c <= left; ++c) {
                counts[atom] = c;
                rec(atom + 1, left - c);
            }
        };
        rec(0, m_);
        return out;
    }
    case Kind::random_pair: {
        ValueAtom a;
        a.p = 1;
        a.x.assign(m_, Rat(0));
        a.x[0] = high_;
        a.x[1] = low_;
        a.x = sorted_desc(std::move(a.x));
        return {a};
    }
    case Kind::shuffled_multiset: {
        ValueAtom a;
        a.p = 1;
        a.x = sorted_desc(multiset_);
        return {a};
    }
    }
    throw InputError("bad value distribution kind");
}

ValueVector ValueDistribution::sample(std::mt19937_64& rng) const {
    ValueVector x;
    sample_into(rng, x);
    return x;
}

void ValueDistribution::sample_into(std::mt19937_64& rng, ValueVector& x) const {
    x.resize(m_);
    switch (kind_) {
    case Kind::explicit_support: {
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        double acc = 0;
        const ValueVector* pick = &atoms_.back().x;
        for (const auto& a : atoms_) {
            acc += rat_double(a.p);
            if (u <= acc) {
                pick = &a.x;
                break;
            }
        }
        for (int c = 0; c < m_; ++c) x[c] = (*pick)[c];
        return;
    }
    case Kind::iid: {
        for (int c = 0; c < m_; ++c) {
            double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            double acc = 0;
            x[c] = marginal_.back().second;
            for (const auto& [p, v] : marginal_) {
                acc += rat_double(p);
                if (u <= acc) {
                    x[c] = v;
                    break;
                }
            }
        }
        return;
    }
    case Kind::random_pair: {
        int i = uniform_int(rng, 0, m_ - 1);
        int j = uniform_int(rng, 0, m_ - 2);
        if (j >= i) ++j;
        for (int c = 0; c < m_; ++c) x[c] = 0;
        x[i] = high_;
        x[j] = low_;
        return;
    }
    case Kind::shuffled_multiset: {
        for (int c = 0; c < m_; ++c) x[c] = multiset_[c];
        for (int i = m_ - 1; i > 0; --i) std::swap(x[i], x[uniform_int(rng, 0, i)]);
        return;
    }
    }
    throw InputError("bad value distribution kind");
}

} // namespace rsdlab
