#include "rsdlab/game.hpp"

#include "rsdlab/errors.hpp"

#include <algorithm>
#include <set>

namespace rsdlab {

std::string mechanism_name(Mechanism m) {
    return m == Mechanism::obedience_constrained ? "obedience_constrained" : "unconstrained";
}

Mechanism mechanism_from_name(const std::string& s) {
    if (s == "obedience_constrained") return Mechanism::obedience_constrained;
    if (s == "unconstrained") return Mechanism::unconstrained;
    throw InputError("unknown mechanism: " + s);
}

SelectionPolicy SelectionPolicy::qth(int q) {
    if (q < 1) throw InputError("qth_available rank must be at least 1");
    SelectionPolicy p;
    p.kind = Kind::qth_available;
    p.q = q;
    return p;
}

SelectionPolicy SelectionPolicy::prefer(std::vector<int> candidates) {
    if (candidates.empty()) throw InputError("fixed preference needs candidates");
    SelectionPolicy p;
    p.kind = Kind::fixed_candidate_preference;
    p.preference = std::move(candidates);
    return p;
}

std::string SelectionPolicy::describe() const {
    switch (kind) {
    case Kind::obedient: return "obedient";
    case Kind::qth_available: return "qth(" + std::to_string(q) + ")";
    case Kind::fixed_candidate_preference: {
        std::string s = "prefer(";
        for (size_t i = 0; i < preference.size(); ++i)
            s += (i ? "," : "") + std::to_string(preference[i] + 1);
        return s + ")";
    }
    case Kind::table_lookup: return "table_lookup";
    }
    return "?";
}

void GameSpec::validate() const {
    if (n < 1) throw InputError("need at least one firm");
    if (m < 1) throw InputError("need at least one candidate");
    if (m < n) throw InputError("fewer candidates than firms: every firm must hire");
    if (values.m() != m) throw InputError("value distribution length differs from m");
    if (!advice.common_access.empty() && static_cast<int>(advice.common_access.size()) != n)
        throw InputError("common_access must list every firm or be absent");
    if (!advice.idiosyncratic.empty() && static_cast<int>(advice.idiosyncratic.size()) != n)
        throw InputError("idiosyncratic spaces must list every firm or be absent");

    std::set<std::string> ids;
    auto add = [&](const RankingTechnology& t) {
        t.validate();
        if (!ids.insert(t.id).second) throw InputError("duplicate technology id: " + t.id);
    };
    std::set<std::string> common_ids;
    for (const auto& t : advice.common) {
        add(t);
        common_ids.insert(t.id);
    }
    for (const auto& h : advice.idiosyncratic)
        for (const auto& t : h) add(t);

    for (int i = 0; i < n; ++i) {
        if (!advice.common_access.empty())
            for (const auto& id : advice.common_access[i])
                if (!common_ids.count(id))
                    throw InputError("common_access names unknown technology: " + id);
        if (strategy_set(i).empty())
            throw InputError("firm " + std::to_string(i + 1) + " has an empty strategy set");
    }
}

std::vector<const RankingTechnology*> GameSpec::strategy_set(int firm) const {
    if (firm < 0 || firm >= n) throw InputError("firm index out of range");
    std::vector<const RankingTechnology*> out;
    if (advice.common_access.empty()) {
        for (const auto& t : advice.common) out.push_back(&t);
    } else {
        for (const auto& id : advice.common_access[firm])
            for (const auto& t : advice.common)
                if (t.id == id) out.push_back(&t);
    }
    if (!advice.idiosyncratic.empty())
        for (const auto& t : advice.idiosyncratic[firm]) out.push_back(&t);
    return out;
}

const RankingTechnology* GameSpec::tech_by_id(const std::string& id) const {
    for (const auto& t : advice.common)
        if (t.id == id) return &t;
    for (const auto& h : advice.idiosyncratic)
        for (const auto& t : h)
            if (t.id == id) return &t;
    return nullptr;
}

bool GameSpec::tech_is_common(const std::string& id) const {
    for (const auto& t : advice.common)
        if (t.id == id) return true;
    return false;
}

const SelectionPolicy& Profile::policy(int firm) const {
    static const SelectionPolicy obedient{};
    if (policies.empty()) return obedient;
    return policies[firm];
}

std::string Profile::key() const {
    std::string k;
    for (size_t i = 0; i < choices.size(); ++i) {
        if (i) k += '|';
        k += choices[i];
        if (!policies.empty() && policies[i].kind != SelectionPolicy::Kind::obedient)
            k += ':' + policies[i].describe();
    }
    return k;
}

Profile uniform_profile(const GameSpec& spec, const std::string& tech_id) {
    Profile p;
    p.choices.assign(spec.n, tech_id);
    return p;
}

void validate_profile(const GameSpec& spec, const Profile& p) {
    if (static_cast<int>(p.choices.size()) != spec.n)
        throw InputError("profile must pick a technology for every firm");
    if (!p.policies.empty() && static_cast<int>(p.policies.size()) != spec.n)
        throw InputError("profile policies must cover every firm or be absent");
    for (int i = 0; i < spec.n; ++i) {
        auto set = spec.strategy_set(i);
        bool ok = false;
        for (const auto* t : set) ok = ok || t->id == p.choices[i];
        if (!ok)
            throw InputError("firm " + std::to_string(i + 1) + " cannot choose " + p.choices[i]);
        const auto& pol = p.policy(i);
        if (spec.mechanism == Mechanism::obedience_constrained &&
            pol.kind != SelectionPolicy::Kind::obedient)
            throw InputError("obedience-constrained profiles must use the obedient policy");
        if (pol.kind == SelectionPolicy::Kind::fixed_candidate_preference)
            for (int c : pol.preference)
                if (c < 0 || c >= spec.m) throw InputError("preferred candidate out of range");
        if (pol.kind == SelectionPolicy::Kind::qth_available && pol.q > spec.m)
            throw InputError("qth_available rank beyond candidate count");
    }
}

} // namespace rsdlab
