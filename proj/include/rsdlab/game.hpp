#pragma once

#include "rsdlab/technology.hpp"
#include "rsdlab/values.hpp"

#include <map>
#include <string>
#include <vector>

namespace rsdlab {

enum class Mechanism { obedience_constrained, unconstrained };

std::string mechanism_name(Mechanism m);
Mechanism mechanism_from_name(const std::string& s);

// What a firm does with her sample once it is her turn. Obedient takes the
// top remaining candidate of her own sample; the others are test instruments
// for the unconstrained mechanism.
struct SelectionPolicy {
    enum class Kind { obedient, fixed_candidate_preference, qth_available, table_lookup };
    Kind kind = Kind::obedient;
    std::vector<int> preference; // candidates, most preferred first; fall back to obedient
    int q = 1;                   // 1-based rank among remaining candidates, clamped to the end
    std::map<std::string, int> table; // history key -> candidate; missing keys act obedient

    // True when the pick depends only on positions within the sample, never
    // on candidate identities. Orbit-collapsed enumeration requires this.
    bool candidate_blind() const {
        return kind == Kind::obedient || kind == Kind::qth_available;
    }

    static SelectionPolicy obedient() { return {}; }
    static SelectionPolicy qth(int q);
    static SelectionPolicy prefer(std::vector<int> candidates);

    std::string describe() const;
};

struct AdviceSpace {
    std::vector<RankingTechnology> common; // A, shared samples by technology id
    // Per firm, ids of the common technologies she may choose; empty list of
    // lists means every firm may access all of A.
    std::vector<std::vector<std::string>> common_access;
    std::vector<std::vector<RankingTechnology>> idiosyncratic; // H_i, per firm
};

struct GameSpec {
    int n = 0, m = 0;
    ValueDistribution values;
    AdviceSpace advice;
    Mechanism mechanism = Mechanism::obedience_constrained;

    void validate() const;

    // R_i: accessible common technologies followed by the firm's own
    // idiosyncratic ones, in declaration order.
    std::vector<const RankingTechnology*> strategy_set(int firm) const;
    const RankingTechnology* tech_by_id(const std::string& id) const; // null if absent
    bool tech_is_common(const std::string& id) const;
};

struct Profile {
    std::vector<std::string> choices;      // technology id per firm
    std::vector<SelectionPolicy> policies; // empty means all obedient

    const SelectionPolicy& policy(int firm) const;
    std::string key() const; // deterministic map key over choices + policies
};

Profile uniform_profile(const GameSpec& spec, const std::string& tech_id);

void validate_profile(const GameSpec& spec, const Profile& p);

} // namespace rsdlab
