#include "rsdlab/json_io.hpp"

#include "rsdlab/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rsdlab {

namespace {

const Json& need(const Json& j, const char* key) {
    if (!j.is_object()) throw InputError(std::string("expected an object around '") + key + "'");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("missing field '") + key + "'");
    return *it;
}

std::string need_str(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_string()) throw InputError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

int need_int(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_number_integer())
        throw InputError(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string tie_break_name(TieBreak t) { return t == TieBreak::index ? "index" : "uniform"; }

TieBreak tie_break_from(const std::string& s) {
    if (s == "index") return TieBreak::index;
    if (s == "uniform") return TieBreak::uniform;
    throw InputError("unknown tie_break: " + s);
}

std::string noise_family_name(NoiseSpec::Family f) {
    switch (f) {
    case NoiseSpec::Family::gaussian: return "gaussian";
    case NoiseSpec::Family::laplacian: return "laplacian";
    case NoiseSpec::Family::uniform: return "uniform";
    case NoiseSpec::Family::discrete_iid: return "discrete_iid";
    }
    return "?";
}

NoiseSpec::Family noise_family_from(const std::string& s) {
    if (s == "gaussian") return NoiseSpec::Family::gaussian;
    if (s == "laplacian") return NoiseSpec::Family::laplacian;
    if (s == "uniform") return NoiseSpec::Family::uniform;
    if (s == "discrete_iid") return NoiseSpec::Family::discrete_iid;
    throw InputError("unknown noise family: " + s);
}

std::string tier_order_name(TieredSpec::Order o) {
    switch (o) {
    case TieredSpec::Order::uniform: return "uniform";
    case TieredSpec::Order::asc: return "asc";
    case TieredSpec::Order::desc: return "desc";
    }
    return "?";
}

TieredSpec::Order tier_order_from(const std::string& s) {
    if (s == "uniform") return TieredSpec::Order::uniform;
    if (s == "asc") return TieredSpec::Order::asc;
    if (s == "desc") return TieredSpec::Order::desc;
    throw InputError("unknown tier order: " + s);
}

Json rats_to_json(const std::vector<Rat>& v) {
    Json a = Json::array();
    for (const Rat& r : v) a.push_back(rat_str(r));
    return a;
}

std::vector<Rat> rats_from_json(const Json& j) {
    if (!j.is_array()) throw InputError("expected an array of rationals");
    std::vector<Rat> v;
    v.reserve(j.size());
    for (const Json& e : j) v.push_back(rat_from_json(e));
    return v;
}

Json tuple_to_json(const ConsistencyTuple& t) {
    Json j;
    j["positions"] = Json::array({t.i + 1, t.j + 1});
    j["candidates"] = Json::array({t.k + 1, t.l + 1});
    j["correct"] = ranking_to_json(t.correct);
    j["incorrect"] = ranking_to_json(t.incorrect);
    j["p_correct"] = rat_str(t.p_correct);
    j["p_incorrect"] = rat_str(t.p_incorrect);
    return j;
}

Json nash_entry_to_json(const NashEntry& e) {
    Json j;
    j["profile"] = profile_to_json(e.profile);
    j["utilities"] = rats_to_json(e.utilities);
    j["gaps"] = rats_to_json(e.gaps);
    j["sw"] = rat_str(e.sw);
    j["max_gap"] = rat_str(e.max_gap);
    return j;
}

Json decision_point_to_json(const IcDecisionPoint& p) {
    Json j;
    j["firm"] = p.firm + 1;
    j["slot"] = p.slot + 1;
    Json hist = Json::array();
    for (const auto& [firm, hire] : p.history)
        hist.push_back(Json{{"firm", firm + 1}, {"hire", hire + 1}});
    j["history"] = hist;
    j["mass"] = rat_str(p.mass);
    j["obedient_value"] = rat_str(p.obedient_value);
    j["best_policy"] = p.best_policy;
    j["best_value"] = rat_str(p.best_value);
    j["gap"] = rat_str(p.gap);
    return j;
}

} // namespace

Json rat_to_json(const Rat& r) { return Json(rat_str(r)); }

Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw InputError("rational must be a string like \"1/3\" or an integer");
}

Json ranking_to_json(const Ranking& r) {
    Json a = Json::array();
    for (int c : r.order()) a.push_back(c + 1);
    return a;
}

Ranking ranking_from_json(const Json& j) {
    if (!j.is_array()) throw InputError("ranking must be an array of 1-based candidates");
    std::vector<int> order;
    order.reserve(j.size());
    for (const Json& e : j) {
        if (!e.is_number_integer()) throw InputError("ranking entries must be integers");
        order.push_back(e.get<int>() - 1);
    }
    return Ranking(std::move(order));
}

Json value_vector_to_json(const ValueVector& x) { return rats_to_json(x); }

ValueVector value_vector_from_json(const Json& j) { return rats_from_json(j); }

Json tech_to_json(const RankingTechnology& t) {
    Json j;
    j["id"] = t.id;
    if (const auto* m = std::get_if<MallowsSpec>(&t.spec)) {
        j["kind"] = "mallows";
        j["phi"] = rat_str(m->phi);
        j["distance"] = distance_kind_name(m->dist.kind);
        if (m->dist.kind == DistanceKind::gsum) j["g"] = rats_to_json(m->dist.g);
        j["tie_break"] = tie_break_name(m->tie_break);
    } else if (const auto* a = std::get_if<NoiseTechSpec>(&t.spec)) {
        j["kind"] = "additive_noise";
        Json nj;
        nj["family"] = noise_family_name(a->noise.family);
        if (a->noise.family == NoiseSpec::Family::discrete_iid) {
            Json atoms = Json::array();
            for (const auto& [p, v] : a->noise.atoms)
                atoms.push_back(Json{{"p", rat_str(p)}, {"value", rat_str(v)}});
            nj["atoms"] = atoms;
        } else {
            nj["param"] = a->noise.param;
        }
        j["noise"] = nj;
        j["tie_break"] = tie_break_name(a->tie_break);
    } else if (const auto* tb = std::get_if<TableSpec>(&t.spec)) {
        j["kind"] = "table";
        Json entries = Json::array();
        for (const auto& e : tb->entries) {
            Json pmf = Json::array();
            for (const auto& [r, p] : e.pmf)
                pmf.push_back(Json{{"ranking", ranking_to_json(r)}, {"p", rat_str(p)}});
            entries.push_back(Json{{"x", rats_to_json(e.x)}, {"pmf", pmf}});
        }
        j["entries"] = entries;
    } else if (const auto* d = std::get_if<DeterministicSpec>(&t.spec)) {
        j["kind"] = "deterministic";
        Json entries = Json::array();
        for (const auto& [x, r] : d->entries)
            entries.push_back(Json{{"x", rats_to_json(x)}, {"ranking", ranking_to_json(r)}});
        j["entries"] = entries;
        if (d->fallback) j["fallback"] = ranking_to_json(*d->fallback);
    } else if (const auto* s = std::get_if<ShortlistSpec>(&t.spec)) {
        j["kind"] = "shortlist";
        j["values"] = rats_to_json(s->values);
        j["window"] = s->window;
    } else if (const auto* ti = std::get_if<TieredSpec>(&t.spec)) {
        j["kind"] = "tiered";
        Json tiers = Json::array();
        for (const auto& tier : ti->tiers)
            tiers.push_back(
                Json{{"values", rats_to_json(tier.values)}, {"order", tier_order_name(tier.order)}});
        j["tiers"] = tiers;
    }
    return j;
}

RankingTechnology tech_from_json(const Json& j) {
    RankingTechnology t;
    t.id = need_str(j, "id");
    const std::string kind = need_str(j, "kind");
    if (kind == "mallows") {
        MallowsSpec m;
        m.phi = rat_from_json(need(j, "phi"));
        DistanceKind dk = distance_kind_from_name(need_str(j, "distance"));
        m.dist = dk == DistanceKind::gsum ? RankDistance::gsum(rats_from_json(need(j, "g")))
                                          : RankDistance{dk, {}};
        if (j.contains("tie_break")) m.tie_break = tie_break_from(need_str(j, "tie_break"));
        t.spec = std::move(m);
    } else if (kind == "additive_noise") {
        NoiseTechSpec a;
        const Json& nj = need(j, "noise");
        a.noise.family = noise_family_from(need_str(nj, "family"));
        if (a.noise.family == NoiseSpec::Family::discrete_iid) {
            for (const Json& e : need(nj, "atoms"))
                a.noise.atoms.emplace_back(rat_from_json(need(e, "p")),
                                           rat_from_json(need(e, "value")));
        } else {
            a.noise.param = need(nj, "param").get<double>();
        }
        if (j.contains("tie_break")) a.tie_break = tie_break_from(need_str(j, "tie_break"));
        t.spec = std::move(a);
    } else if (kind == "table") {
        TableSpec tb;
        for (const Json& e : need(j, "entries")) {
            TableEntry entry;
            entry.x = rats_from_json(need(e, "x"));
            for (const Json& cell : need(e, "pmf"))
                entry.pmf.emplace_back(ranking_from_json(need(cell, "ranking")),
                                       rat_from_json(need(cell, "p")));
            tb.entries.push_back(std::move(entry));
        }
        t.spec = std::move(tb);
    } else if (kind == "deterministic") {
        DeterministicSpec d;
        for (const Json& e : need(j, "entries"))
            d.entries.emplace_back(rats_from_json(need(e, "x")),
                                   ranking_from_json(need(e, "ranking")));
        if (j.contains("fallback")) d.fallback = ranking_from_json(j.at("fallback"));
        t.spec = std::move(d);
    } else if (kind == "shortlist") {
        ShortlistSpec s;
        s.values = rats_from_json(need(j, "values"));
        s.window = need_int(j, "window");
        t.spec = std::move(s);
    } else if (kind == "tiered") {
        TieredSpec ti;
        for (const Json& e : need(j, "tiers")) {
            TieredSpec::Tier tier;
            tier.values = rats_from_json(need(e, "values"));
            if (e.contains("order")) tier.order = tier_order_from(need_str(e, "order"));
            ti.tiers.push_back(std::move(tier));
        }
        t.spec = std::move(ti);
    } else {
        throw InputError("unknown technology kind: " + kind);
    }
    t.validate();
    return t;
}

Json value_dist_to_json(const ValueDistribution& d) {
    Json j;
    switch (d.kind()) {
    case ValueDistribution::Kind::explicit_support: {
        j["kind"] = "explicit";
        Json atoms = Json::array();
        for (const auto& a : d.explicit_atoms())
            atoms.push_back(Json{{"p", rat_str(a.p)}, {"x", rats_to_json(a.x)}});
        j["atoms"] = atoms;
        j["permutation_invariant"] = d.permutation_invariant();
        break;
    }
    case ValueDistribution::Kind::iid: {
        j["kind"] = "iid";
        j["m"] = d.m();
        Json marg = Json::array();
        for (const auto& [p, v] : d.iid_marginal())
            marg.push_back(Json{{"p", rat_str(p)}, {"value", rat_str(v)}});
        j["marginal"] = marg;
        break;
    }
    case ValueDistribution::Kind::random_pair:
        j["kind"] = "random_pair";
        j["m"] = d.m();
        j["high"] = rat_str(d.pair_high());
        j["low"] = rat_str(d.pair_low());
        break;
    case ValueDistribution::Kind::shuffled_multiset:
        j["kind"] = "shuffled_multiset";
        j["values"] = rats_to_json(d.multiset_values());
        break;
    }
    return j;
}

ValueDistribution value_dist_from_json(const Json& j) {
    const std::string kind = need_str(j, "kind");
    if (kind == "explicit") {
        std::vector<ValueAtom> atoms;
        for (const Json& a : need(j, "atoms"))
            atoms.push_back({rat_from_json(need(a, "p")), rats_from_json(need(a, "x"))});
        bool pi = false;
        if (j.contains("permutation_invariant")) pi = j.at("permutation_invariant").get<bool>();
        return ValueDistribution::explicit_support(std::move(atoms), pi);
    }
    if (kind == "iid") {
        std::vector<std::pair<Rat, Rat>> marg;
        for (const Json& e : need(j, "marginal"))
            marg.emplace_back(rat_from_json(need(e, "p")), rat_from_json(need(e, "value")));
        return ValueDistribution::iid(need_int(j, "m"), std::move(marg));
    }
    if (kind == "random_pair")
        return ValueDistribution::random_pair(need_int(j, "m"), rat_from_json(need(j, "high")),
                                              rat_from_json(need(j, "low")));
    if (kind == "shuffled_multiset")
        return ValueDistribution::shuffled_multiset(rats_from_json(need(j, "values")));
    throw InputError("unknown value distribution kind: " + kind);
}

Json policy_to_json(const SelectionPolicy& p) {
    Json j;
    switch (p.kind) {
    case SelectionPolicy::Kind::obedient: j["kind"] = "obedient"; break;
    case SelectionPolicy::Kind::qth_available:
        j["kind"] = "qth_available";
        j["q"] = p.q;
        break;
    case SelectionPolicy::Kind::fixed_candidate_preference: {
        j["kind"] = "fixed_candidate_preference";
        Json pref = Json::array();
        for (int c : p.preference) pref.push_back(c + 1);
        j["preference"] = pref;
        break;
    }
    case SelectionPolicy::Kind::table_lookup: {
        j["kind"] = "table_lookup";
        Json table = Json::object();
        for (const auto& [key, c] : p.table) table[key] = c + 1;
        j["table"] = table;
        break;
    }
    }
    return j;
}

SelectionPolicy policy_from_json(const Json& j) {
    const std::string kind = need_str(j, "kind");
    if (kind == "obedient") return SelectionPolicy::obedient();
    if (kind == "qth_available") return SelectionPolicy::qth(need_int(j, "q"));
    if (kind == "fixed_candidate_preference") {
        std::vector<int> pref;
        for (const Json& e : need(j, "preference")) pref.push_back(e.get<int>() - 1);
        return SelectionPolicy::prefer(std::move(pref));
    }
    if (kind == "table_lookup") {
        SelectionPolicy p;
        p.kind = SelectionPolicy::Kind::table_lookup;
        const Json& table = need(j, "table");
        if (!table.is_object()) throw InputError("policy table must be an object");
        for (auto it = table.begin(); it != table.end(); ++it)
            p.table[it.key()] = it.value().get<int>() - 1;
        return p;
    }
    throw InputError("unknown policy kind: " + kind);
}

Json spec_to_json(const GameSpec& spec) {
    Json j;
    j["firms"] = spec.n;
    j["candidates"] = spec.m;
    j["values"] = value_dist_to_json(spec.values);
    Json adv;
    Json common = Json::array();
    for (const auto& t : spec.advice.common) common.push_back(tech_to_json(t));
    adv["common"] = common;
    if (!spec.advice.common_access.empty()) adv["common_access"] = spec.advice.common_access;
    if (!spec.advice.idiosyncratic.empty()) {
        Json idio = Json::array();
        for (const auto& list : spec.advice.idiosyncratic) {
            Json l = Json::array();
            for (const auto& t : list) l.push_back(tech_to_json(t));
            idio.push_back(l);
        }
        adv["idiosyncratic"] = idio;
    }
    j["advice"] = adv;
    j["mechanism"] = mechanism_name(spec.mechanism);
    return j;
}

GameSpec spec_from_json(const Json& j) {
    GameSpec spec;
    spec.n = need_int(j, "firms");
    spec.m = need_int(j, "candidates");
    spec.values = value_dist_from_json(need(j, "values"));
    const Json& adv = need(j, "advice");
    for (const Json& t : need(adv, "common")) spec.advice.common.push_back(tech_from_json(t));
    if (adv.contains("common_access"))
        spec.advice.common_access =
            adv.at("common_access").get<std::vector<std::vector<std::string>>>();
    if (adv.contains("idiosyncratic")) {
        for (const Json& list : adv.at("idiosyncratic")) {
            std::vector<RankingTechnology> techs;
            for (const Json& t : list) techs.push_back(tech_from_json(t));
            spec.advice.idiosyncratic.push_back(std::move(techs));
        }
    }
    if (j.contains("mechanism")) spec.mechanism = mechanism_from_name(need_str(j, "mechanism"));
    spec.validate();
    return spec;
}

Json profile_to_json(const Profile& p) {
    Json j;
    j["choices"] = p.choices;
    if (!p.policies.empty()) {
        Json pols = Json::array();
        for (const auto& pol : p.policies) pols.push_back(policy_to_json(pol));
        j["policies"] = pols;
    }
    return j;
}

Profile profile_from_json(const Json& j) {
    Profile p;
    p.choices = need(j, "choices").get<std::vector<std::string>>();
    if (j.contains("policies"))
        for (const Json& pol : j.at("policies")) p.policies.push_back(policy_from_json(pol));
    return p;
}

Json outcome_to_json(const OutcomeRecord& rec) {
    Json j;
    j["x"] = rats_to_json(rec.x);
    Json beta = Json::array();
    for (int f : rec.beta) beta.push_back(f + 1);
    j["beta"] = beta;
    Json hires = Json::array();
    for (int c : rec.hires) hires.push_back(c + 1);
    j["hires"] = hires;
    j["hire_values"] = rats_to_json(rec.hire_values);
    Json samples = Json::object();
    for (const auto& [id, r] : rec.tech_samples) samples[id] = ranking_to_json(r);
    j["tech_samples"] = samples;
    return j;
}

Json consistency_to_json(const ConsistencyReport& rep) {
    Json j;
    j["verdict"] = verdict_name(rep.verdict);
    j["statistical"] = rep.statistical;
    if (rep.statistical) {
        j["confidence"] = rep.confidence;
        j["delta_star_est"] = rep.delta_star_est;
        j["delta_star_ucb"] = rep.delta_star_ucb;
        j["samples"] = rep.samples;
        j["tuples_tested"] = rep.tuples_tested;
        j["tuples_inconclusive"] = rep.tuples_inconclusive;
        j["worst_p_value"] = rep.worst_p_value;
    } else {
        j["delta_star"] = rat_str(rep.delta_star);
    }
    j["tuples_checked"] = rep.tuples_checked;
    if (rep.witness) j["witness"] = tuple_to_json(*rep.witness);
    return j;
}

Json delta_to_json(const DeltaReport& rep) {
    Json j;
    j["delta_star"] = rat_str(rep.delta_star);
    j["bound_finite"] = rep.bound_finite;
    if (rep.bound_finite) j["poa_bound"] = rat_str(rep.poa_bound);
    if (!rep.witness_tech.empty()) j["witness_tech"] = rep.witness_tech;
    if (!rep.witness_x.empty()) j["witness_x"] = rats_to_json(rep.witness_x);
    if (rep.witness) j["witness"] = tuple_to_json(*rep.witness);
    j["tuples_checked"] = rep.tuples_checked;
    return j;
}

Json utilities_to_json(const UtilityResult& res, const Profile& profile) {
    Json j;
    j["profile"] = profile_to_json(profile);
    j["method"] = res.exact ? "exact" : "mc";
    if (res.exact) {
        j["utilities"] = rats_to_json(res.utilities);
        j["social_welfare"] = rat_str(res.social_welfare);
        j["atoms_visited"] = res.atoms_visited;
    } else {
        j["utilities"] = res.utilities_mc;
        j["stderrs"] = res.stderrs;
        j["social_welfare"] = res.social_welfare_mc;
        j["sw_stderr"] = res.sw_stderr;
        j["samples"] = res.samples;
    }
    return j;
}

Json equilibrium_to_json(const EquilibriumReport& rep) {
    Json j;
    j["method"] = rep.exact ? "exact" : "mc";
    j["epsilon"] = rat_str(rep.epsilon);
    j["profiles_scanned"] = rep.profiles_scanned;
    Json nash = Json::array();
    for (const auto& e : rep.pure_nash) nash.push_back(nash_entry_to_json(e));
    j["pure_nash"] = nash;
    if (!rep.dominant.empty()) {
        Json dom = Json::array();
        for (size_t i = 0; i < rep.dominant.size(); ++i) {
            Json d;
            d["firm"] = static_cast<int>(i) + 1;
            d["kind"] = dominance_name(rep.dominant[i].kind);
            if (rep.dominant[i].kind != DominanceVerdict::Kind::none)
                d["tech"] = rep.dominant[i].tech;
            dom.push_back(d);
        }
        j["dominant"] = dom;
    }
    Json opt;
    opt["profile"] = profile_to_json(rep.optimum.profile);
    opt["utilities"] = rats_to_json(rep.optimum.utilities);
    opt["sw"] = rat_str(rep.optimum.sw);
    j["optimum"] = opt;
    j["poa_defined"] = rep.poa_defined;
    if (rep.poa_defined) {
        j["worst_ne_sw"] = rat_str(rep.worst_ne_sw);
        j["poa"] = rat_str(rep.poa);
    }
    if (rep.bound_checked) {
        Json b;
        b["delta_star"] = rat_str(rep.delta_star);
        b["finite"] = rep.bound_finite;
        if (rep.bound_finite) b["ne_sw_floor"] = rat_str(rep.ne_sw_floor);
        b["violated"] = rep.bound_violated;
        j["noise_bound"] = b;
    }
    return j;
}

Json mc_ne_to_json(const McNeReport& rep) {
    Json j;
    j["status"] = ne_status_name(rep.status);
    j["epsilon"] = rep.epsilon;
    j["confidence"] = rep.confidence;
    j["samples"] = rep.samples;
    Json gaps = Json::array();
    for (const auto& g : rep.gaps) {
        Json e;
        e["firm"] = g.firm + 1;
        e["tech"] = g.tech;
        e["mean"] = g.mean;
        e["se"] = g.se;
        e["lcb"] = g.lcb;
        e["ucb"] = g.ucb;
        gaps.push_back(e);
    }
    j["gaps"] = gaps;
    j["max_gap_ucb"] = rep.max_gap_ucb;
    return j;
}

Json mc_equilibrium_to_json(const McEquilibriumReport& rep) {
    Json j;
    j["method"] = "mc";
    j["epsilon"] = rep.epsilon;
    j["confidence"] = rep.confidence;
    j["samples"] = rep.samples;
    j["profiles_scanned"] = rep.profiles_scanned;
    Json profiles = Json::array();
    for (const auto& p : rep.profiles) {
        Json e;
        e["profile"] = profile_to_json(p.profile);
        e["sw"] = p.sw;
        e["sw_se"] = p.sw_se;
        e["max_gap_ucb"] = p.max_gap_ucb;
        e["status"] = ne_status_name(p.status);
        profiles.push_back(e);
    }
    j["profiles"] = profiles;
    j["opt_profile"] = profile_to_json(rep.opt_profile);
    j["sw_star"] = rep.sw_star;
    j["poa_defined"] = rep.poa_defined;
    if (rep.poa_defined) j["poa_point"] = rep.poa_point;
    j["has_candidates"] = rep.has_candidates;
    if (rep.has_candidates) {
        j["poa_lo"] = rep.poa_lo;
        j["poa_hi"] = rep.poa_hi;
    }
    return j;
}

Json deviation_to_json(const DeviationGapReport& rep) {
    Json j;
    j["vacuous"] = rep.vacuous;
    if (!rep.vacuous) {
        j["event_mass"] = rat_str(rep.event_mass);
        j["gap"] = rat_str(rep.gap);
        j["delta"] = rat_str(rep.delta);
        j["min_conditional_gap"] = rat_str(rep.min_conditional_gap);
        j["min_x"] = rats_to_json(rep.min_x);
        Json beta = Json::array();
        for (int f : rep.min_beta) beta.push_back(f + 1);
        j["min_beta"] = beta;
    }
    j["pieces"] = rep.pieces;
    return j;
}

Json smoothness_to_json(const SmoothnessReport& rep) {
    Json j;
    j["pass"] = rep.pass;
    j["pairs_checked"] = rep.pairs_checked;
    if (!rep.pass) {
        j["s"] = profile_to_json(rep.s);
        j["t"] = profile_to_json(rep.t);
        j["lhs"] = rat_str(rep.lhs);
        j["rhs"] = rat_str(rep.rhs);
    }
    return j;
}

Json ic_to_json(const IcAuditReport& rep) {
    Json j;
    j["any_violation"] = rep.any_violation;
    j["decision_points"] = rep.decision_points;
    j["alternatives_checked"] = rep.alternatives_checked;
    Json v = Json::array();
    for (const auto& p : rep.violations) v.push_back(decision_point_to_json(p));
    j["violations"] = v;
    if (rep.worst) j["worst"] = decision_point_to_json(*rep.worst);
    return j;
}

Json descriptor_to_json(const InstanceDescriptor& d) {
    Json j;
    j["name"] = d.name;
    j["parameters"] = d.parameters;
    j["spec"] = spec_to_json(d.spec);
    if (!d.notes.empty()) j["notes"] = d.notes;
    j["verified"] = d.verified;
    if (!d.exact_stats.empty()) {
        Json s = Json::object();
        for (const auto& [k, v] : d.exact_stats) s[k] = rat_str(v);
        j["exact_stats"] = s;
    }
    if (!d.mc_stats.empty()) j["mc_stats"] = d.mc_stats;
    if (!d.failure.empty()) j["failure"] = d.failure;
    return j;
}

std::string utilities_csv(const std::string& profile, const UtilityResult& res) {
    std::ostringstream out;
    out << "profile,firm,utility,stderr,method\n";
    const std::string method = res.exact ? "exact" : "mc";
    const size_t n = res.exact ? res.utilities.size() : res.utilities_mc.size();
    for (size_t i = 0; i < n; ++i) {
        out << csv_field(profile) << ',' << i + 1 << ',';
        if (res.exact)
            out << rat_str(res.utilities[i]) << ',';
        else
            out << fmt_double(res.utilities_mc[i]) << ',' << fmt_double(res.stderrs[i]);
        out << ',' << method << '\n';
    }
    return out.str();
}

std::string summary_csv_header() {
    return "instance,n,m,delta_star,sw_star,worst_ne_sw,poa,bound,method,seed,ci_lo,ci_hi\n";
}

std::string summary_csv_row(const SummaryRow& row) {
    std::ostringstream out;
    out << csv_field(row.instance_id) << ',' << row.n << ',' << row.m << ','
        << csv_field(row.delta_star) << ',' << csv_field(row.sw_star) << ','
        << csv_field(row.worst_ne_sw) << ',' << csv_field(row.poa) << ','
        << csv_field(row.bound) << ',' << csv_field(row.method) << ',' << csv_field(row.seed)
        << ',' << csv_field(row.ci_lo) << ',' << csv_field(row.ci_hi) << '\n';
    return out.str();
}

uint64_t config_hash(const Json& config) {
    const nlohmann::json sorted = config; // sorts keys
    const std::string dump = sorted.dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

Json manifest_to_json(const RunManifest& m) {
    Json j;
    j["tool_version"] = m.tool_version;
    j["command"] = m.command;
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(m.config_fnv));
    j["config_hash"] = hex;
    j["seed"] = m.seed;
    j["wall_seconds"] = m.wall_seconds;
    Json suites = Json::array();
    for (const auto& [name, pass] : m.suites)
        suites.push_back(Json{{"name", name}, {"pass", pass}});
    j["suites"] = suites;
    j["outputs"] = m.outputs;
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

Json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(origin + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw InputError("write failed: " + path);
}

} // namespace rsdlab
