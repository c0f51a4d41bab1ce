#include "rsdlab/cli.hpp"

#include "rsdlab/errors.hpp"
#include "rsdlab/json_io.hpp"
#include "rsdlab/rng.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

namespace rsdlab {

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0, kViolated = 1, kBadInput = 2;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const Json& need(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw InputError(std::string("config needs field '") + key + "'");
    return j.at(key);
}

struct Overrides {
    uint64_t seed = 0;
    long long samples = 0;
    bool exact = false;
    std::string epsilon;
    int workers = 1;
    std::string out;
    CLI::Option *seed_opt = nullptr, *samples_opt = nullptr, *exact_opt = nullptr,
                *epsilon_opt = nullptr, *workers_opt = nullptr, *out_opt = nullptr;

    void attach(CLI::App* cmd) {
        seed_opt = cmd->add_option("--seed", seed, "master seed for stochastic runs");
        samples_opt = cmd->add_option("--samples", samples, "Monte Carlo replicates");
        exact_opt = cmd->add_flag("--exact", exact, "force the exact engine");
        epsilon_opt = cmd->add_option("--epsilon", epsilon, "equilibrium tolerance");
        workers_opt = cmd->add_option("--workers", workers, "Monte Carlo worker threads");
        out_opt = cmd->add_option("--out", out, "output directory");
    }

    // Flags override the config file; the merged object is what gets hashed.
    void apply(Json& cfg) const {
        if (seed_opt->count()) cfg["seed"] = seed;
        if (samples_opt->count()) cfg["samples"] = samples;
        if (exact_opt->count()) cfg["method"] = "exact";
        if (epsilon_opt->count()) cfg["epsilon"] = epsilon;
        if (workers_opt->count()) cfg["workers"] = workers;
    }

    fs::path outdir(const Json& cfg) const {
        if (out_opt->count()) return fs::path(out);
        if (cfg.is_object() && cfg.contains("out"))
            return fs::path(cfg.at("out").get<std::string>());
        if (const char* env = std::getenv("RSDLAB_OUT")) return fs::path(env);
        return fs::path(".");
    }
};

struct RunContext {
    std::string command;
    Json config;
    fs::path dir;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, bool>> suites;
    uint64_t seed = 0;

    RunContext(std::string cmd, Json cfg, fs::path d)
        : command(std::move(cmd)), config(std::move(cfg)), dir(std::move(d)) {}

    void write(const std::string& name, const std::string& content) {
        fs::create_directories(dir);
        write_text_file((dir / name).string(), content);
        outputs.push_back(name);
    }
    void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }
    void finish() {
        RunManifest man;
        man.command = command;
        man.config_fnv = config_hash(config);
        man.seed = seed;
        man.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        man.suites = suites;
        man.outputs = outputs;
        fs::create_directories(dir);
        write_text_file((dir / "manifest.json").string(), manifest_to_json(man).dump(2) + "\n");
    }
};

uint64_t require_seed(const Json& cfg) {
    if (!cfg.contains("seed"))
        throw InputError("stochastic runs need a seed (config \"seed\" or --seed)");
    return cfg.at("seed").get<uint64_t>();
}

double epsilon_double(const Json& cfg, double dflt) {
    if (!cfg.contains("epsilon")) return dflt;
    const Json& e = cfg.at("epsilon");
    if (e.is_string()) return rat_double(parse_rat(e.get<std::string>()));
    return e.get<double>();
}

EngineConfig engine_from_cfg(const Json& cfg) {
    EngineConfig e;
    if (cfg.contains("workers")) e.workers = cfg.at("workers").get<int>();
    if (cfg.contains("atom_budget")) e.atom_budget = cfg.at("atom_budget").get<long long>();
    if (cfg.contains("pmf_m_cap")) e.caps.pmf_m_cap = cfg.at("pmf_m_cap").get<int>();
    if (cfg.contains("support_cap")) e.caps.support_cap = cfg.at("support_cap").get<long long>();
    return e;
}

int cmd_check_sc(RunContext& rc) {
    const Json& cfg = rc.config;
    RankingTechnology tech = tech_from_json(need(cfg, "technology"));
    ValueVector x = value_vector_from_json(need(cfg, "x"));
    const std::string method = cfg.value("method", std::string("exact"));
    const TechCaps caps = engine_from_cfg(cfg).caps;
    ConsistencyReport rep;
    if (method == "exact") {
        rep = check_sc_exact(tech, x, caps);
    } else if (method == "statistical") {
        rc.seed = require_seed(cfg);
        auto rng = make_stream(rc.seed, 0);
        rep = check_sc_statistical(tech, x, cfg.value("samples", 1000000LL),
                                   cfg.value("confidence", 0.99), rng,
                                   cfg.value("min_cell", 50LL), caps);
    } else {
        throw InputError("method must be \"exact\" or \"statistical\"");
    }
    rc.write_json("consistency.json", consistency_to_json(rep));
    const bool ok = rep.verdict == Verdict::consistent;
    rc.suites.emplace_back("stochastic-consistency", ok);
    std::cout << "verdict: " << verdict_name(rep.verdict)
              << (rep.statistical ? " (statistical, delta* ucb " + fmt(rep.delta_star_ucb) + ")"
                                  : " (delta* = " + rat_str(rep.delta_star) + ")")
              << "\n";
    return ok ? kOk : kViolated;
}

int cmd_measure_delta(RunContext& rc) {
    const Json& cfg = rc.config;
    std::vector<RankingTechnology> techs;
    for (const Json& t : need(cfg, "technologies")) techs.push_back(tech_from_json(t));
    std::vector<ValueVector> xs;
    for (const Json& xj : need(cfg, "xs")) xs.push_back(value_vector_from_json(xj));
    DeltaReport rep = measure_delta(techs, xs, engine_from_cfg(cfg).caps);
    rc.write_json("delta.json", delta_to_json(rep));
    rc.suites.emplace_back("measure-delta", true);
    std::cout << "delta* = " << rat_str(rep.delta_star) << ", welfare bound "
              << (rep.bound_finite ? rat_str(rep.poa_bound) : std::string("unbounded")) << "\n";
    return kOk;
}

int cmd_poa(RunContext& rc) {
    const Json& cfg = rc.config;
    GameSpec spec = spec_from_json(need(cfg, "spec"));
    const std::string method = cfg.value("method", std::string("exact"));
    SummaryRow row;
    row.instance_id = cfg.value("instance_id", std::string("spec"));
    row.n = spec.n;
    row.m = spec.m;
    row.method = method;
    bool ok = true;
    if (method == "exact") {
        EquilibriumOptions opt;
        opt.engine = engine_from_cfg(cfg);
        if (cfg.contains("epsilon")) opt.epsilon = rat_from_json(cfg.at("epsilon"));
        if (cfg.contains("profile_cap")) opt.profile_cap = cfg.at("profile_cap").get<long long>();
        EquilibriumReport rep = price_of_anarchy(spec, opt);
        rc.write_json("equilibrium.json", equilibrium_to_json(rep));
        row.sw_star = rat_str(rep.optimum.sw);
        if (rep.poa_defined) {
            row.worst_ne_sw = rat_str(rep.worst_ne_sw);
            row.poa = rat_str(rep.poa);
        }
        if (rep.bound_checked) {
            row.delta_star = rat_str(rep.delta_star);
            if (rep.bound_finite) row.bound = rat_str(delta_poa_bound(rep.delta_star));
        }
        ok = !rep.bound_violated;
        std::cout << "pure NE: " << rep.pure_nash.size() << ", SW* = " << rat_str(rep.optimum.sw)
                  << (rep.poa_defined ? ", PoA = " + rat_str(rep.poa) : "")
                  << (rep.bound_violated ? " [noise bound violated]" : "") << "\n";
    } else if (method == "mc") {
        McNeOptions opt;
        opt.engine = engine_from_cfg(cfg);
        opt.seed = require_seed(cfg);
        rc.seed = opt.seed;
        opt.samples = cfg.value("samples", 100000LL);
        opt.confidence = cfg.value("confidence", 0.95);
        opt.epsilon = epsilon_double(cfg, -1);
        McEquilibriumReport rep = price_of_anarchy_mc(spec, opt, cfg.value("profile_cap", 10000LL));
        rc.write_json("equilibrium.json", mc_equilibrium_to_json(rep));
        row.sw_star = fmt(rep.sw_star);
        row.seed = std::to_string(opt.seed);
        if (rep.poa_defined) row.poa = fmt(rep.poa_point);
        if (rep.has_candidates) {
            row.ci_lo = fmt(rep.poa_lo);
            row.ci_hi = fmt(rep.poa_hi);
        }
        ok = rep.has_candidates;
        std::cout << "profiles: " << rep.profiles_scanned << ", SW* = " << fmt(rep.sw_star)
                  << (rep.poa_defined ? ", PoA = " + fmt(rep.poa_point) : " (no conclusive NE)")
                  << "\n";
    } else {
        throw InputError("method must be \"exact\" or \"mc\"");
    }
    rc.write("summary.csv", summary_csv_header() + summary_csv_row(row));
    rc.suites.emplace_back("price-of-anarchy", ok);
    return ok ? kOk : kViolated;
}

int cmd_find_equilibria(RunContext& rc) {
    const Json& cfg = rc.config;
    GameSpec spec = spec_from_json(need(cfg, "spec"));
    EquilibriumOptions opt;
    opt.engine = engine_from_cfg(cfg);
    if (cfg.contains("epsilon")) opt.epsilon = rat_from_json(cfg.at("epsilon"));
    if (cfg.contains("profile_cap")) opt.profile_cap = cfg.at("profile_cap").get<long long>();
    EquilibriumReport rep = find_pure_nash(spec, opt);
    rc.write_json("equilibria.json", equilibrium_to_json(rep));
    rc.suites.emplace_back("find-equilibria", true);
    std::cout << rep.pure_nash.size() << " pure NE over " << rep.profiles_scanned
              << " profiles\n";
    return kOk;
}

int cmd_simulate(RunContext& rc) {
    const Json& cfg = rc.config;
    GameSpec spec = spec_from_json(need(cfg, "spec"));
    Profile profile = profile_from_json(need(cfg, "profile"));
    validate_profile(spec, profile);
    const EngineConfig eng = engine_from_cfg(cfg);
    const std::string method = cfg.value("method", std::string("mc"));
    UtilityResult res;
    if (method == "exact") {
        res = expected_utilities_exact(spec, profile, eng);
    } else if (method == "mc") {
        rc.seed = require_seed(cfg);
        res = expected_utilities_mc(spec, profile, cfg.value("samples", 100000LL), rc.seed, eng);
    } else {
        throw InputError("method must be \"exact\" or \"mc\"");
    }
    rc.write_json("utilities.json", utilities_to_json(res, profile));
    rc.write("utilities.csv", utilities_csv(profile.key(), res));
    const int outcomes = cfg.value("outcomes", 0);
    if (outcomes > 0) {
        auto rng = make_stream(require_seed(cfg), 1000000007ull);
        Json arr = Json::array();
        for (int i = 0; i < outcomes; ++i)
            arr.push_back(outcome_to_json(play_once(spec, profile, rng, eng.caps)));
        rc.write_json("outcomes.json", arr);
    }
    rc.suites.emplace_back("simulate", true);
    if (res.exact)
        std::cout << "SW = " << rat_str(res.social_welfare) << " (exact, " << res.atoms_visited
                  << " leaves)\n";
    else
        std::cout << "SW = " << fmt(res.social_welfare_mc) << " +- " << fmt(res.sw_stderr) << " ("
                  << res.samples << " samples)\n";
    return kOk;
}

int cmd_ic_audit(RunContext& rc) {
    const Json& cfg = rc.config;
    GameSpec spec = spec_from_json(need(cfg, "spec"));
    Profile profile;
    if (cfg.contains("profile")) {
        profile = profile_from_json(cfg.at("profile"));
    } else {
        if (spec.advice.common.empty())
            throw InputError("no profile given and no shared technology to default to");
        profile = uniform_profile(spec, spec.advice.common.front().id);
    }
    validate_profile(spec, profile);
    IcAuditReport rep = ic_audit(spec, profile, engine_from_cfg(cfg));
    rc.write_json("ic_audit.json", ic_to_json(rep));
    const bool ok = !rep.any_violation;
    rc.suites.emplace_back("obedience-audit", ok);
    std::cout << rep.decision_points << " decision points, " << rep.violations.size()
              << " profitable deviations\n";
    return ok ? kOk : kViolated;
}

int cmd_smoothness(RunContext& rc) {
    const Json& cfg = rc.config;
    GameSpec spec = spec_from_json(need(cfg, "spec"));
    EquilibriumOptions opt;
    opt.engine = engine_from_cfg(cfg);
    if (cfg.contains("profile_cap")) opt.profile_cap = cfg.at("profile_cap").get<long long>();
    SmoothnessReport rep = smoothness_check(spec, opt);
    rc.write_json("smoothness.json", smoothness_to_json(rep));
    rc.suites.emplace_back("smoothness", rep.pass);
    std::cout << (rep.pass ? "smooth" : "violated") << " over " << rep.pairs_checked
              << " ordered profile pairs\n";
    return rep.pass ? kOk : kViolated;
}

std::vector<int> parse_range(const std::string& s) {
    try {
        const auto pos = s.find("..");
        if (pos == std::string::npos) return {std::stoi(s)};
        const int lo = std::stoi(s.substr(0, pos));
        const int hi = std::stoi(s.substr(pos + 2));
        if (hi < lo) throw InputError("empty range: " + s);
        std::vector<int> v;
        for (int i = lo; i <= hi; ++i) v.push_back(i);
        return v;
    } catch (const std::logic_error&) {
        throw InputError("range must look like \"4\" or \"3..9\": " + s);
    }
}

int reproduce_tight_poa(RunContext& rc) {
    const Json& cfg = rc.config;
    const auto ns = parse_range(cfg.value("n", std::string("3..9")));
    rc.seed = cfg.value("seed", uint64_t{20260814});
    std::ostringstream csv, txt;
    csv << "n,poa,bound,method,seed,ci_lo,ci_hi\n";
    txt << "shared-shortlist lower-bound family (welfare ratio vs the all-shared equilibrium)\n";
    bool all_ok = true;
    const double z = normal_quantile(0.975);
    for (int n : ns) {
        TightPoaOptions opt;
        if (cfg.contains("eta")) opt.eta = rat_from_json(cfg.at("eta"));
        if (cfg.contains("samples")) opt.mc_samples = cfg.at("samples").get<long long>();
        opt.seed = rc.seed + static_cast<uint64_t>(n);
        opt.engine = engine_from_cfg(cfg);
        InstanceDescriptor d = gen_tight_poa(n, opt);
        rc.write_json("tight_poa_n" + std::to_string(n) + ".json", descriptor_to_json(d));
        all_ok = all_ok && d.verified;
        std::string ratio_str, seed_col, lo, hi, method;
        if (d.exact_stats.count("welfare_ratio")) {
            method = "exact";
            ratio_str = rat_str(d.exact_stats.at("welfare_ratio"));
            txt << "n=" << n << "  ratio " << ratio_str;
        } else {
            method = "mc";
            const double ratio = d.mc_stats.at("welfare_ratio");
            const double sw_a = d.mc_stats.at("sw_all_a"), se_a = d.mc_stats.at("sw_all_a_se");
            const double sw_p = d.mc_stats.at("sw_all_aprime"),
                         se_p = d.mc_stats.at("sw_all_aprime_se");
            const double se = ratio * std::hypot(se_a / sw_a, se_p / sw_p);
            ratio_str = fmt(ratio);
            seed_col = std::to_string(opt.seed);
            lo = fmt(ratio - z * se);
            hi = fmt(ratio + z * se);
            txt << "n=" << n << "  ratio " << fmt(ratio) << " +- " << fmt(se);
        }
        txt << (d.verified ? "  [verified]" : "  [UNVERIFIED: " + d.failure + "]") << "\n";
        csv << n << ',' << ratio_str << ",2," << method << ',' << seed_col << ',' << lo << ','
            << hi << '\n';
    }
    rc.write("tight_poa.csv", csv.str());
    rc.write("summary.txt", txt.str());
    rc.suites.emplace_back("tight-poa", all_ok);
    std::cout << txt.str();
    return all_ok ? kOk : kViolated;
}

int reproduce_linear_poa(RunContext& rc) {
    const Json& cfg = rc.config;
    const auto ns = parse_range(cfg.value("n", std::string("3..5")));
    std::ostringstream csv, txt;
    csv << "n,poa,bound,method,seed,ci_lo,ci_hi\n";
    txt << "dominant-chase family (welfare ratio grows linearly in n)\n";
    bool all_ok = true;
    for (int n : ns) {
        LinearPoaOptions opt;
        if (cfg.contains("eps")) opt.eps = rat_from_json(cfg.at("eps"));
        opt.engine = engine_from_cfg(cfg);
        InstanceDescriptor d = gen_linear_poa(n, opt);
        rc.write_json("linear_poa_n" + std::to_string(n) + ".json", descriptor_to_json(d));
        all_ok = all_ok && d.verified;
        const std::string poa = d.exact_stats.count("poa") ? rat_str(d.exact_stats.at("poa")) : "";
        csv << n << ',' << poa << ',' << n - 1 << ",exact,,,\n";
        txt << "n=" << n << "  PoA " << poa
            << (d.verified ? "  [verified]" : "  [UNVERIFIED: " + d.failure + "]") << "\n";
    }
    rc.write("linear_poa.csv", csv.str());
    rc.write("summary.txt", txt.str());
    rc.suites.emplace_back("linear-poa", all_ok);
    std::cout << txt.str();
    return all_ok ? kOk : kViolated;
}

int reproduce_deviation(RunContext& rc) {
    const Json& cfg = rc.config;
    const int n = parse_range(cfg.value("n", std::string("2"))).front();
    std::vector<Rat> phis;
    if (cfg.contains("phi"))
        phis.push_back(rat_from_json(cfg.at("phi")));
    else
        phis = {Rat(1, 1000000), Rat(1, 2), Rat(1)};
    std::ostringstream csv, txt;
    csv << "phi,gap,event_mass,vacuous\n";
    txt << "conditional deviation comparison at the last slot (negative gap expected)\n";
    bool all_ok = true;
    const Rat window(-1, 1000);
    for (size_t i = 0; i < phis.size(); ++i) {
        DeviationOptions opt;
        opt.phi = phis[i];
        opt.engine = engine_from_cfg(cfg);
        DeviationInstance inst = gen_deviation_counterexample(n, opt);
        Json j;
        j["descriptor"] = descriptor_to_json(inst.descriptor);
        j["report"] = deviation_to_json(inst.report);
        rc.write_json("deviation_" + std::to_string(i) + ".json", j);
        // Vanishing noise flattens the gap toward 0 from below; elsewhere it
        // must be strictly negative.
        bool ok = !inst.report.vacuous && inst.report.gap <= 0;
        if (phis[i] <= Rat(1, 1000))
            ok = ok && inst.report.gap > window;
        else
            ok = ok && inst.report.gap < 0;
        all_ok = all_ok && ok;
        csv << rat_str(phis[i]) << ',' << rat_str(inst.report.gap) << ','
            << rat_str(inst.report.event_mass) << ',' << (inst.report.vacuous ? 1 : 0) << '\n';
        txt << "phi=" << rat_str(phis[i]) << "  gap " << rat_str(inst.report.gap) << " ~ "
            << fmt(rat_double(inst.report.gap)) << (ok ? "  [verified]" : "  [UNVERIFIED]")
            << "\n";
    }
    rc.write("deviation.csv", csv.str());
    rc.write("summary.txt", txt.str());
    rc.suites.emplace_back("deviation-counterexample", all_ok);
    std::cout << txt.str();
    return all_ok ? kOk : kViolated;
}

int reproduce_ic(RunContext& rc) {
    const std::string preset = rc.config.value("preset", std::string("permutation-invariant"));
    std::vector<InstanceDescriptor> set;
    if (preset == "permutation-invariant")
        set = gen_obedience_suite();
    else if (preset == "counterexample")
        set = gen_obedience_violations();
    else
        throw InputError("preset must be \"permutation-invariant\" or \"counterexample\"");
    std::ostringstream csv, txt;
    csv << "instance,decision_points,worst_gap,verified\n";
    bool all_ok = true;
    Json arr = Json::array();
    for (const auto& d : set) {
        arr.push_back(descriptor_to_json(d));
        all_ok = all_ok && d.verified;
        const std::string worst =
            d.exact_stats.count("worst_gap") ? rat_str(d.exact_stats.at("worst_gap")) : "";
        csv << d.name << ',' << rat_str(d.exact_stats.at("decision_points")) << ',' << worst
            << ',' << (d.verified ? 1 : 0) << '\n';
        txt << d.name << (d.verified ? "  [verified]" : "  [UNVERIFIED: " + d.failure + "]")
            << "\n";
    }
    rc.write_json("ic_instances.json", arr);
    rc.write("ic.csv", csv.str());
    rc.write("summary.txt", txt.str());
    rc.suites.emplace_back("obedience-" + preset, all_ok);
    std::cout << txt.str();
    return all_ok ? kOk : kViolated;
}

int reproduce_smoothness(RunContext& rc) {
    const Json& cfg = rc.config;
    const int count = cfg.value("count", 5);
    rc.seed = cfg.value("seed", uint64_t{20260814});
    std::ostringstream csv, txt;
    csv << "game,n,m,pairs_checked,pass\n";
    bool all_ok = true;
    for (int k = 0; k < count; ++k) {
        const int n = 2 + (k % 2);
        RandomGameOptions gopt;
        gopt.engine = engine_from_cfg(cfg);
        InstanceDescriptor d = gen_random_sc_game(n, 3, rc.seed + k, gopt);
        if (!d.verified) {
            all_ok = false;
            txt << d.name << "  [UNVERIFIED: " + d.failure + "]\n";
            continue;
        }
        EquilibriumOptions opt;
        opt.engine = engine_from_cfg(cfg);
        SmoothnessReport rep = smoothness_check(d.spec, opt);
        all_ok = all_ok && rep.pass;
        csv << d.name << ',' << n << ",3," << rep.pairs_checked << ',' << (rep.pass ? 1 : 0)
            << '\n';
        txt << d.name << "  " << rep.pairs_checked << " pairs"
            << (rep.pass ? "  [verified]" : "  [UNVERIFIED]") << "\n";
    }
    rc.write("smoothness.csv", csv.str());
    rc.write("summary.txt", txt.str());
    rc.suites.emplace_back("smoothness", all_ok);
    std::cout << txt.str();
    return all_ok ? kOk : kViolated;
}

int cmd_reproduce(RunContext& rc) {
    const std::string which = rc.config.at("which").get<std::string>();
    if (which == "tight-poa") return reproduce_tight_poa(rc);
    if (which == "linear-poa") return reproduce_linear_poa(rc);
    if (which == "deviation-counterexample") return reproduce_deviation(rc);
    if (which == "ic") return reproduce_ic(rc);
    if (which == "smoothness") return reproduce_smoothness(rc);
    throw InputError("unknown preset: " + which);
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"simulation and exact analysis of ranking-advice matching games"};
    app.require_subcommand(1);

    int code = kOk;
    auto guarded = [&code](const std::function<int()>& body) {
        try {
            code = body();
        } catch (const ResourceLimitError& e) {
            std::cerr << "resource limit: " << e.what() << "\n";
            code = kBadInput;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            code = kBadInput;
        }
    };

    struct ConfigCmd {
        const char* name;
        const char* help;
        int (*run)(RunContext&);
        std::string config_path;
        Overrides ov;
    };
    // Stable storage: option bindings point into these until parse finishes.
    std::vector<ConfigCmd> cmds;
    cmds.reserve(7);
    cmds.push_back({"check-sc", "certify or refute ranking consistency", cmd_check_sc, {}, {}});
    cmds.push_back(
        {"measure-delta", "worst-case noise level over a strategy space", cmd_measure_delta, {}, {}});
    cmds.push_back({"poa", "equilibria, optimum and price of anarchy", cmd_poa, {}, {}});
    cmds.push_back({"find-equilibria", "pure equilibria of a game", cmd_find_equilibria, {}, {}});
    cmds.push_back({"simulate", "expected utilities of one profile", cmd_simulate, {}, {}});
    cmds.push_back({"ic-audit", "compare obedient play against deviations", cmd_ic_audit, {}, {}});
    cmds.push_back({"smoothness", "pairwise smoothness inequality sweep", cmd_smoothness, {}, {}});
    for (auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("config", c.config_path, "JSON config file")->required();
        c.ov.attach(sub);
        ConfigCmd* cc = &c;
        sub->callback([&guarded, cc] {
            guarded([cc] {
                Json cfg = read_json_file(cc->config_path);
                cc->ov.apply(cfg);
                RunContext rc(cc->name, cfg, cc->ov.outdir(cfg));
                const int r = cc->run(rc);
                rc.finish();
                return r;
            });
        });
    }

    CLI::App* rep = app.add_subcommand("reproduce", "generate and verify a built-in family");
    std::string which, n_range, eta, eps, phi, preset;
    int count = 0;
    Overrides rov;
    rep->add_option("which", which,
                    "tight-poa | linear-poa | deviation-counterexample | ic | smoothness")
        ->required();
    rep->add_option("--n", n_range, "size or range, e.g. 4 or 3..9");
    rep->add_option("--eta", eta, "equilibrium margin (tight-poa)");
    rep->add_option("--eps", eps, "dominance margin (linear-poa)");
    rep->add_option("--phi", phi, "noise level (deviation-counterexample)");
    rep->add_option("--preset", preset, "permutation-invariant | counterexample (ic)");
    rep->add_option("--count", count, "number of games (smoothness)");
    rov.attach(rep);
    rep->callback([&] {
        guarded([&] {
            Json cfg;
            cfg["which"] = which;
            if (!n_range.empty()) cfg["n"] = n_range;
            if (!eta.empty()) cfg["eta"] = eta;
            if (!eps.empty()) cfg["eps"] = eps;
            if (!phi.empty()) cfg["phi"] = phi;
            if (!preset.empty()) cfg["preset"] = preset;
            if (count > 0) cfg["count"] = count;
            rov.apply(cfg);
            RunContext rc("reproduce " + which, cfg, rov.outdir(cfg));
            const int r = cmd_reproduce(rc);
            rc.finish();
            return r;
        });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }
    return code;
}

} // namespace rsdlab
