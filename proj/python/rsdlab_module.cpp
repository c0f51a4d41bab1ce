#include "rsdlab/errors.hpp"
#include "rsdlab/json_io.hpp"
#include "rsdlab/rng.hpp"

#include <pybind11/pybind11.h>

#include <optional>
#include <string>

namespace py = pybind11;
using namespace rsdlab;

// Everything crosses the boundary as JSON text; the python package turns it
// into dicts. Rationals stay exact strings end to end.
namespace {

std::string dump(const Json& j) { return j.dump(); }

Json parse(const std::string& text) { return parse_json_text(text, "<python>"); }

ValueVector values_from(const std::string& text) {
    return value_vector_from_json(parse(text));
}

std::string py_check_sc(const std::string& tech, const std::string& x) {
    return dump(consistency_to_json(check_sc_exact(tech_from_json(parse(tech)), values_from(x))));
}

std::string py_check_sc_statistical(const std::string& tech, const std::string& x,
                                    long long samples, double confidence, uint64_t seed) {
    auto rng = make_stream(seed, 0);
    return dump(consistency_to_json(
        check_sc_statistical(tech_from_json(parse(tech)), values_from(x), samples, confidence,
                             rng)));
}

std::string py_measure_delta(const std::string& space, const std::string& xs) {
    std::vector<RankingTechnology> techs;
    for (const Json& t : parse(space)) techs.push_back(tech_from_json(t));
    std::vector<ValueVector> vecs;
    for (const Json& x : parse(xs)) vecs.push_back(value_vector_from_json(x));
    return dump(delta_to_json(measure_delta(techs, vecs)));
}

std::string py_delta_poa_bound(const std::string& delta) {
    return rat_str(delta_poa_bound(parse_rat(delta)));
}

std::string py_expected_utilities(const std::string& spec, const std::string& profile,
                                  bool exact, long long samples, uint64_t seed, int workers) {
    const GameSpec g = spec_from_json(parse(spec));
    const Profile p = profile_from_json(parse(profile));
    if (exact) return dump(utilities_to_json(expected_utilities_exact(g, p), p));
    EngineConfig cfg;
    cfg.workers = workers;
    return dump(utilities_to_json(expected_utilities_mc(g, p, samples, seed, cfg), p));
}

std::string py_price_of_anarchy(const std::string& spec) {
    return dump(equilibrium_to_json(price_of_anarchy(spec_from_json(parse(spec)))));
}

std::string py_smoothness(const std::string& spec) {
    return dump(smoothness_to_json(smoothness_check(spec_from_json(parse(spec)))));
}

std::string py_ic_audit(const std::string& spec, const std::string& profile) {
    return dump(ic_to_json(
        ic_audit(spec_from_json(parse(spec)), profile_from_json(parse(profile)))));
}

std::string py_deviation_gap(const std::string& spec, const std::string& s,
                             const std::string& s_star, int firm, const std::string& delta,
                             int firm_slot) {
    std::optional<int> slot;
    if (firm_slot >= 0) slot = firm_slot;
    return dump(deviation_to_json(
        conditional_deviation_gap(spec_from_json(parse(spec)), profile_from_json(parse(s)),
                                  profile_from_json(parse(s_star)), firm, parse_rat(delta),
                                  slot)));
}

std::string py_check_ne_mc(const std::string& spec, const std::string& profile,
                           long long samples, uint64_t seed, double epsilon) {
    McNeOptions opt;
    opt.samples = samples;
    opt.seed = seed;
    opt.epsilon = epsilon;
    return dump(mc_ne_to_json(
        check_ne_mc(spec_from_json(parse(spec)), profile_from_json(parse(profile)), opt)));
}

std::string py_tight_poa(int n, long long mc_samples, uint64_t seed) {
    TightPoaOptions opt;
    if (mc_samples > 0) opt.mc_samples = mc_samples;
    if (seed) opt.seed = seed;
    return dump(descriptor_to_json(gen_tight_poa(n, opt)));
}

std::string py_linear_poa(int n) { return dump(descriptor_to_json(gen_linear_poa(n))); }

std::string py_deviation_counterexample(int n, const std::string& phi) {
    DeviationOptions opt;
    opt.phi = parse_rat(phi);
    const auto inst = gen_deviation_counterexample(n, opt);
    Json j;
    j["descriptor"] = descriptor_to_json(inst.descriptor);
    j["s"] = profile_to_json(inst.s);
    j["s_star"] = profile_to_json(inst.s_star);
    j["firm"] = inst.firm;
    j["firm_slot"] = inst.firm_slot;
    j["report"] = deviation_to_json(inst.report);
    return dump(j);
}

std::string py_random_sc_game(int n, int m, uint64_t seed) {
    return dump(descriptor_to_json(gen_random_sc_game(n, m, seed)));
}

std::string py_obedience_suite() {
    Json arr = Json::array();
    for (const auto& d : gen_obedience_suite()) arr.push_back(descriptor_to_json(d));
    return dump(arr);
}

std::string py_obedience_violations() {
    Json arr = Json::array();
    for (const auto& d : gen_obedience_violations()) arr.push_back(descriptor_to_json(d));
    return dump(arr);
}

std::string py_rank_distance(const std::string& kind, const std::string& a,
                             const std::string& b) {
    RankDistance d;
    d.kind = distance_kind_from_name(kind);
    return rat_str(distance(d, ranking_from_json(parse(a)), ranking_from_json(parse(b))));
}

std::string py_inversion_monotone(const std::string& kind, int m) {
    RankDistance d;
    d.kind = distance_kind_from_name(kind);
    const auto res = is_inversion_monotone(d, m, Ranking::identity(m));
    Json j;
    j["monotone"] = res.monotone;
    j["swaps_checked"] = res.swaps_checked;
    if (res.violation) {
        Json v;
        v["pi"] = ranking_to_json(res.violation->pi);
        v["pi_swapped"] = ranking_to_json(res.violation->pi_swapped);
        v["k"] = res.violation->k + 1;
        v["l"] = res.violation->l + 1;
        v["d_before"] = rat_str(res.violation->d_before);
        v["d_after"] = rat_str(res.violation->d_after);
        j["violation"] = v;
    }
    return dump(j);
}

} // namespace

PYBIND11_MODULE(_rsdlab, mod) {
    mod.doc() = "exact and sampled analysis of ranking-advice hiring games";
    mod.attr("__version__") = kToolVersion;

    py::register_exception<InputError>(mod, "InputError", PyExc_ValueError);
    py::register_exception<UnsupportedError>(mod, "UnsupportedError", PyExc_NotImplementedError);
    py::register_exception<ResourceLimitError>(mod, "ResourceLimitError", PyExc_RuntimeError);

    mod.def("check_sc", &py_check_sc, py::arg("tech"), py::arg("x"));
    mod.def("check_sc_statistical", &py_check_sc_statistical, py::arg("tech"), py::arg("x"),
            py::arg("samples"), py::arg("confidence"), py::arg("seed"));
    mod.def("measure_delta", &py_measure_delta, py::arg("space"), py::arg("xs"));
    mod.def("delta_poa_bound", &py_delta_poa_bound, py::arg("delta"));
    mod.def("expected_utilities", &py_expected_utilities, py::arg("spec"), py::arg("profile"),
            py::arg("exact"), py::arg("samples"), py::arg("seed"), py::arg("workers"));
    mod.def("price_of_anarchy", &py_price_of_anarchy, py::arg("spec"));
    mod.def("smoothness", &py_smoothness, py::arg("spec"));
    mod.def("ic_audit", &py_ic_audit, py::arg("spec"), py::arg("profile"));
    mod.def("deviation_gap", &py_deviation_gap, py::arg("spec"), py::arg("s"),
            py::arg("s_star"), py::arg("firm"), py::arg("delta"), py::arg("firm_slot"));
    mod.def("check_ne_mc", &py_check_ne_mc, py::arg("spec"), py::arg("profile"),
            py::arg("samples"), py::arg("seed"), py::arg("epsilon"));
    mod.def("tight_poa", &py_tight_poa, py::arg("n"), py::arg("mc_samples"), py::arg("seed"));
    mod.def("linear_poa", &py_linear_poa, py::arg("n"));
    mod.def("deviation_counterexample", &py_deviation_counterexample, py::arg("n"),
            py::arg("phi"));
    mod.def("random_sc_game", &py_random_sc_game, py::arg("n"), py::arg("m"), py::arg("seed"));
    mod.def("obedience_suite", &py_obedience_suite);
    mod.def("obedience_violations", &py_obedience_violations);
    mod.def("rank_distance", &py_rank_distance, py::arg("kind"), py::arg("a"), py::arg("b"));
    mod.def("inversion_monotone", &py_inversion_monotone, py::arg("kind"), py::arg("m"));
}
