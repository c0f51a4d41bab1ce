#pragma once

#include "rsdlab/consistency.hpp"
#include "rsdlab/equilibrium.hpp"
#include "rsdlab/instances.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rsdlab {

// Insertion order is kept on dump, so identical build order gives identical
// bytes. Hashing canonicalizes to sorted keys first.
using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

// Rationals travel as exact strings ("3", "1/3"); candidates, positions and
// rankings are 1-based in JSON and 0-based in memory.
Json rat_to_json(const Rat& r);
Rat rat_from_json(const Json& j);

Json ranking_to_json(const Ranking& r);
Ranking ranking_from_json(const Json& j);

Json value_vector_to_json(const ValueVector& x);
ValueVector value_vector_from_json(const Json& j);

Json tech_to_json(const RankingTechnology& t);
RankingTechnology tech_from_json(const Json& j);

Json value_dist_to_json(const ValueDistribution& d);
ValueDistribution value_dist_from_json(const Json& j);

Json policy_to_json(const SelectionPolicy& p);
SelectionPolicy policy_from_json(const Json& j);

Json spec_to_json(const GameSpec& spec);
GameSpec spec_from_json(const Json& j);

Json profile_to_json(const Profile& p);
Profile profile_from_json(const Json& j);

Json outcome_to_json(const OutcomeRecord& rec);
Json consistency_to_json(const ConsistencyReport& rep);
Json delta_to_json(const DeltaReport& rep);
Json utilities_to_json(const UtilityResult& res, const Profile& profile);
Json equilibrium_to_json(const EquilibriumReport& rep);
Json mc_ne_to_json(const McNeReport& rep);
Json mc_equilibrium_to_json(const McEquilibriumReport& rep);
Json deviation_to_json(const DeviationGapReport& rep);
Json smoothness_to_json(const SmoothnessReport& rep);
Json ic_to_json(const IcAuditReport& rep);
Json descriptor_to_json(const InstanceDescriptor& d);

// Columns: profile, firm, utility, stderr, method. Exact rows leave stderr
// empty and carry exact rational strings.
std::string utilities_csv(const std::string& profile, const UtilityResult& res);

// One sweep row. Exact rows leave seed and the CI columns empty.
struct SummaryRow {
    std::string instance_id;
    int n = 0, m = 0;
    std::string delta_star;
    std::string sw_star, worst_ne_sw, poa, bound;
    std::string method; // "exact" | "mc"
    std::string seed;
    std::string ci_lo, ci_hi;
};

std::string summary_csv_header();
std::string summary_csv_row(const SummaryRow& row);

// FNV-1a 64 over the sorted-key dump; key order in the input is irrelevant.
uint64_t config_hash(const Json& config);

struct RunManifest {
    std::string tool_version = kToolVersion;
    std::string command;
    uint64_t config_fnv = 0;
    uint64_t seed = 0;
    double wall_seconds = 0; // informational; result payloads exclude it
    std::vector<std::pair<std::string, bool>> suites; // (name, pass)
    std::vector<std::string> outputs;
};

Json manifest_to_json(const RunManifest& m);

Json read_json_file(const std::string& path); // InputError with diagnostics
Json parse_json_text(const std::string& text, const std::string& origin);
void write_text_file(const std::string& path, const std::string& content);

} // namespace rsdlab
