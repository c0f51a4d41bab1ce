#include "doctest.h"

#include "rsdlab/json_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

using namespace rsdlab;
namespace fs = std::filesystem;

namespace {

const std::string kCli = RSDLAB_CLI_PATH;
const std::string kData = RSDLAB_TESTDATA_DIR;

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("rsdlab_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const fs::path& outdir) {
    const std::string cmd = kCli + " " + args + " >" + (outdir / "stdout.txt").string() +
                            " 2>" + (outdir / "stderr.txt").string();
    const int st = std::system(cmd.c_str());
    REQUIRE(st != -1);
    REQUIRE(WIFEXITED(st));
    return WEXITSTATUS(st);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_CASE("check-sc exits 0 on a consistent technology and writes a manifest") {
    const fs::path dir = fresh_dir("sc_ok");
    const int rc = run_cli("check-sc " + kData + "/check_sc_kt.json --out " + dir.string(), dir);
    CHECK(rc == 0);
    const Json rep = read_json_file((dir / "consistency.json").string());
    CHECK(rep.at("verdict") == "consistent");
    CHECK(rep.at("delta_star") == "0");
    const Json man = read_json_file((dir / "manifest.json").string());
    CHECK(man.at("tool_version") == kToolVersion);
    CHECK(man.at("command") == "check-sc");
    CHECK(man.at("config_hash").get<std::string>().size() == 16);
    bool lists_report = false;
    for (const auto& o : man.at("outputs"))
        if (o == "consistency.json") lists_report = true;
    CHECK(lists_report);
    fs::remove_all(dir);
}

TEST_CASE("check-sc exits 1 on a violated technology but still reports") {
    const fs::path dir = fresh_dir("sc_bad");
    const int rc =
        run_cli("check-sc " + kData + "/check_sc_hamming.json --out " + dir.string(), dir);
    CHECK(rc == 1);
    const Json rep = read_json_file((dir / "consistency.json").string());
    CHECK(rep.at("verdict") == "violated");
    CHECK(rep.contains("witness"));
    fs::remove_all(dir);
}

TEST_CASE("input problems exit 2 with a diagnostic") {
    const fs::path dir = fresh_dir("errors");
    CHECK(run_cli("check-sc " + (dir / "missing.json").string() + " --out " + dir.string(),
                  dir) == 2);
    CHECK(slurp(dir / "stderr.txt").find("error") != std::string::npos);

    const fs::path bad = dir / "bad.json";
    write_text_file(bad.string(), "{\"technology\": {}}\n");
    CHECK(run_cli("check-sc " + bad.string() + " --out " + dir.string(), dir) == 2);

    CHECK(run_cli("frobnicate x --out " + dir.string(), dir) == 2);
    CHECK(run_cli("", dir) == 2);
    fs::remove_all(dir);
}

TEST_CASE("stochastic simulation without a seed is refused") {
    const fs::path dir = fresh_dir("noseed");
    Json cfg = read_json_file(kData + "/simulate_mc.json");
    cfg.erase("seed");
    const fs::path path = dir / "cfg.json";
    write_text_file(path.string(), cfg.dump(2) + "\n");
    CHECK(run_cli("simulate " + path.string() + " --out " + dir.string(), dir) == 2);
    CHECK(slurp(dir / "stderr.txt").find("seed") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("poa writes a summary row with the documented header") {
    const fs::path dir = fresh_dir("poa");
    CHECK(run_cli("poa " + kData + "/poa_2x3.json --out " + dir.string(), dir) == 0);
    const std::string csv = slurp(dir / "summary.csv");
    CHECK(csv.find(summary_csv_header()) == 0);
    CHECK(csv.find("game-2x3,2,3,") != std::string::npos);
    const Json rep = read_json_file((dir / "equilibrium.json").string());
    CHECK(rep.at("poa") == "1");
    CHECK(rep.at("poa_defined") == true);
    fs::remove_all(dir);
}

TEST_CASE("simulation output is byte identical across worker counts") {
    const fs::path d1 = fresh_dir("w1");
    const fs::path d4 = fresh_dir("w4");
    const std::string cfg = kData + "/simulate_mc.json";
    CHECK(run_cli("simulate " + cfg + " --workers 1 --out " + d1.string(), d1) == 0);
    CHECK(run_cli("simulate " + cfg + " --workers 4 --out " + d4.string(), d4) == 0);
    CHECK(slurp(d1 / "utilities.json") == slurp(d4 / "utilities.json"));
    CHECK(slurp(d1 / "outcomes.json") == slurp(d4 / "outcomes.json"));
    fs::remove_all(d1);
    fs::remove_all(d4);
}

TEST_CASE("exact simulation reports rational utilities") {
    const fs::path dir = fresh_dir("exact");
    CHECK(run_cli("simulate " + kData + "/simulate_exact.json --out " + dir.string(), dir) == 0);
    const Json rep = read_json_file((dir / "utilities.json").string());
    CHECK(rep.at("method") == "exact");
    CHECK(rat_from_json(rep.at("social_welfare")) > 0);
    fs::remove_all(dir);
}

TEST_CASE("reproduce presets verify and exit 0") {
    const fs::path dir = fresh_dir("repro");
    CHECK(run_cli("reproduce linear-poa --n 3 --out " + dir.string(), dir) == 0);
    const std::string text = slurp(dir / "stdout.txt");
    CHECK(text.find("[verified]") != std::string::npos);
    CHECK(text.find("299/100") != std::string::npos);
    fs::remove_all(dir);
}
