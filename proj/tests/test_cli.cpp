#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "stagewise/serialize.hpp"

using namespace stagewise;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = STAGEWISE_CLI_PATH;

int run(const std::string& args, const std::string& out_file = "/dev/null") {
    std::string cmd = kCli + " " + args + " > " + out_file + " 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) { return read_text_file(path); }

struct TempTree {
    fs::path root;
    TempTree() : root(fs::current_path() / "cli_scratch") {
        fs::remove_all(root);
        fs::create_directories(root);
    }
    ~TempTree() { fs::remove_all(root); }
    std::string operator/(const std::string& leaf) const { return (root / leaf).string(); }
};

} // namespace

TEST_CASE("synth then analyze produces the documented artifacts") {
    TempTree tmp;
    std::string csv = tmp / "syn.csv";
    std::string truth = tmp / "truth.json";
    REQUIRE(run("synth --cycles 80 --samples 400 --change 40 --uniform --phi 0.3 "
                "--variance-schedule 1 --variance-schedule 9 --seed 1 --output " +
                csv + " --truth " + truth) == 0);
    REQUIRE(fs::exists(csv));
    REQUIRE(fs::exists(truth));
    json tj = json::parse(slurp(truth));
    CHECK(tj["change_cycles"][0] == 40);
    CHECK(tj["d_true"] == 2);

    std::string out1 = tmp / "out1";
    std::string table = tmp / "table.txt";
    REQUIRE(run("analyze --input " + csv + " --output-dir " + out1 +
                " --max-r 4 --restarts 3 --seed 7", table) == 0);
    REQUIRE(fs::exists(out1 + "/segmentation.json"));
    REQUIRE(fs::exists(out1 + "/scores.csv"));
    REQUIRE(fs::exists(out1 + "/manifest.json"));

    // stage table names the dataset (file stem) and prints contiguous ranges
    std::string printed = slurp(table);
    CHECK(printed.find("syn\t") != std::string::npos);
    CHECK(printed.find("1-") != std::string::npos);

    // manifest hashes match the artifacts byte for byte
    json manifest = json::parse(slurp(out1 + "/manifest.json"));
    CHECK(manifest["artifacts"]["segmentation.json"] ==
          fnv1a_hex(slurp(out1 + "/segmentation.json")));
    CHECK(manifest["artifacts"]["scores.csv"] == fnv1a_hex(slurp(out1 + "/scores.csv")));
    CHECK(manifest["version"].is_string());
    CHECK(manifest["config"]["max_r"] == 4);

    // segmentation found the planted split near cycle 40
    json seg = json::parse(slurp(out1 + "/segmentation.json"));
    REQUIRE(seg["n_stages"] == 2);
    int end1 = seg["stages"][0]["end_cycle"];
    CHECK(end1 >= 38);
    CHECK(end1 <= 42);

    // reruns are byte-identical for the analysis artifacts
    std::string out2 = tmp / "out2";
    REQUIRE(run("analyze --input " + csv + " --output-dir " + out2 +
                " --max-r 4 --restarts 3 --seed 7") == 0);
    CHECK(slurp(out1 + "/segmentation.json") == slurp(out2 + "/segmentation.json"));
    CHECK(slurp(out1 + "/scores.csv") == slurp(out2 + "/scores.csv"));

    // a different seed still yields a valid run (restart draws change)
    std::string out3 = tmp / "out3";
    REQUIRE(run("analyze --input " + csv + " --output-dir " + out3 +
                " --max-r 4 --restarts 3 --seed 8") == 0);
}

TEST_CASE("synthetic CSV round trips through the loader") {
    TempTree tmp;
    std::string csv = tmp / "rt.csv";
    REQUIRE(run("synth --cycles 5 --samples 40 --seed 3 --output " + csv + " --truth " +
                (tmp / "rt_truth.json")) == 0);
    std::string first = slurp(csv);
    CHECK(first.rfind("cycle,time_s,voltage_v,current_a,temperature_c\n", 0) == 0);
    // regenerating with the same seed is byte-identical
    std::string csv2 = tmp / "rt2.csv";
    REQUIRE(run("synth --cycles 5 --samples 40 --seed 3 --output " + csv2 + " --truth " +
                (tmp / "rt_truth2.json")) == 0);
    CHECK(first == slurp(csv2));
}

TEST_CASE("failures exit nonzero with a diagnostic") {
    TempTree tmp;
    std::string log = tmp / "err.txt";
    CHECK(run("analyze --input " + (tmp / "missing.csv"), log) != 0);
    CHECK(slurp(log).find("error") != std::string::npos);

    CHECK(run("analyze") != 0);               // missing required flag
    CHECK(run("--definitely-not-a-flag") != 0);
    CHECK(run("synth --change 0 --output " + (tmp / "x.csv") + " --truth " +
              (tmp / "x.json")) != 0);

    // malformed input file -> ingest error propagates to the exit code
    std::string bad = tmp / "bad.csv";
    std::ofstream(bad) << "cycle,time_s,voltage_v,current_a,temperature_c\n"
                          "1,0.0,4.2,-2.0\n";
    CHECK(run("analyze --input " + bad, log) != 0);
}

TEST_CASE("validation subcommand smoke run") {
    TempTree tmp;
    std::string log = tmp / "validate.txt";
    REQUIRE(run("validate --seeds 3", log) == 0);
    std::string printed = slurp(log);
    CHECK(printed.find("recovery:") != std::string::npos);
    CHECK(printed.find("boundary:") != std::string::npos);
    CHECK(printed.find("all validation suites passed") != std::string::npos);
}
