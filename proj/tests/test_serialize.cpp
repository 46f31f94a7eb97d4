#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>

#include "stagewise/monitor.hpp"
#include "stagewise/rng.hpp"
#include "stagewise/serialize.hpp"

using namespace stagewise;
using nlohmann::json;

TEST_CASE("content hash matches the published 64-bit FNV-1a vectors") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("file hash agrees with the in-memory hash") {
    write_text_file("./hash_probe.txt", "foobar");
    CHECK(hash_file("./hash_probe.txt") == "85944171f73967e8");
    std::remove("./hash_probe.txt");
    CHECK_THROWS(hash_file("./does_not_exist.txt"));
}

TEST_CASE("canonical JSON text: sorted keys, two-space indent, trailing newline") {
    json j;
    j["zeta"] = 1;
    j["alpha"] = {{"b", 2}, {"a", 1}};
    std::string s = dump_json(j);
    CHECK(s == "{\n  \"alpha\": {\n    \"a\": 1,\n    \"b\": 2\n  },\n  \"zeta\": 1\n}\n");
}

TEST_CASE("matrix round trip is exact") {
    Rng rng(7);
    Eigen::MatrixXd m = rng.gaussian_matrix(4, 3);
    m(2, 1) = 1.0 / 3.0;  // a value that needs all 17 digits
    Eigen::MatrixXd back = matrix_from_json(matrix_to_json(m));
    REQUIRE(back.rows() == 4);
    REQUIRE(back.cols() == 3);
    CHECK(back == m);
}

TEST_CASE("monitoring model round trip preserves scoring behavior") {
    Rng rng(11);
    Eigen::MatrixXd train = rng.gaussian_matrix(500, 3);
    train.col(0) *= 2.0;
    MonitoringModel m = fit_monitor(train, 0.9, 0.05);
    MonitoringModel back = monitor_from_json(monitor_to_json(m));
    CHECK(back.t2_limit == m.t2_limit);
    CHECK(back.n_components == m.n_components);
    CHECK(back.n_train == m.n_train);
    Eigen::MatrixXd probe = rng.gaussian_matrix(20, 3);
    CycleScore a = score_cycle(m, probe);
    CycleScore b = score_cycle(back, probe);
    CHECK((a.t2 - b.t2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("config round trip") {
    SegmenterConfig cfg;
    cfg.window = 12;
    cfg.alpha = 0.01;
    cfg.variance_target = 0.9;
    cfg.consecutive_required = 3;
    cfg.max_lag = 40;
    cfg.max_r = 6;
    cfg.ssa.n_restarts = 2;
    cfg.ssa.seed = 99;
    SegmenterConfig back = config_from_json(config_to_json(cfg));
    CHECK(back.window == 12);
    CHECK(back.alpha == 0.01);
    CHECK(back.variance_target == 0.9);
    CHECK(back.consecutive_required == 3);
    CHECK(back.max_lag == 40);
    CHECK(back.max_r == 6);
    CHECK(back.ssa.n_restarts == 2);
    CHECK(back.ssa.seed == 99);
}

TEST_CASE("segmentation JSON carries the partition and the notes") {
    Segmentation seg;
    seg.dataset_name = "demo";
    StageRange a;
    a.start_cycle = 1;
    a.end_cycle = 40;
    a.tau = 5;
    a.r = 3;
    a.d = 2;
    StageRange b = a;
    b.start_cycle = 41;
    b.end_cycle = 80;
    b.short_tail = true;
    seg.stages = {a, b};
    seg.trace.push_back({16, 1, 0.02, 9.1, false});
    seg.notes = {"note one"};
    json j = segmentation_to_json(seg, 80);
    CHECK(j["dataset"] == "demo");
    CHECK(j["n_cycles"] == 80);
    CHECK(j["n_stages"] == 2);
    REQUIRE(j["stages"].size() == 2);
    CHECK(j["stages"][0]["start_cycle"] == 1);
    CHECK(j["stages"][1]["short_tail"] == true);
    CHECK(j["notes"].size() == 1);
}

TEST_CASE("score trace CSV layout") {
    Segmentation seg;
    seg.trace.push_back({1, 1, 0.0, 9.5, true});
    seg.trace.push_back({16, 1, 0.25, 9.5, false});
    std::string csv = scores_to_csv(seg);
    CHECK(csv.rfind("cycle,stage_id,ar,t2_limit\n", 0) == 0);
    CHECK(csv.find("\n16,1,0.25,9.5") != std::string::npos);
}
