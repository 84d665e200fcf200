#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "robsparse/errors.hpp"
#include "robsparse/harness.hpp"

using namespace robsparse;

namespace {

std::string csv(const std::vector<ResultRecord>& rows) {
    std::ostringstream os;
    write_results_csv(os, rows);
    return os.str();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST_CASE("config parsing applies defaults and rejects unknowns") {
    const RunConfig cfg = parse_run_config("{}");
    CHECK(cfg.seed == 1);
    CHECK(cfg.trials == 3);
    CHECK(cfg.methods.size() == 4);
    CHECK(cfg.model.kind == "mean");
    CHECK_FALSE(cfg.record_timing);

    CHECK_THROWS_AS(parse_run_config("{\"sede\": 1}"), input_error);
    CHECK_THROWS_AS(parse_run_config("{\"model\": {\"dd\": 3}}"), input_error);
    CHECK_THROWS_AS(parse_run_config("{\"contamination\": {\"laws\": \"x\"}}"), input_error);
    CHECK_THROWS_AS(parse_run_config("{\"pipeline\": {\"c_sepp\": 1.0}}"), input_error);
    CHECK_THROWS_AS(parse_run_config("{\"grid\": {\"m\": [10]}}"), input_error);
    CHECK_THROWS_AS(parse_run_config("not json"), input_error);
}

TEST_CASE("config parsing validates values") {
    CHECK_THROWS_AS(parse_run_config("{\"methods\": [\"naive\"]}"), input_error);
    CHECK_THROWS_AS(parse_run_config("{\"trials\": 0}"), input_error);
    CHECK_THROWS_AS(parse_run_config("{\"grid\": {\"epsilon\": [0.5]}}"), input_error);
    CHECK_THROWS_AS(parse_run_config("{\"grid\": {\"n\": []}}"), input_error);
    CHECK_THROWS_AS(parse_run_config("{\"model\": {\"kind\": \"modes\"}}"), input_error);
    CHECK_THROWS_AS(parse_run_config("{\"contamination\": {\"align\": \"up\"}}"), input_error);
    CHECK_NOTHROW(parse_run_config("{\"methods\": [\"naive_threshold\"]}"));
    CHECK_NOTHROW(parse_run_config("{\"contamination\": {\"align\": \"last\"}}"));
}

TEST_CASE("CSV header names the full schema in order") {
    CHECK(result_csv_header() ==
          "trial,method,n,d,s,epsilon,l2_error,frob_error,support_recall,lambda_best,"
          "oracle_calls,runtime_ms,terminated_by,error");
}

TEST_CASE("CSV rows quote fields that need it") {
    ResultRecord rec;
    rec.method = "robust";
    rec.error = "bad, \"thing\" happened";
    const std::string row = to_csv_row(rec);
    CHECK(row.find("\"bad, \"\"thing\"\" happened\"") != std::string::npos);
}

TEST_CASE("an empty method list produces a header-only CSV") {
    RunConfig cfg = parse_run_config("{\"methods\": []}");
    const std::vector<ResultRecord> rows = run_sweep(cfg);
    CHECK(rows.empty());
    CHECK(csv(rows) == result_csv_header() + "\n");
}

TEST_CASE("sweep emits grid x trials x methods rows in a fixed order") {
    const std::string text = R"({
        "seed": 9,
        "trials": 3,
        "methods": ["naive_threshold", "prune_only"],
        "model": {"kind": "mean", "d": 6, "s": 1, "signal": 1.0},
        "grid": {"n": [40, 60], "epsilon": [0.1]},
        "contamination": {"law": "point_mass", "align": "last", "shift": 3.0}
    })";
    const RunConfig cfg = parse_run_config(text);
    const std::vector<ResultRecord> rows = run_sweep(cfg);
    REQUIRE(rows.size() == 2 * 3 * 2);

    // outer loop over the grid, then trials, then methods
    int k = 0;
    for (int n : {40, 60})
        for (int trial : {0, 1, 2})
            for (const char* method : {"naive_threshold", "prune_only"}) {
                CHECK(rows[k].n == n);
                CHECK(rows[k].trial == trial);
                CHECK(rows[k].method == method);
                CHECK(rows[k].error.empty());
                CHECK(std::isnan(rows[k].lambda_best));
                ++k;
            }
}

TEST_CASE("sweep output is byte-identical across repeats and thread counts") {
    const std::string text = R"({
        "seed": 4,
        "trials": 4,
        "methods": ["naive_threshold", "prune_only", "oracle_weights"],
        "model": {"kind": "mean", "d": 5, "s": 1},
        "grid": {"n": [30], "epsilon": [0.0, 0.1]},
        "contamination": {"law": "point_mass", "align": "first", "shift": 4.0}
    })";
    RunConfig cfg = parse_run_config(text);
    const std::string once = csv(run_sweep(cfg));
    const std::string twice = csv(run_sweep(cfg));
    CHECK(once == twice);

    cfg.threads = 4;
    CHECK(csv(run_sweep(cfg)) == once);
}

TEST_CASE("baselines coincide at zero contamination") {
    const std::string text = R"({
        "seed": 12,
        "trials": 2,
        "methods": ["naive_threshold", "prune_only", "oracle_weights"],
        "model": {"kind": "mean", "d": 6, "s": 2},
        "grid": {"n": [150], "epsilon": [0.0]},
        "contamination": {"law": "point_mass", "shift": 3.0}
    })";
    const std::vector<ResultRecord> rows = run_sweep(parse_run_config(text));
    REQUIRE(rows.size() == 6);
    for (size_t k = 0; k < rows.size(); k += 3) {
        CHECK(rows[k].l2_error == doctest::Approx(rows[k + 1].l2_error).epsilon(1e-12));
        CHECK(rows[k].l2_error == doctest::Approx(rows[k + 2].l2_error).epsilon(1e-12));
    }
}

TEST_CASE("a distant point mass shifts the plain average by epsilon times its size") {
    const std::string text = R"({
        "seed": 31,
        "trials": 3,
        "methods": ["naive_threshold"],
        "model": {"kind": "mean", "d": 8, "s": 2, "signal": 1.0},
        "grid": {"n": [4000], "epsilon": [0.1]},
        "contamination": {"law": "point_mass", "align": "last", "shift": 50.0}
    })";
    const std::vector<ResultRecord> rows = run_sweep(parse_run_config(text));
    for (const ResultRecord& r : rows) {
        REQUIRE(r.error.empty());
        // the contaminated average gains eps * 50 on the last coordinate, and
        // that survives the 2s truncation
        CHECK(r.l2_error > 4.0);
        CHECK(r.l2_error < 6.0);
    }
}

TEST_CASE("ideal weights never do worse than the plain average") {
    const std::string text = R"({
        "seed": 77,
        "trials": 11,
        "methods": ["oracle_weights", "naive_threshold"],
        "model": {"kind": "mean", "d": 10, "s": 2, "signal": 1.0},
        "grid": {"n": [300], "epsilon": [0.1]},
        "contamination": {"law": "point_mass", "align": "first", "shift": 3.0}
    })";
    const std::vector<ResultRecord> rows = run_sweep(parse_run_config(text));
    std::vector<double> oracle_err, naive_err;
    for (const ResultRecord& r : rows)
        (r.method == "oracle_weights" ? oracle_err : naive_err).push_back(r.l2_error);
    REQUIRE(oracle_err.size() == 11);
    CHECK(median(oracle_err) <= median(naive_err));
}

TEST_CASE("per-run failures land in the error column instead of aborting") {
    // response flips are undefined for the mean model, so every dataset draw
    // fails and every row must report it
    const std::string text = R"({
        "trials": 2,
        "methods": ["naive_threshold"],
        "model": {"kind": "mean", "d": 4, "s": 1},
        "grid": {"n": [20], "epsilon": [0.1]},
        "contamination": {"law": "response_flip"}
    })";
    const std::vector<ResultRecord> rows = run_sweep(parse_run_config(text));
    REQUIRE(rows.size() == 2);
    for (const ResultRecord& r : rows) {
        CHECK_FALSE(r.error.empty());
        CHECK(r.l2_error == 0.0);
    }
}

TEST_CASE("robust rows carry the search diagnostics") {
    const std::string text = R"({
        "seed": 5,
        "trials": 1,
        "methods": ["robust"],
        "model": {"kind": "mean", "d": 5, "s": 1, "signal": 1.0},
        "grid": {"n": [80], "epsilon": [0.1]},
        "contamination": {"law": "point_mass", "align": "last", "shift": 4.0},
        "pipeline": {"c_sep": 3.0, "max_iters": 2000}
    })";
    const std::vector<ResultRecord> rows = run_sweep(parse_run_config(text));
    REQUIRE(rows.size() == 1);
    const ResultRecord& r = rows[0];
    REQUIRE(r.error.empty());
    CHECK(std::isfinite(r.lambda_best));
    CHECK(r.oracle_calls >= 1);
    CHECK((r.terminated_by == "yes" || r.terminated_by == "cap" || r.terminated_by == "floor"));
}

TEST_CASE("missing config files are reported") {
    CHECK_THROWS_AS(load_run_config("/tmp/robsparse_missing_config.json"), input_error);
}
