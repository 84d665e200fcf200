#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "robsparse/ellipsoid.hpp"
#include "robsparse/models.hpp"
#include "robsparse/simulator.hpp"

namespace robsparse {

// Declarative experiment description, normally loaded from JSON.

struct ModelSpec {
    std::string kind = "mean";  // mean | covariance | regression | glm | logistic
    int d = 16;
    int s = 2;
    double signal = 1.0;      // magnitude planted on the true parameter
    double rho = 2.0;         // norm budget for the regression family
    std::string link = "logistic";
};

struct ContaminationSetting {
    std::string law = "point_mass";
    std::string align = "spread";  // spread (1/sqrt(d)) | first (e_0) | last (e_{d-1})
    double shift = 3.0;            // norm of the point-mass / cluster center
    double spread = 0.1;
    double factor = 9.0;
    double magnitude = 3.0;  // response-flip covariate norm
    double y_value = 1.0;
};

struct RunConfig {
    std::uint64_t seed = 1;
    int trials = 3;
    int threads = 1;
    bool record_timing = false;  // off by default so output bytes are reproducible
    std::string output;          // CSV destination; empty means stdout
    std::vector<std::string> methods = {"robust", "naive_threshold", "prune_only",
                                        "oracle_weights"};
    ModelSpec model;
    std::vector<int> grid_n = {200};
    std::vector<double> grid_epsilon = {0.1};
    ContaminationSetting contamination;
    PipelineConfig pipeline;
};

// Strict JSON loader: unknown fields are rejected, not ignored.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

struct ResultRecord {
    int trial = 0;
    std::string method;
    int n = 0, d = 0, s = 0;
    double epsilon = 0.0;
    double l2_error = 0.0;
    double frob_error = 0.0;  // symmetrized matrix error for covariance, == l2 otherwise
    double support_recall = 0.0;
    double lambda_best = 0.0;  // robust runs only, NaN otherwise
    long oracle_calls = 0;
    double runtime_ms = 0.0;
    std::string terminated_by;  // yes | cap | floor (robust runs)
    std::string error;          // exception text when the run failed
};

std::string result_csv_header();
std::string to_csv_row(const ResultRecord& rec);
void write_results_csv(std::ostream& os, const std::vector<ResultRecord>& rows);

// Instantiate the true model / outlier law a config describes.
ModelAdapter build_model(const ModelSpec& spec);
ContaminationSpec build_contamination(const ContaminationSetting& setting,
                                      const ModelSpec& model, double epsilon);

// Full grid x trial x method sweep.  Row order is fixed by the config alone;
// threads only change wall time.  Per-run failures land in the error column.
std::vector<ResultRecord> run_sweep(const RunConfig& cfg);

// Self-check suites ("lemmas", "moments", "spca", "oracle").  Prints one line
// per check; returns 0 when all pass, 1 on failure, 2 for an unknown name.
int run_verify_suite(const std::string& name, std::ostream& os);

}  // namespace robsparse
