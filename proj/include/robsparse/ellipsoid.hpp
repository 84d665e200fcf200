#pragma once

#include <limits>
#include <vector>

#include "robsparse/models.hpp"
#include "robsparse/oracle.hpp"
#include "robsparse/types.hpp"

namespace robsparse {

// Ellipsoid { z + P^{1/2} u : |u| <= 1 } over the reduced (sum-zero)
// coordinates of the weight polytope.  logdet tracks log det P in closed
// form across updates.
struct EllipsoidState {
    Vector z;
    Matrix P;
    double logdet = 0.0;
    long iteration = 0;
};

EllipsoidState make_initial_ellipsoid(int q, double radius = 2.0);

// Central cut through the current center with inner normal -g_hat:
// keep { x : <g_hat, x - z> <= 0 } and take the minimum-volume enclosing
// ellipsoid of that half.  Throws numerical_error when g_hat^T P g_hat is
// not a positive finite number.
EllipsoidState ellipsoid_update(const EllipsoidState& state, const Vector& g_hat);

enum class TerminationReason { OracleYes, IterationCap, VolumeFloor };

struct CutRecord {
    enum class Source { Oracle, Pool, Polytope };
    long iteration = 0;
    Source source = Source::Oracle;
    double lambda_star = 0.0;  // oracle cuts only
    double violation = 0.0;    // l(w) at the rejected center (pool/polytope cuts)
    Vector coeffs;             // the raw-space cut a, when diagnostics are on
    double offset = 0.0;       // b; feasible side is <a, w> + b <= 0
};

struct EllipsoidRunConfig {
    long max_iters = -1;        // <= 0: 500 m^2
    double volume_floor = -1.0;  // < 0: eps (sqrt(L_cov) + L_F) / (m radius_D)
    double initial_radius = 2.0;
    int cut_pool = 64;          // most recent oracle cuts recycled before re-calling
    bool record_diagnostics = false;
};

struct EstimateBundle {
    Vector theta_tilde;  // weighted mean of the g-points at the final weights
    Vector theta_hat;    // hard-thresholded to 2s coordinates
    Vector weights;
    double lambda_best = std::numeric_limits<double>::infinity();
    long oracle_calls = 0;
    long iterations = 0;
    TerminationReason terminated_by = TerminationReason::OracleYes;
    std::vector<int> kept;  // original sample indices (filled by estimate_functional)
    std::vector<CutRecord> cuts;       // record_diagnostics only
    std::vector<double> logdet_trace;  // record_diagnostics only
};

// Ellipsoid search over the weight polytope.  Returns the weights the oracle
// accepted, or the visited feasible weights with the smallest certified
// sparse eigenvalue when the iteration cap or volume floor fires first.
EstimateBundle run_ellipsoid(const std::vector<Vector>& points, const ModelAdapter& model,
                             const OracleConfig& oracle_cfg,
                             const EllipsoidRunConfig& run_cfg = {});

struct PipelineConfig {
    double tau_prune = 0.01;
    double c_prune = 4.0;
    double c_sep = 1.0;
    double spca_tol = -1.0;  // <= 0: scaled default from make_oracle_config
    int spca_max_iters = 4000;
    int screen_threshold = 96;
    int screen_size = 64;
    EllipsoidRunConfig run;
};

// Full pipeline: prune, map samples through g, search weights, threshold.
EstimateBundle estimate_functional(const Dataset& data, const ModelAdapter& model,
                                   const PipelineConfig& cfg = {});

struct JointConfig {
    int s_mean = 1;
    int s_cov = 1;
    double eig_floor = 1e-6;
    PipelineConfig pipeline;
};

struct JointEstimate {
    Vector mu_hat;
    Matrix sigma_hat;
    bool regularized = false;  // eigenvalue floor engaged before whitening
    EstimateBundle cov_bundle;
    EstimateBundle mean_bundle;
};

// Unknown-location covariance then whitened mean, on disjoint thirds of the
// data: pair differences (x - x')/sqrt(2) cancel the mean and feed the
// covariance stage at doubled contamination; the third batch is whitened by
// the result and fed to the mean stage.
JointEstimate joint_mean_cov_estimate(const Dataset& data, const JointConfig& cfg);

}  // namespace robsparse
