#pragma once

#include <vector>

#include "robsparse/models.hpp"
#include "robsparse/spca.hpp"
#include "robsparse/types.hpp"

namespace robsparse {

// Target accuracy delta(epsilon) for each model family; zero at epsilon = 0.
double accuracy_delta(ModelId id, double epsilon);

struct OracleConfig {
    double tau_sep = 0.0;      // accept when lambda* <= tau_sep
    int s = 1;                 // sparsity level of the relaxation
    double epsilon = 0.0;      // contamination fraction (fixes the weight cap)
    double spca_tol = 1e-6;
    int spca_max_iters = 4000;
    // Above this ambient dimension the relaxation is solved on a screened
    // working set of coordinates instead of all p.
    int screen_threshold = 96;
    int screen_size = 64;
};

// tau_sep = c_sep (L_F^2 + L_cov) delta(eps); spca_tol scales the same way.
OracleConfig make_oracle_config(const ModelAdapter& model, double epsilon,
                                double c_sep = 1.0);

enum class OracleAnswer { Yes, Cut };

struct OracleVerdict {
    OracleAnswer kind = OracleAnswer::Yes;
    Vector cut_coeffs;      // a, over raw weights (Cut only)
    double cut_offset = 0.0;  // b: feasible side is <a,w> + b <= 0
    double lambda_star = 0.0;
    Vector theta_hat;       // 2s-truncated weighted mean used to center E
    bool spca_converged = true;
    int spca_iterations = 0;
    std::vector<int> working_set;  // coordinates the relaxation was solved on
};

// Warm state threaded between consecutive oracle calls.  The embedded SPCA
// state is only reusable while the working set stays put.
struct OracleWarmState {
    SpcaWarmStart spca;
    std::vector<int> working_set;
};

// E(w) = sum_i w_i (g_i - theta_hat)(g_i - theta_hat)^T - F(theta_hat), the
// matrix whose sparse eigenvalue the oracle certifies.  Full p x p; intended
// for tests and small problems.
Matrix weighted_deviation_matrix(const Vector& w, const std::vector<Vector>& points,
                                 const ModelAdapter& model, const Vector& theta_hat);

// Decide whether w puts the weighted second moment within tolerance of the
// model's curvature map, or produce a separating hyperplane.  `points` are
// the g-transformed samples.  The cut satisfies <a,w> + b = 0 at the queried
// w exactly, by construction.
OracleVerdict evaluate_oracle(const Vector& w, const std::vector<Vector>& points,
                              const ModelAdapter& model, const OracleConfig& config,
                              OracleWarmState* warm = nullptr);

}  // namespace robsparse
