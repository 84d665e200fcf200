#pragma once

#include <string>
#include <vector>

#include "robsparse/models.hpp"
#include "robsparse/types.hpp"

namespace robsparse {

// Exact s-sparse operator norm by enumerating every size-s principal
// submatrix.  Deliberately exponential: this is the ground truth the convex
// relaxation is validated against.  Guarded to p <= 20 and C(p, s) <= 1e6.
struct SparseOpnormResult {
    double abs_value = 0.0;      // max over subsets of max |eigenvalue|
    double max_eig = 0.0;        // max over subsets of the top (signed) eigenvalue
    std::vector<int> abs_subset;  // a subset attaining abs_value
};
SparseOpnormResult sparse_opnorm_exact(const Matrix& M, int s);

// The actual covariance of g(z) under the model's clean distribution.  For
// the covariance model this is the exact Gaussian fourth-moment expression,
// which differs from the algebraic map covariance_map_F by a baseline term.
Matrix true_covariance_of_g(const ModelAdapter& model);

// Empirical mean/covariance of g over N clean draws, compared entrywise
// against the model functional and true_covariance_of_g.
struct MomentCheckReport {
    double mean_dev_inf = 0.0, cov_dev_inf = 0.0;
    double mean_tol = 0.0, cov_tol = 0.0;
    bool mean_ok = false, cov_ok = false;
    int n_samples = 0;
    Vector empirical_mean;
    Matrix empirical_cov;
};
MomentCheckReport monte_carlo_cov_check(const ModelAdapter& model, int n_samples,
                                        std::uint64_t seed);

// Deviation-condition checker: measures, on a labeled dataset, the quantities
// the estimator's guarantees are stated in terms of -- the weighted
// functional deviation and the weighted second-moment deviation, at the ideal
// weights and across sampled feasible weights restricted to the inliers.
struct ConditionEntry {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool ok = false;
};
struct ConditionReport {
    std::vector<ConditionEntry> entries;
    bool all_ok = false;
    double delta = 0.0;
    double constant = 1.0;
    int weight_samples = 0;
    Vector w_good;          // uniform over the hidden inliers
    Vector w_g_restricted;  // inlier-renormalized restriction of uniform weights
    std::string to_json() const;
};
ConditionReport check_conditions(const Dataset& data, const ModelAdapter& model, double delta,
                                 int weight_samples, double constant = 1.0,
                                 std::uint64_t seed = 12345);

// |supp(estimate) ∩ supp(truth)| / |supp(truth)|; defined as 1 when the truth
// has empty support.
double support_recall(const Vector& estimate, const Vector& truth);

}  // namespace robsparse
