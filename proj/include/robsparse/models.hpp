#pragma once

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "robsparse/types.hpp"

namespace robsparse {

// Scalar link u with its derivatives and the two constants the pruning rules
// use: c1 bounds |u(0)|, c2 is a Lipschitz constant for u.
struct LinkFunction {
    std::string name;
    std::function<double(double)> u, du, d2u;
    double c1 = 0.0;
    double c2 = 0.0;
};

// Known links: "identity" and "logistic" (the sigmoid).
LinkFunction make_link(const std::string& name);

struct MeanParams {
    Vector mu;
};

// Sparse covariance structure: the estimand is the off-diagonal matrix S in
// Sigma = I + S.  S must be symmetric and hollow (zero diagonal) -- the
// functional below is blind to diagonal perturbations, so a diagonal in S
// would be unidentifiable.
struct CovarianceParams {
    Matrix S;
};

struct RegressionParams {
    Vector beta;
    double rho = 0.0;  // norm bound, ||beta|| <= rho
};

// Shared by the GLM and logistic-response models.  The three scalar moments
// of the link at the true signal level are treated as known constants; the
// factories fill them in by Gaussian quadrature, callers may override.
struct GlmParams {
    Vector beta;
    double rho = 0.0;
    LinkFunction link;
    double mean_grad_u = 0.0;  // E[u'(x')],  x' = <x, beta>
    double kappa1 = 0.0;       // identity coefficient of the covariance map
    double kappa2 = 0.0;       // beta beta^T coefficient
};

struct ModelAdapter {
    ModelId id;
    int dim = 0;             // covariate dimension d
    int functional_dim = 0;  // dimension of g(z): d for vector models, d^2 for covariance
    int sparsity = 0;        // s
    double l_f = 0.0;        // Lipschitz scale of the covariance map
    double l_cov = 0.0;      // sparse operator-norm bound of cov(g) at the truth
    double radius_d = 0.0;   // post-pruning bound on ||g(z)||, 0 until prune() fills it
    std::variant<MeanParams, CovarianceParams, RegressionParams, GlmParams> params;
};

ModelAdapter make_mean_model(Vector mu, int s);
ModelAdapter make_covariance_model(Matrix S, int s);
ModelAdapter make_regression_model(Vector beta, double rho, int s);
// kappa overrides: pass non-zero mean_grad_u to skip the quadrature defaults.
ModelAdapter make_glm_model(Vector beta, double rho, LinkFunction link, int s,
                            double mean_grad_u = 0.0, double kappa1 = 0.0, double kappa2 = 0.0);
ModelAdapter make_logistic_model(Vector beta, double rho, LinkFunction link, int s,
                                 double mean_grad_u = 0.0, double kappa1 = 0.0,
                                 double kappa2 = 0.0);

// The functional's point map g(z).
Vector apply_g(const ModelAdapter& model, const Observation& z);

// The model's covariance map F evaluated at theta (functional_dim x functional_dim).
Matrix covariance_map_F(const ModelAdapter& model, const Vector& theta);

// Single entry F(theta)[a, b]; lets callers slice F without materializing it.
double covariance_map_F_entry(const ModelAdapter& model, const Vector& theta, int a, int b);

// (L_F, L_cov)
std::pair<double, double> regularity_constants(const ModelAdapter& model);

// theta_g at the model's true parameters.
Vector true_functional(const ModelAdapter& model);

// Model-specific outlier filter.  Removes points whose geometry no inlier
// would plausibly produce; survivors keep their original order.  The returned
// adapter copy has radius_d set to the post-pruning bound on ||g||.
struct PruneResult {
    Dataset data;
    ModelAdapter model;
    std::vector<int> kept;  // original indices of the survivors
};
PruneResult prune(const ModelAdapter& model, const Dataset& data, double tau_prune,
                  double c_prune = 4.0);

// n i.i.d. draws from the model's clean distribution; the stream is keyed per
// point, so draws match sample_contaminated at epsilon = 0 with the same seed.
Dataset sample_clean(const ModelAdapter& model, int n, std::uint64_t seed);

// Gaussian moments of a link at signal level sigma = ||beta||: E[f(x')] for
// x' ~ N(0, sigma^2), via deterministic quadrature.
struct LinkMoments {
    double mean_u = 0.0, mean_du = 0.0, mean_d2u = 0.0;
    double mean_u2 = 0.0, mean_u_d2u = 0.0, mean_du2 = 0.0;
};
LinkMoments gaussian_link_moments(const LinkFunction& link, double sigma);

// row-major flattening used by the covariance model
inline int vec_index(int i, int j, int d) { return i * d + j; }

}  // namespace robsparse
