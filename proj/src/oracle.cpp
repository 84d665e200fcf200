#include "robsparse/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robsparse/errors.hpp"
#include "robsparse/thresholding.hpp"
#include "robsparse/weights.hpp"

namespace robsparse {

double accuracy_delta(ModelId id, double epsilon) {
    if (epsilon < 0.0 || epsilon >= 1.0)
        throw input_error("contamination fraction must lie in [0, 1)");
    if (epsilon == 0.0) return 0.0;
    const double log_inv = std::log(1.0 / epsilon);
    switch (id) {
        case ModelId::Mean:
            return epsilon * std::sqrt(log_inv);
        case ModelId::Logistic:
            return epsilon * log_inv;
        default:  // covariance, regression, general GLM
            return epsilon * log_inv * log_inv;
    }
}

OracleConfig make_oracle_config(const ModelAdapter& model, double epsilon, double c_sep) {
    OracleConfig cfg;
    cfg.s = model.sparsity;
    cfg.epsilon = epsilon;
    const double scale = model.l_f * model.l_f + model.l_cov;
    cfg.tau_sep = c_sep * scale * accuracy_delta(model.id, epsilon);
    cfg.spca_tol = std::max(epsilon / 10.0 * scale, 1e-8);
    return cfg;
}

Matrix weighted_deviation_matrix(const Vector& w, const std::vector<Vector>& points,
                                 const ModelAdapter& model, const Vector& theta_hat) {
    const int m = int(points.size());
    if (w.size() != m || m == 0) throw input_error("weights and points disagree in length");
    const int p = int(points[0].size());
    Matrix E = Matrix::Zero(p, p);
    for (int i = 0; i < m; ++i) {
        if (points[i].size() != p) throw input_error("points have mixed dimensions");
        const Vector u = points[i] - theta_hat;
        E.noalias() += w(i) * (u * u.transpose());
    }
    E -= covariance_map_F(model, theta_hat);
    return E;
}

namespace {

// Screened working set for large p: coordinates with the most inflated
// weighted variance, the support of the current estimate, and a second pass
// of coordinates strongly coupled (in E) to those seeds.
std::vector<int> screen_working_set(const Vector& w, const std::vector<Vector>& devs,
                                    const ModelAdapter& model, const Vector& theta_hat,
                                    int budget) {
    const int m = int(devs.size());
    const int p = int(devs[0].size());
    budget = std::max(budget, 16);
    if (p <= budget) {
        std::vector<int> all(p);
        std::iota(all.begin(), all.end(), 0);
        return all;
    }

    Vector diag_score(p);
    for (int j = 0; j < p; ++j) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += w(i) * devs[i](j) * devs[i](j);
        diag_score(j) = acc - covariance_map_F_entry(model, theta_hat, j, j);
    }

    const int reserve = std::min(16, budget / 4);
    const int seed_budget = budget - reserve;
    std::vector<char> taken(p, 0);
    std::vector<int> seeds;
    seeds.reserve(seed_budget);

    // estimate support first, largest coordinates first
    std::vector<int> support;
    for (int j = 0; j < p; ++j)
        if (theta_hat(j) != 0.0) support.push_back(j);
    std::sort(support.begin(), support.end(), [&](int a, int b) {
        const double fa = std::abs(theta_hat(a)), fb = std::abs(theta_hat(b));
        return fa != fb ? fa > fb : a < b;
    });
    for (int j : support) {
        if (int(seeds.size()) >= seed_budget / 2) break;
        seeds.push_back(j);
        taken[j] = 1;
    }

    std::vector<int> by_diag(p);
    std::iota(by_diag.begin(), by_diag.end(), 0);
    std::sort(by_diag.begin(), by_diag.end(), [&](int a, int b) {
        return diag_score(a) != diag_score(b) ? diag_score(a) > diag_score(b) : a < b;
    });
    for (int j : by_diag) {
        if (int(seeds.size()) >= seed_budget) break;
        if (!taken[j]) {
            seeds.push_back(j);
            taken[j] = 1;
        }
    }

    // coupling pass: for each seed row of E, track the largest off-set entry
    Vector colmax = Vector::Zero(p);
    const int row_cap = std::min<int>(int(seeds.size()), 40);
    for (int r = 0; r < row_cap; ++r) {
        const int j = seeds[r];
        Vector row = Vector::Zero(p);
        for (int i = 0; i < m; ++i) row.noalias() += (w(i) * devs[i](j)) * devs[i];
        for (int k = 0; k < p; ++k) {
            if (taken[k]) continue;
            const double v = std::abs(row(k) - covariance_map_F_entry(model, theta_hat, j, k));
            if (v > colmax(k)) colmax(k) = v;
        }
    }
    std::vector<int> rest;
    for (int k = 0; k < p; ++k)
        if (!taken[k] && colmax(k) > 0.0) rest.push_back(k);
    std::sort(rest.begin(), rest.end(), [&](int a, int b) {
        return colmax(a) != colmax(b) ? colmax(a) > colmax(b) : a < b;
    });
    for (int k : rest) {
        if (int(seeds.size()) >= budget) break;
        seeds.push_back(k);
    }
    std::sort(seeds.begin(), seeds.end());
    return seeds;
}

}  // namespace

OracleVerdict evaluate_oracle(const Vector& w, const std::vector<Vector>& points,
                              const ModelAdapter& model, const OracleConfig& config,
                              OracleWarmState* warm) {
    const int m = int(points.size());
    if (m == 0) throw input_error("oracle needs at least one point");
    if (w.size() != m) throw input_error("weights and points disagree in length");
    const int p = int(points[0].size());
    if (p != model.functional_dim)
        throw input_error("points do not match the model's functional dimension");
    {
        WeightPolytope poly(m, config.epsilon);
        if (!weights_feasible(w, poly, 1e-8))
            throw input_error("oracle queried at weights outside the feasible polytope");
    }

    Vector theta_tilde = Vector::Zero(p);
    for (int i = 0; i < m; ++i) theta_tilde.noalias() += w(i) * points[i];
    const int k = std::min(2 * config.s, p);
    OracleVerdict verdict;
    verdict.theta_hat = top_k(theta_tilde, k).values;

    std::vector<Vector> devs(m);
    for (int i = 0; i < m; ++i) devs[i] = points[i] - verdict.theta_hat;

    const bool screened = p > config.screen_threshold;
    std::vector<int> ws;
    if (screened)
        ws = screen_working_set(w, devs, model, verdict.theta_hat, config.screen_size);
    else {
        ws.resize(p);
        std::iota(ws.begin(), ws.end(), 0);
    }
    const int K = int(ws.size());

    Matrix E = Matrix::Zero(K, K);
    std::vector<Vector> sub(m);
    for (int i = 0; i < m; ++i) {
        Vector v(K);
        for (int a = 0; a < K; ++a) v(a) = devs[i](ws[a]);
        E.noalias() += w(i) * (v * v.transpose());
        sub[i] = std::move(v);
    }
    Matrix F_sub(K, K);  // also needed for the cut offset below
    for (int a = 0; a < K; ++a)
        for (int b = a; b < K; ++b) {
            const double f = covariance_map_F_entry(model, verdict.theta_hat, ws[a], ws[b]);
            F_sub(a, b) = f;
            F_sub(b, a) = f;
        }
    E -= F_sub;

    SpcaProblem problem(E, double(config.s), config.spca_tol, config.spca_max_iters);
    SpcaWarmStart* spca_warm = nullptr;
    if (warm) {
        if (!(warm->spca.valid && warm->working_set == ws)) {
            warm->spca = SpcaWarmStart{};
            warm->working_set = ws;
        }
        spca_warm = &warm->spca;
    }
    const SpcaSolution sol = solve_relaxation(problem, spca_warm);

    verdict.lambda_star = sol.lambda_star;
    verdict.spca_converged = sol.converged;
    verdict.spca_iterations = sol.iterations;
    if (screened) verdict.working_set = ws;

    if (sol.converged && sol.lambda_star <= config.tau_sep) {
        verdict.kind = OracleAnswer::Yes;
        return verdict;
    }

    // Separating hyperplane from the (feasible, possibly suboptimal) witness
    // H: a_i = u_i^T H u_i, b = -tr(F H) - lambda*.  Restricting to the
    // working set embeds H with zeros elsewhere, so the same formulas apply
    // verbatim and <a, w> + b = 0 at the queried weights.
    verdict.kind = OracleAnswer::Cut;
    verdict.cut_coeffs = Vector(m);
    for (int i = 0; i < m; ++i)
        verdict.cut_coeffs(i) = sub[i].dot(sol.H_star * sub[i]);
    verdict.cut_offset = -(F_sub * sol.H_star).trace() - sol.lambda_star;
    return verdict;
}

}  // namespace robsparse
