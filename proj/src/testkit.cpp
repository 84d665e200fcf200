#include "robsparse/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "robsparse/errors.hpp"
#include "robsparse/jacobi.hpp"
#include "robsparse/rng.hpp"
#include "robsparse/thresholding.hpp"

namespace robsparse {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
    return r;
}

}  // namespace

SparseOpnormResult sparse_opnorm_exact(const Matrix& M, int s) {
    if (M.rows() != M.cols()) throw input_error("sparse_opnorm_exact: matrix not square");
    const int p = static_cast<int>(M.rows());
    if (s < 1) throw input_error("sparse_opnorm_exact: s must be >= 1");
    const int k = std::min(s, p);
    if (p > 20 || binomial(p, k) > 1e6)
        throw input_error("sparse_opnorm_exact: instance too large for enumeration");

    // By eigenvalue interlacing both maxima are attained on subsets of size
    // exactly k, so smaller subsets need not be visited.
    SparseOpnormResult best;
    best.abs_value = -1.0;
    best.max_eig = -std::numeric_limits<double>::infinity();

    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    Matrix sub(k, k);
    while (true) {
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) sub(a, b) = M(idx[a], idx[b]);
        const EigResult e = eig_sym(sub);
        const double top = e.values(0), bottom = e.values(k - 1);
        const double abs_v = std::max(std::abs(top), std::abs(bottom));
        if (abs_v > best.abs_value) {
            best.abs_value = abs_v;
            best.abs_subset = idx;
        }
        best.max_eig = std::max(best.max_eig, top);

        // next combination in lexicographic order
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == p - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

Matrix true_covariance_of_g(const ModelAdapter& model) {
    const int p = model.functional_dim;
    switch (model.id) {
        case ModelId::Mean:
            return Matrix::Identity(p, p);
        case ModelId::LinearRegression: {
            const Vector beta = true_functional(model);
            return (beta.squaredNorm() + 1.0) * Matrix::Identity(p, p) +
                   beta * beta.transpose();
        }
        case ModelId::Glm:
        case ModelId::Logistic: {
            const GlmParams& gp = std::get<GlmParams>(model.params);
            const Vector& beta = gp.beta;
            return gp.kappa1 * Matrix::Identity(p, p) + gp.kappa2 * beta * beta.transpose();
        }
        case ModelId::Covariance: {
            // Gaussian fourth moments: cov(x_i x_j, x_k x_l) =
            // Sigma_ik Sigma_jl + Sigma_il Sigma_jk, restricted to the
            // off-diagonal coordinates the functional keeps.
            const int d = model.dim;
            const Matrix& S = std::get<CovarianceParams>(model.params).S;
            const Matrix sigma = Matrix::Identity(d, d) + S;
            Matrix C = Matrix::Zero(p, p);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    if (i == j) continue;
                    for (int k = 0; k < d; ++k)
                        for (int l = 0; l < d; ++l) {
                            if (k == l) continue;
                            C(vec_index(i, j, d), vec_index(k, l, d)) =
                                sigma(i, k) * sigma(j, l) + sigma(i, l) * sigma(j, k);
                        }
                }
            return C;
        }
    }
    throw input_error("true_covariance_of_g: unknown model");
}

MomentCheckReport monte_carlo_cov_check(const ModelAdapter& model, int n_samples,
                                        std::uint64_t seed) {
    if (n_samples < 2) throw input_error("monte_carlo_cov_check: need at least 2 samples");
    const Dataset data = sample_clean(model, n_samples, seed);
    const int p = model.functional_dim;

    Vector mean = Vector::Zero(p);
    std::vector<Vector> gs;
    gs.reserve(n_samples);
    for (const auto& z : data.samples) {
        gs.push_back(apply_g(model, z));
        mean += gs.back();
    }
    mean /= n_samples;

    Matrix cov = Matrix::Zero(p, p);
    for (const auto& g : gs) {
        const Vector u = g - mean;
        cov.noalias() += u * u.transpose();
    }
    cov /= n_samples;

    const Vector theta = true_functional(model);
    const Matrix cov_ref = true_covariance_of_g(model);

    MomentCheckReport rep;
    rep.n_samples = n_samples;
    rep.empirical_mean = mean;
    rep.empirical_cov = cov;
    rep.mean_dev_inf = (mean - theta).cwiseAbs().maxCoeff();
    rep.cov_dev_inf = (cov - cov_ref).cwiseAbs().maxCoeff();

    // 1/sqrt(N) scaling with a moment-size factor; 5 standard-error-ish units
    const double scale = std::max(1.0, cov_ref.diagonal().maxCoeff());
    const double root = std::sqrt(std::log(std::max(p, 2)) / n_samples);
    rep.mean_tol = 5.0 * std::sqrt(scale) * root;
    rep.cov_tol = 8.0 * scale * root;
    rep.mean_ok = rep.mean_dev_inf <= rep.mean_tol;
    rep.cov_ok = rep.cov_dev_inf <= rep.cov_tol;
    return rep;
}

namespace {

// uniform weights over a uniformly random feasible support of maximal size
Vector random_vertex_weights(int n, double epsilon, Rng& rng) {
    const int k = std::max(1, static_cast<int>(std::ceil((1.0 - 2.0 * epsilon) * n)));
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.uniform() * (i + 1));
        std::swap(perm[i], perm[j]);
    }
    Vector w = Vector::Zero(n);
    for (int i = 0; i < k; ++i) w(perm[i]) = 1.0 / k;
    return w;
}

Vector restrict_to_good(const Vector& w, const std::vector<std::uint8_t>& labels) {
    double good_mass = 0.0;
    for (int i = 0; i < w.size(); ++i)
        if (!labels[i]) good_mass += w(i);
    if (good_mass <= 0.0)
        throw estimation_error("check_conditions: sampled weights put no mass on inliers");
    Vector out = Vector::Zero(w.size());
    for (int i = 0; i < w.size(); ++i)
        if (!labels[i]) out(i) = w(i) / good_mass;
    return out;
}

}  // namespace

ConditionReport check_conditions(const Dataset& data, const ModelAdapter& model, double delta,
                                 int weight_samples, double constant, std::uint64_t seed) {
    if (!data.hidden_labels) throw input_error("check_conditions: dataset has no hidden labels");
    const int n = data.size();
    if (n == 0) throw input_error("check_conditions: empty dataset");
    const std::vector<std::uint8_t>& labels = *data.hidden_labels;

    int n_good = 0;
    for (auto b : labels)
        if (!b) ++n_good;
    if (n_good == 0) throw estimation_error("check_conditions: no inliers in dataset");

    std::vector<Vector> gs;
    gs.reserve(n);
    for (const auto& z : data.samples) gs.push_back(apply_g(model, z));
    const int p = model.functional_dim;
    const Vector theta = true_functional(model);
    const Matrix cov_ref = true_covariance_of_g(model);
    const int s = model.sparsity;
    const double lf = model.l_f, lcov = model.l_cov;

    auto weighted_dev = [&](const Vector& w) {
        Vector t = Vector::Zero(p);
        for (int i = 0; i < n; ++i)
            if (w(i) != 0.0) t += w(i) * gs[i];
        return Vector(t - theta);
    };
    auto weighted_second = [&](const Vector& w) {
        Matrix E = Matrix::Zero(p, p);
        for (int i = 0; i < n; ++i) {
            if (w(i) == 0.0) continue;
            const Vector u = gs[i] - theta;
            E.noalias() += w(i) * u * u.transpose();
        }
        return Matrix(E - cov_ref);
    };

    Vector w_star = Vector::Zero(n);
    for (int i = 0; i < n; ++i)
        if (!labels[i]) w_star(i) = 1.0 / n_good;

    ConditionReport rep;
    rep.delta = delta;
    rep.constant = constant;
    rep.weight_samples = weight_samples;
    rep.w_good = w_star;
    rep.w_g_restricted = restrict_to_good(Vector::Constant(n, 1.0 / n), labels);

    int n_bad = n - n_good;
    rep.entries.push_back({"bad_fraction", static_cast<double>(n_bad),
                           2.0 * data.epsilon * n, n_bad <= 2.0 * data.epsilon * n});

    const double thr_first = constant * (lf + std::sqrt(lcov)) * delta;
    const double thr_second = constant * (lf * lf + lcov) * delta;

    const Vector dev_star = weighted_dev(w_star);
    rep.entries.push_back({"ideal_dev_inf", dev_star.cwiseAbs().maxCoeff(), thr_first / s,
                           dev_star.cwiseAbs().maxCoeff() <= thr_first / s});

    const Matrix sec_star = weighted_second(w_star);
    const double sec_star_inf = sec_star.cwiseAbs().maxCoeff();
    rep.entries.push_back(
        {"ideal_second_inf", sec_star_inf, thr_second / s, sec_star_inf <= thr_second / s});

    // spot checks over sampled feasible weights, restricted to inliers
    Rng rng(mix_seed(seed, 0xC07Du));
    double worst_dev = sparse_restricted_l2(weighted_dev(w_star), s);
    double worst_sec = sparse_opnorm_exact(sec_star, s).abs_value;
    for (int t = 0; t < weight_samples; ++t) {
        Vector w = random_vertex_weights(n, data.epsilon, rng);
        if (t % 2 == 1) {  // mixture of two vertices
            const double a = rng.uniform();
            w = a * w + (1.0 - a) * random_vertex_weights(n, data.epsilon, rng);
        }
        const Vector wg = restrict_to_good(w, labels);
        worst_dev = std::max(worst_dev, sparse_restricted_l2(weighted_dev(wg), s));
        worst_sec = std::max(worst_sec, sparse_opnorm_exact(weighted_second(wg), s).abs_value);
    }
    rep.entries.push_back({"restricted_dev_sparse_l2", worst_dev, thr_first,
                           worst_dev <= thr_first});
    rep.entries.push_back({"restricted_second_sparse_op", worst_sec, thr_second,
                           worst_sec <= thr_second});

    rep.all_ok = true;
    for (const auto& e : rep.entries) rep.all_ok = rep.all_ok && e.ok;
    return rep;
}

std::string ConditionReport::to_json() const {
    nlohmann::json j;
    j["all_ok"] = all_ok;
    j["delta"] = delta;
    j["constant"] = constant;
    j["weight_samples"] = weight_samples;
    j["conditions"] = nlohmann::json::array();
    for (const auto& e : entries) {
        j["conditions"].push_back(
            {{"name", e.name}, {"measured", e.measured}, {"threshold", e.threshold}, {"ok", e.ok}});
    }
    return j.dump(2);
}

double support_recall(const Vector& estimate, const Vector& truth) {
    int truth_nnz = 0, hit = 0;
    for (int i = 0; i < truth.size(); ++i) {
        if (truth(i) == 0.0) continue;
        ++truth_nnz;
        if (i < estimate.size() && estimate(i) != 0.0) ++hit;
    }
    if (truth_nnz == 0) return 1.0;
    return static_cast<double>(hit) / truth_nnz;
}

}  // namespace robsparse
