#include "robsparse/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "robsparse/detail/draw.hpp"
#include "robsparse/errors.hpp"
#include "robsparse/jacobi.hpp"
#include "robsparse/rng.hpp"

namespace robsparse {

namespace {

constexpr double kDegenerateDivisor = 1e-12;

void require_finite(const Vector& v, const char* who) {
    for (int i = 0; i < v.size(); ++i)
        if (!std::isfinite(v(i))) throw input_error(std::string(who) + ": non-finite entry");
}

const GlmParams& glm_params(const ModelAdapter& m) { return std::get<GlmParams>(m.params); }

int count_nonzeros(const Matrix& S) {
    int nnz = 0;
    for (int i = 0; i < S.rows(); ++i)
        for (int j = 0; j < S.cols(); ++j)
            if (S(i, j) != 0.0) ++nnz;
    return nnz;
}

}  // namespace

LinkFunction make_link(const std::string& name) {
    LinkFunction f;
    f.name = name;
    if (name == "identity") {
        f.u = [](double t) { return t; };
        f.du = [](double) { return 1.0; };
        f.d2u = [](double) { return 0.0; };
        f.c1 = 0.0;
        f.c2 = 1.0;
    } else if (name == "logistic") {
        f.u = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
        f.du = [](double t) {
            const double u = 1.0 / (1.0 + std::exp(-t));
            return u * (1.0 - u);
        };
        f.d2u = [](double t) {
            const double u = 1.0 / (1.0 + std::exp(-t));
            return u * (1.0 - u) * (1.0 - 2.0 * u);
        };
        f.c1 = 0.5;
        f.c2 = 0.25;
    } else {
        throw input_error("make_link: unknown link '" + name + "'");
    }
    return f;
}

LinkMoments gaussian_link_moments(const LinkFunction& link, double sigma) {
    LinkMoments m;
    if (sigma < 1e-14) {
        const double u0 = link.u(0.0), du0 = link.du(0.0), d2u0 = link.d2u(0.0);
        m.mean_u = u0;
        m.mean_du = du0;
        m.mean_d2u = d2u0;
        m.mean_u2 = u0 * u0;
        m.mean_u_d2u = u0 * d2u0;
        m.mean_du2 = du0 * du0;
        return m;
    }
    // composite Simpson over +-12 sigma; the Gaussian tail beyond is < 1e-30
    const int n = 4000;  // even
    const double lo = -12.0 * sigma, hi = 12.0 * sigma;
    const double h = (hi - lo) / n;
    const double inv = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
    double acc[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i <= n; ++i) {
        const double t = lo + h * i;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double phi = inv * std::exp(-0.5 * t * t / (sigma * sigma));
        const double u = link.u(t), du = link.du(t), d2u = link.d2u(t);
        const double c = w * phi;
        acc[0] += c * u;
        acc[1] += c * du;
        acc[2] += c * d2u;
        acc[3] += c * u * u;
        acc[4] += c * u * d2u;
        acc[5] += c * du * du;
    }
    const double scale = h / 3.0;
    m.mean_u = acc[0] * scale;
    m.mean_du = acc[1] * scale;
    m.mean_d2u = acc[2] * scale;
    m.mean_u2 = acc[3] * scale;
    m.mean_u_d2u = acc[4] * scale;
    m.mean_du2 = acc[5] * scale;
    return m;
}

ModelAdapter make_mean_model(Vector mu, int s) {
    require_finite(mu, "make_mean_model");
    if (s < 1) throw input_error("make_mean_model: s must be >= 1");
    ModelAdapter m;
    m.id = ModelId::Mean;
    m.dim = static_cast<int>(mu.size());
    m.functional_dim = m.dim;
    m.sparsity = s;
    m.l_f = 0.0;
    m.l_cov = 1.0;
    m.params = MeanParams{std::move(mu)};
    return m;
}

ModelAdapter make_covariance_model(Matrix S, int s) {
    const int d = static_cast<int>(S.rows());
    if (S.cols() != d) throw input_error("make_covariance_model: S not square");
    if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw input_error("make_covariance_model: S not symmetric");
    for (int i = 0; i < d; ++i)
        if (S(i, i) != 0.0)
            throw input_error(
                "make_covariance_model: S must have zero diagonal (diagonal scale lives in the "
                "identity part and is not identifiable here)");
    if (count_nonzeros(S) > s) throw input_error("make_covariance_model: more than s nonzeros");
    if (s < 1) throw input_error("make_covariance_model: s must be >= 1");

    const Matrix sigma = Matrix::Identity(d, d) + S;
    const EigResult e = eig_sym(sigma);
    if (e.values(d - 1) <= 0.0)
        throw input_error("make_covariance_model: I + S is not positive definite");

    ModelAdapter m;
    m.id = ModelId::Covariance;
    m.dim = d;
    m.functional_dim = d * d;
    m.sparsity = s;
    m.l_f = 4.0 * S.norm();                            // Frobenius norm of S as the radius
    const double sig_op = std::abs(e.values(0));       // ||Sigma||_op
    m.l_cov = 2.0 * sig_op * sig_op;
    m.params = CovarianceParams{std::move(S)};
    return m;
}

ModelAdapter make_regression_model(Vector beta, double rho, int s) {
    require_finite(beta, "make_regression_model");
    if (s < 1) throw input_error("make_regression_model: s must be >= 1");
    if (rho < 0.0) throw input_error("make_regression_model: rho must be >= 0");
    if (beta.norm() > rho + 1e-12)
        throw input_error("make_regression_model: ||beta|| exceeds rho");
    ModelAdapter m;
    m.id = ModelId::LinearRegression;
    m.dim = static_cast<int>(beta.size());
    m.functional_dim = m.dim;
    m.sparsity = s;
    m.l_f = 4.0 * rho;
    m.l_cov = 2.0 * rho * rho + 1.0;
    m.params = RegressionParams{std::move(beta), rho};
    return m;
}

namespace {

ModelAdapter make_glm_like(ModelId id, Vector beta, double rho, LinkFunction link, int s,
                           double mean_grad_u, double kappa1, double kappa2) {
    require_finite(beta, "make_glm_model");
    if (s < 1) throw input_error("make_glm_model: s must be >= 1");
    if (rho < 0.0) throw input_error("make_glm_model: rho must be >= 0");
    if (beta.norm() > rho + 1e-12) throw input_error("make_glm_model: ||beta|| exceeds rho");
    if (!link.u || !link.du || !link.d2u) throw input_error("make_glm_model: incomplete link");

    if (mean_grad_u == 0.0) {
        // derive the known-constant moments at the true signal level
        const LinkMoments mo = gaussian_link_moments(link, beta.norm());
        mean_grad_u = mo.mean_du;
        if (std::abs(mean_grad_u) < kDegenerateDivisor)
            throw estimation_error("make_glm_model: E[u'(x')] is zero, model is degenerate");
        const double denom = mean_grad_u * mean_grad_u;
        if (id == ModelId::Glm) {
            kappa1 = (1.0 + mo.mean_u2) / denom;
            kappa2 = (2.0 * mo.mean_u_d2u + mo.mean_du2) / denom;
        } else {
            kappa1 = mo.mean_u / denom;
            kappa2 = (mo.mean_d2u - denom) / denom;
        }
    }
    if (std::abs(mean_grad_u) < kDegenerateDivisor)
        throw estimation_error("make_glm_model: E[u'(x')] is zero, model is degenerate");
    if (kappa1 <= 0.0) throw input_error("make_glm_model: kappa1 must be positive");

    ModelAdapter m;
    m.id = id;
    m.dim = static_cast<int>(beta.size());
    m.functional_dim = m.dim;
    m.sparsity = s;
    m.l_f = 2.0 * std::abs(kappa2) * rho;
    m.l_cov = kappa1 + std::abs(kappa2) * rho * rho;
    m.params = GlmParams{std::move(beta), rho, std::move(link), mean_grad_u, kappa1, kappa2};
    return m;
}

}  // namespace

ModelAdapter make_glm_model(Vector beta, double rho, LinkFunction link, int s, double mean_grad_u,
                            double kappa1, double kappa2) {
    return make_glm_like(ModelId::Glm, std::move(beta), rho, std::move(link), s, mean_grad_u,
                         kappa1, kappa2);
}

ModelAdapter make_logistic_model(Vector beta, double rho, LinkFunction link, int s,
                                 double mean_grad_u, double kappa1, double kappa2) {
    return make_glm_like(ModelId::Logistic, std::move(beta), rho, std::move(link), s, mean_grad_u,
                         kappa1, kappa2);
}

Vector apply_g(const ModelAdapter& model, const Observation& z) {
    if (static_cast<int>(z.x.size()) != model.dim)
        throw input_error("apply_g: observation dimension mismatch");
    switch (model.id) {
        case ModelId::Mean:
            return z.x;
        case ModelId::Covariance: {
            const int d = model.dim;
            Vector g(d * d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    g(vec_index(i, j, d)) = (i == j) ? 0.0 : z.x(i) * z.x(j);
            return g;
        }
        case ModelId::LinearRegression:
            return z.y * z.x;
        case ModelId::Glm:
        case ModelId::Logistic: {
            const double div = glm_params(model).mean_grad_u;
            if (std::abs(div) < kDegenerateDivisor)
                throw estimation_error("apply_g: GLM divisor E[u'] is zero");
            return (z.y / div) * z.x;
        }
    }
    throw input_error("apply_g: unknown model");
}

double covariance_map_F_entry(const ModelAdapter& model, const Vector& theta, int a, int b) {
    switch (model.id) {
        case ModelId::Mean:
            return a == b ? 1.0 : 0.0;
        case ModelId::Covariance: {
            const int d = model.dim;
            const int i = a / d, j = a % d, k = b / d, l = b % d;
            // symmetrized reshape of theta, evaluated entrywise
            auto S = [&](int r, int c) {
                return 0.5 * (theta(vec_index(r, c, d)) + theta(vec_index(c, r, d)));
            };
            return S(i, j) * S(k, l) + S(i, k) * S(j, l);
        }
        case ModelId::LinearRegression: {
            const double base = theta.squaredNorm() + 1.0;
            return (a == b ? base : 0.0) + theta(a) * theta(b);
        }
        case ModelId::Glm:
        case ModelId::Logistic: {
            const GlmParams& p = glm_params(model);
            return (a == b ? p.kappa1 : 0.0) + p.kappa2 * theta(a) * theta(b);
        }
    }
    throw input_error("covariance_map_F_entry: unknown model");
}

Matrix covariance_map_F(const ModelAdapter& model, const Vector& theta) {
    if (static_cast<int>(theta.size()) != model.functional_dim)
        throw input_error("covariance_map_F: theta dimension mismatch");
    const int p = model.functional_dim;
    switch (model.id) {
        case ModelId::Mean:
            return Matrix::Identity(p, p);
        case ModelId::LinearRegression:
            return (theta.squaredNorm() + 1.0) * Matrix::Identity(p, p) +
                   theta * theta.transpose();
        case ModelId::Glm:
        case ModelId::Logistic: {
            const GlmParams& gp = glm_params(model);
            return gp.kappa1 * Matrix::Identity(p, p) + gp.kappa2 * theta * theta.transpose();
        }
        case ModelId::Covariance: {
            const int d = model.dim;
            Matrix S(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    S(i, j) = 0.5 * (theta(vec_index(i, j, d)) + theta(vec_index(j, i, d)));
            Vector vs(d * d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) vs(vec_index(i, j, d)) = S(i, j);
            Matrix F = vs * vs.transpose();
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k)
                        for (int l = 0; l < d; ++l)
                            F(vec_index(i, j, d), vec_index(k, l, d)) += S(i, k) * S(j, l);
            return F;
        }
    }
    throw input_error("covariance_map_F: unknown model");
}

std::pair<double, double> regularity_constants(const ModelAdapter& model) {
    return {model.l_f, model.l_cov};
}

Vector true_functional(const ModelAdapter& model) {
    switch (model.id) {
        case ModelId::Mean:
            return std::get<MeanParams>(model.params).mu;
        case ModelId::Covariance: {
            const Matrix& S = std::get<CovarianceParams>(model.params).S;
            const int d = model.dim;
            Vector t(d * d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) t(vec_index(i, j, d)) = (i == j) ? 0.0 : S(i, j);
            return t;
        }
        case ModelId::LinearRegression:
            return std::get<RegressionParams>(model.params).beta;
        case ModelId::Glm:
        case ModelId::Logistic:
            return glm_params(model).beta;
    }
    throw input_error("true_functional: unknown model");
}

PruneResult prune(const ModelAdapter& model, const Dataset& data, double tau_prune,
                  double c_prune) {
    if (tau_prune <= 0.0 || tau_prune >= 1.0)
        throw input_error("prune: tau_prune must lie in (0, 1)");
    if (c_prune <= 0.0) throw input_error("prune: c_prune must be positive");
    const int n = data.size();
    if (n == 0) throw input_error("prune: empty dataset");

    const double log_term = std::log(static_cast<double>(n) / tau_prune);
    const double root_dlog = std::sqrt(model.dim * log_term);
    const double root_log = std::sqrt(log_term);

    std::vector<char> keep(n, 1);
    double radius = 0.0;

    switch (model.id) {
        case ModelId::Mean: {
            // drop points far from more than a 2*epsilon fraction of the batch
            const double dist = c_prune * root_dlog;
            const double dist2 = dist * dist;
            const double allowed = 2.0 * data.epsilon * n;
            for (int i = 0; i < n; ++i) {
                int far = 0;
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    if ((data.samples[i].x - data.samples[j].x).squaredNorm() >= dist2) ++far;
                }
                if (far > allowed) keep[i] = 0;
            }
            radius = dist;
            break;
        }
        case ModelId::Covariance: {
            const double norm_cap = c_prune * model.dim * root_log;
            for (int i = 0; i < n; ++i)
                if (data.samples[i].x.norm() >= norm_cap) keep[i] = 0;
            radius = norm_cap;
            break;
        }
        case ModelId::LinearRegression: {
            const double rho = std::get<RegressionParams>(model.params).rho;
            const double norm_cap = c_prune * model.dim * root_log;
            const double y_cap = c_prune * (rho * rho + 1.0) * root_log;
            for (int i = 0; i < n; ++i)
                if (data.samples[i].x.norm() >= norm_cap || std::abs(data.samples[i].y) >= y_cap)
                    keep[i] = 0;
            radius = norm_cap * y_cap;
            break;
        }
        case ModelId::Glm: {
            const GlmParams& p = glm_params(model);
            const double norm_cap = c_prune * model.dim * root_log;
            const double y_cap =
                std::abs(p.link.u(0.0)) + c_prune * (p.rho * p.rho + 1.0) * root_log;
            for (int i = 0; i < n; ++i)
                if (data.samples[i].x.norm() >= norm_cap || std::abs(data.samples[i].y) >= y_cap)
                    keep[i] = 0;
            radius = norm_cap * y_cap / std::abs(p.mean_grad_u);
            break;
        }
        case ModelId::Logistic: {
            const GlmParams& p = glm_params(model);
            const double cap = c_prune * std::abs(p.mean_grad_u) * root_dlog;
            for (int i = 0; i < n; ++i)
                if ((data.samples[i].y * data.samples[i].x).norm() >= cap) keep[i] = 0;
            radius = c_prune * root_dlog;
            break;
        }
    }

    PruneResult out;
    out.model = model;
    out.model.radius_d = radius;
    out.data.epsilon = data.epsilon;
    out.data.seed = data.seed;
    if (data.hidden_labels) out.data.hidden_labels = std::vector<std::uint8_t>{};
    for (int i = 0; i < n; ++i) {
        if (!keep[i]) continue;
        out.data.samples.push_back(data.samples[i]);
        out.kept.push_back(i);
        if (data.hidden_labels) out.data.hidden_labels->push_back((*data.hidden_labels)[i]);
    }
    if (out.data.samples.empty())
        throw estimation_error("prune: every point was removed; nothing left to estimate from");
    return out;
}

namespace detail {

Matrix clean_sqrt_sigma(const ModelAdapter& model) {
    if (model.id != ModelId::Covariance) return Matrix();
    const Matrix& S = std::get<CovarianceParams>(model.params).S;
    const Matrix sigma = Matrix::Identity(model.dim, model.dim) + S;
    bool floored = false;
    Matrix root = sym_sqrt(sigma, 0.0, &floored);
    return root;
}

Observation draw_clean_observation(const ModelAdapter& model, const Matrix& sqrt_sigma, Rng& rng,
                                   double scale) {
    Observation z;
    const int d = model.dim;
    switch (model.id) {
        case ModelId::Mean:
            z.x = std::get<MeanParams>(model.params).mu + scale * rng.normal_vector(d);
            break;
        case ModelId::Covariance:
            z.x = scale * (sqrt_sigma * rng.normal_vector(d));
            break;
        case ModelId::LinearRegression: {
            const RegressionParams& p = std::get<RegressionParams>(model.params);
            z.x = scale * rng.normal_vector(d);
            z.y = p.beta.dot(z.x) + scale * rng.normal();
            break;
        }
        case ModelId::Glm: {
            const GlmParams& p = glm_params(model);
            z.x = scale * rng.normal_vector(d);
            z.y = p.link.u(p.beta.dot(z.x)) + scale * rng.normal();
            break;
        }
        case ModelId::Logistic: {
            const GlmParams& p = glm_params(model);
            z.x = scale * rng.normal_vector(d);
            double prob = p.link.u(p.beta.dot(z.x));
            if (prob < -1e-9 || prob > 1.0 + 1e-9)
                throw input_error("sample_clean: logistic link left [0, 1]");
            prob = std::min(1.0, std::max(0.0, prob));
            z.y = rng.bernoulli(prob) ? 1.0 : 0.0;
            break;
        }
    }
    return z;
}

}  // namespace detail

Dataset sample_clean(const ModelAdapter& model, int n, std::uint64_t seed) {
    if (n <= 0) throw input_error("sample_clean: n must be positive");
    const Matrix root = detail::clean_sqrt_sigma(model);
    Dataset out;
    out.epsilon = 0.0;
    out.seed = seed;
    out.samples.reserve(n);
    for (int i = 0; i < n; ++i) {
        Rng rng = point_stream(seed, kStreamClean, static_cast<std::uint64_t>(i));
        out.samples.push_back(detail::draw_clean_observation(model, root, rng));
    }
    return out;
}

}  // namespace robsparse
