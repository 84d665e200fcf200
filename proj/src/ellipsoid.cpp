#include "robsparse/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "robsparse/errors.hpp"
#include "robsparse/jacobi.hpp"
#include "robsparse/thresholding.hpp"
#include "robsparse/weights.hpp"

namespace robsparse {

EllipsoidState make_initial_ellipsoid(int q, double radius) {
    if (q < 1) throw input_error("ellipsoid dimension must be positive");
    if (!(radius > 0.0)) throw input_error("ellipsoid radius must be positive");
    EllipsoidState st;
    st.z = Vector::Zero(q);
    st.P = Matrix::Identity(q, q) * (radius * radius);
    st.logdet = q * std::log(radius * radius);
    st.iteration = 0;
    return st;
}

EllipsoidState ellipsoid_update(const EllipsoidState& state, const Vector& g_hat) {
    const int q = int(state.z.size());
    if (g_hat.size() != q) throw input_error("cut direction has wrong dimension");

    EllipsoidState next;
    next.iteration = state.iteration + 1;

    if (q == 1) {
        // Interval halving: keep the half on the feasible side of the center.
        const double g = g_hat(0);
        if (!(std::abs(g) > 0.0) || !std::isfinite(g))
            throw numerical_error("degenerate cut direction in one dimension");
        const double r = std::sqrt(state.P(0, 0));
        if (!(r > 0.0) || !std::isfinite(r))
            throw numerical_error("ellipsoid interval collapsed");
        next.z = Vector::Constant(1, state.z(0) - (g > 0 ? 0.5 : -0.5) * r);
        next.P = Matrix::Constant(1, 1, state.P(0, 0) / 4.0);
        next.logdet = state.logdet - std::log(4.0);
        return next;
    }

    const Vector Pg = state.P * g_hat;
    const double denom = g_hat.dot(Pg);
    if (!(denom > 0.0) || !std::isfinite(denom))
        throw numerical_error("cut direction leaves the ellipsoid degenerate (g^T P g <= 0)");

    const double qd = double(q);
    next.z = state.z - (1.0 / (qd + 1.0)) * Pg / std::sqrt(denom);
    Matrix P = (qd * qd / (qd * qd - 1.0)) *
               (state.P - (2.0 / (qd + 1.0)) * (Pg * Pg.transpose()) / denom);
    next.P = 0.5 * (P + P.transpose());
    // det shrinks by the fixed central-cut factor; track it in closed form
    next.logdet = state.logdet + qd * std::log(qd * qd / (qd * qd - 1.0)) +
                  std::log((qd - 1.0) / (qd + 1.0));
    return next;
}

namespace {

struct PooledCut {
    Vector a;
    double b = 0.0;
};

EstimateBundle finalize(const Vector& w, const std::vector<Vector>& points, int s,
                        double lambda_best, long oracle_calls, long iterations,
                        TerminationReason reason) {
    const int p = int(points[0].size());
    EstimateBundle out;
    out.weights = w;
    out.theta_tilde = Vector::Zero(p);
    for (size_t i = 0; i < points.size(); ++i) out.theta_tilde.noalias() += w(int(i)) * points[i];
    out.theta_hat = top_k(out.theta_tilde, std::min(2 * s, p)).values;
    out.lambda_best = lambda_best;
    out.oracle_calls = oracle_calls;
    out.iterations = iterations;
    out.terminated_by = reason;
    return out;
}

}  // namespace

EstimateBundle run_ellipsoid(const std::vector<Vector>& points, const ModelAdapter& model,
                             const OracleConfig& oracle_cfg,
                             const EllipsoidRunConfig& run_cfg) {
    const int m = int(points.size());
    if (m == 0) throw input_error("weight search needs at least one point");
    const WeightPolytope poly(m, oracle_cfg.epsilon);
    OracleWarmState warm;

    // Zero contamination (or a single point) pins the polytope to one weight
    // vector; evaluate there and report whatever the oracle certifies.
    if (m == 1 || oracle_cfg.epsilon == 0.0) {
        const Vector w = Vector::Constant(m, 1.0 / m);
        const OracleVerdict v = evaluate_oracle(w, points, model, oracle_cfg, &warm);
        EstimateBundle out =
            finalize(w, points, oracle_cfg.s, v.lambda_star, 1, 0,
                     v.kind == OracleAnswer::Yes ? TerminationReason::OracleYes
                                                 : TerminationReason::VolumeFloor);
        return out;
    }

    const int q = m - 1;
    EllipsoidState state = make_initial_ellipsoid(q, run_cfg.initial_radius);
    const long max_iters = run_cfg.max_iters > 0 ? run_cfg.max_iters : 500L * m * m;

    double floor_radius = run_cfg.volume_floor;
    if (floor_radius < 0.0) {
        double radius_d = model.radius_d;
        if (!(radius_d > 0.0)) {
            for (const Vector& g : points) radius_d = std::max(radius_d, g.norm());
            if (!(radius_d > 0.0)) radius_d = 1.0;
        }
        floor_radius = oracle_cfg.epsilon * (std::sqrt(model.l_cov) + model.l_f) /
                       (double(m) * radius_d);
    }
    // vol(E) < vol(floor-radius ball)  <=>  logdet P < 2 q log(floor)
    const double logdet_floor =
        floor_radius > 0.0 ? 2.0 * q * std::log(floor_radius) : -std::numeric_limits<double>::infinity();

    std::deque<PooledCut> pool;
    double best_lambda = std::numeric_limits<double>::infinity();
    Vector best_w;
    long oracle_calls = 0;
    TerminationReason reason = TerminationReason::IterationCap;

    EstimateBundle diag;  // only cuts/logdet_trace are used from this
    const bool record = run_cfg.record_diagnostics;

    long iter = 0;
    while (iter < max_iters) {
        ++iter;
        const Vector w = poly.to_weights(state.z);

        // 1. recycle the most violated pooled oracle cut, if any
        int pooled_idx = -1;
        double pooled_violation = 1e-12;
        for (size_t j = 0; j < pool.size(); ++j) {
            const double l = pool[j].a.dot(w) + pool[j].b;
            if (l > pooled_violation) {
                pooled_violation = l;
                pooled_idx = int(j);
            }
        }
        Vector g_hat;
        if (pooled_idx >= 0) {
            g_hat = poly.to_reduced(pool[pooled_idx].a);
            if (g_hat.norm() <= 1e-14) {
                pool.erase(pool.begin() + pooled_idx);
                --iter;  // no progress consumed; pool is finite so this terminates
                continue;
            }
            if (record)
                diag.cuts.push_back({state.iteration + 1, CutRecord::Source::Pool, 0.0,
                                     pooled_violation, pool[pooled_idx].a,
                                     pool[pooled_idx].b});
            state = ellipsoid_update(state, g_hat);
            if (record) diag.logdet_trace.push_back(state.logdet);
            if (state.logdet < logdet_floor) {
                reason = TerminationReason::VolumeFloor;
                break;
            }
            continue;
        }

        // 2. polytope feasibility cut
        if (auto pc = polytope_check(w, poly)) {
            g_hat = poly.to_reduced(pc->a);
            if (g_hat.norm() <= 1e-14)
                throw numerical_error("feasibility cut vanished in reduced coordinates");
            if (record)
                diag.cuts.push_back({state.iteration + 1, CutRecord::Source::Polytope, 0.0,
                                     pc->a.dot(w) + pc->b, pc->a, pc->b});
            state = ellipsoid_update(state, g_hat);
            if (record) diag.logdet_trace.push_back(state.logdet);
            if (state.logdet < logdet_floor) {
                reason = TerminationReason::VolumeFloor;
                break;
            }
            continue;
        }

        // 3. feasible center: ask the oracle
        ++oracle_calls;
        const OracleVerdict v = evaluate_oracle(w, points, model, oracle_cfg, &warm);
        if (v.lambda_star < best_lambda) {
            best_lambda = v.lambda_star;
            best_w = w;
        }
        if (v.kind == OracleAnswer::Yes) {
            EstimateBundle out = finalize(w, points, oracle_cfg.s, best_lambda, oracle_calls,
                                          iter, TerminationReason::OracleYes);
            out.cuts = std::move(diag.cuts);
            out.logdet_trace = std::move(diag.logdet_trace);
            return out;
        }
        if (record)
            diag.cuts.push_back({state.iteration + 1, CutRecord::Source::Oracle,
                                 v.lambda_star, 0.0, v.cut_coeffs, v.cut_offset});
        pool.push_back({v.cut_coeffs, v.cut_offset});
        while (int(pool.size()) > std::max(run_cfg.cut_pool, 1)) pool.pop_front();

        g_hat = poly.to_reduced(v.cut_coeffs);
        if (g_hat.norm() <= 1e-14)
            throw numerical_error("separating cut vanished in reduced coordinates");
        state = ellipsoid_update(state, g_hat);
        if (record) diag.logdet_trace.push_back(state.logdet);
        if (state.logdet < logdet_floor) {
            reason = TerminationReason::VolumeFloor;
            break;
        }
    }

    if (best_w.size() == 0)
        throw estimation_error("weight search ended before any feasible center was scored");
    EstimateBundle out =
        finalize(best_w, points, oracle_cfg.s, best_lambda, oracle_calls, iter, reason);
    out.cuts = std::move(diag.cuts);
    out.logdet_trace = std::move(diag.logdet_trace);
    return out;
}

EstimateBundle estimate_functional(const Dataset& data, const ModelAdapter& model,
                                   const PipelineConfig& cfg) {
    PruneResult pruned = prune(model, data, cfg.tau_prune, cfg.c_prune);

    std::vector<Vector> points;
    points.reserve(pruned.data.samples.size());
    for (const Observation& obs : pruned.data.samples)
        points.push_back(apply_g(pruned.model, obs));

    OracleConfig ocfg = make_oracle_config(pruned.model, data.epsilon, cfg.c_sep);
    if (cfg.spca_tol > 0.0) ocfg.spca_tol = cfg.spca_tol;
    ocfg.spca_max_iters = cfg.spca_max_iters;
    ocfg.screen_threshold = cfg.screen_threshold;
    ocfg.screen_size = cfg.screen_size;

    EstimateBundle bundle = run_ellipsoid(points, pruned.model, ocfg, cfg.run);
    bundle.kept = std::move(pruned.kept);
    return bundle;
}

JointEstimate joint_mean_cov_estimate(const Dataset& data, const JointConfig& cfg) {
    const int n = data.size();
    const int third = n / 3;
    if (third < 1) throw input_error("joint estimation needs at least three samples");
    const double eps = data.epsilon;
    // pair differencing doubles the contamination fraction the covariance
    // stage has to absorb
    if (2.0 * eps >= 0.5)
        throw input_error("joint estimation requires contamination below 0.25");
    const int d = int(data.samples[0].x.size());
    const bool labeled = data.hidden_labels.has_value();

    Dataset diffs;
    diffs.epsilon = 2.0 * eps;
    diffs.seed = data.seed;
    diffs.samples.reserve(third);
    if (labeled) diffs.hidden_labels.emplace();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < third; ++i) {
        Observation o;
        o.x = (data.samples[i].x - data.samples[third + i].x) * inv_sqrt2;
        diffs.samples.push_back(std::move(o));
        if (labeled)
            diffs.hidden_labels->push_back(
                ((*data.hidden_labels)[i] | (*data.hidden_labels)[third + i]) ? 1 : 0);
    }

    // Estimation-time adapter: parameters unknown, so regularity constants
    // are taken at the zero matrix.
    const ModelAdapter cov_model = make_covariance_model(Matrix::Zero(d, d), cfg.s_cov);
    JointEstimate joint;
    joint.cov_bundle = estimate_functional(diffs, cov_model, cfg.pipeline);

    // reshaped estimate is symmetrized and kept hollow
    Matrix S = Matrix::Zero(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            if (r == c) continue;
            S(r, c) = 0.5 * (joint.cov_bundle.theta_hat(r * d + c) +
                             joint.cov_bundle.theta_hat(c * d + r));
        }
    Matrix sigma = Matrix::Identity(d, d) + S;

    bool floored = false;
    const Matrix whitener = sym_inv_sqrt(sigma, cfg.eig_floor, &floored);
    joint.regularized = floored;
    if (floored) {
        // report the floored (positive definite) reconstruction
        const EigResult eig = eig_sym(sigma);
        Vector lam = eig.values;
        for (int i = 0; i < lam.size(); ++i) lam(i) = std::max(lam(i), cfg.eig_floor);
        sigma = eig.vectors * lam.asDiagonal() * eig.vectors.transpose();
        sigma = 0.5 * (sigma + sigma.transpose());
    }
    joint.sigma_hat = sigma;

    Dataset third_batch;
    third_batch.epsilon = eps;
    third_batch.seed = data.seed;
    third_batch.samples.reserve(third);
    if (labeled) third_batch.hidden_labels.emplace();
    for (int i = 2 * third; i < 3 * third; ++i) {
        Observation o;
        o.x = whitener * data.samples[i].x;
        third_batch.samples.push_back(std::move(o));
        if (labeled) third_batch.hidden_labels->push_back((*data.hidden_labels)[i]);
    }

    const ModelAdapter mean_model = make_mean_model(Vector::Zero(d), cfg.s_mean);
    joint.mean_bundle = estimate_functional(third_batch, mean_model, cfg.pipeline);

    // undo the whitening on the location estimate
    joint.mu_hat = sym_sqrt(sigma, cfg.eig_floor) * joint.mean_bundle.theta_hat;
    return joint;
}

}  // namespace robsparse
