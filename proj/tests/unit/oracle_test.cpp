#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "robsparse/errors.hpp"
#include "robsparse/oracle.hpp"
#include "robsparse/simulator.hpp"
#include "robsparse/thresholding.hpp"
#include "robsparse/weights.hpp"

using namespace robsparse;

namespace {

std::vector<Vector> g_points(const ModelAdapter& model, const Dataset& data) {
    std::vector<Vector> pts;
    pts.reserve(data.samples.size());
    for (const Observation& o : data.samples) pts.push_back(apply_g(model, o));
    return pts;
}

Vector good_weights(const Dataset& data) {
    const auto& labels = *data.hidden_labels;
    const int m = data.size();
    int good = 0;
    for (int i = 0; i < m; ++i)
        if (!labels[i]) ++good;
    Vector w = Vector::Zero(m);
    for (int i = 0; i < m; ++i)
        if (!labels[i]) w(i) = 1.0 / good;
    return w;
}

// mean model with an axis-aligned point mass: the standard hard instance
struct AxisInstance {
    ModelAdapter model;
    Dataset data;
    std::vector<Vector> points;
    OracleConfig config;
};

AxisInstance make_axis_instance(std::uint64_t seed, double c_sep) {
    AxisInstance inst{make_mean_model(Vector::Zero(6), 1), {}, {}, {}};
    ContaminationSpec spec;
    spec.epsilon = 0.1;
    Vector shift = Vector::Zero(6);
    shift(2) = 3.0;
    spec.law = PointMassQ{shift, 1.0};
    inst.data = sample_contaminated(inst.model, 400, seed, spec);
    inst.points = g_points(inst.model, inst.data);
    inst.config = make_oracle_config(inst.model, spec.epsilon, c_sep);
    return inst;
}

}  // namespace

TEST_CASE("accuracy_delta formulas and the zero limit") {
    for (ModelId id : {ModelId::Mean, ModelId::Covariance, ModelId::LinearRegression,
                       ModelId::Glm, ModelId::Logistic})
        CHECK(accuracy_delta(id, 0.0) == 0.0);

    const double e = 0.1, lg = std::log(10.0);
    CHECK(accuracy_delta(ModelId::Mean, e) == doctest::Approx(e * std::sqrt(lg)));
    CHECK(accuracy_delta(ModelId::Logistic, e) == doctest::Approx(e * lg));
    CHECK(accuracy_delta(ModelId::Covariance, e) == doctest::Approx(e * lg * lg));
    CHECK(accuracy_delta(ModelId::LinearRegression, e) == doctest::Approx(e * lg * lg));
    CHECK(accuracy_delta(ModelId::Glm, e) == doctest::Approx(e * lg * lg));
}

TEST_CASE("acceptance threshold scales with the regularity constants") {
    Vector beta = Vector::Zero(4);
    beta(0) = 1.0;
    const ModelAdapter m = make_regression_model(beta, 1.0, 1);
    const OracleConfig cfg = make_oracle_config(m, 0.1, 2.0);
    const double delta = accuracy_delta(ModelId::LinearRegression, 0.1);
    CHECK(cfg.tau_sep == doctest::Approx(2.0 * (4.0 * 4.0 + 3.0) * delta));
    CHECK(cfg.epsilon == 0.1);
    CHECK(cfg.s == 1);
}

TEST_CASE("contaminated uniform weights are rejected with an exact-touch cut") {
    const AxisInstance inst = make_axis_instance(0xA11CE, 1.0);
    const int m = inst.data.size();
    const Vector w = Vector::Constant(m, 1.0 / m);

    const OracleVerdict v = evaluate_oracle(w, inst.points, inst.model, inst.config);
    REQUIRE(v.kind == OracleAnswer::Cut);
    CHECK(v.lambda_star > inst.config.tau_sep);

    // the hyperplane passes through the rejected point: <a,w> + b = 0
    CHECK(std::abs(v.cut_coeffs.dot(w) + v.cut_offset) <= 1e-9 * std::max(1.0, v.lambda_star));
    // coefficients are quadratic forms of a PSD matrix, hence nonnegative
    CHECK(v.cut_coeffs.minCoeff() >= -1e-12);
    // outliers sit far from the weighted mean, so their coefficients dominate
    // on average (a single clean tail point can still score high)
    double good_sum = 0.0, bad_sum = 0.0;
    int ng = 0, nb = 0;
    for (int i = 0; i < m; ++i) {
        if ((*inst.data.hidden_labels)[i]) {
            bad_sum += v.cut_coeffs(i);
            ++nb;
        } else {
            good_sum += v.cut_coeffs(i);
            ++ng;
        }
    }
    REQUIRE(nb > 0);
    CHECK(bad_sum / nb > 3.0 * good_sum / ng);
}

TEST_CASE("ideal weights are accepted at a calibrated threshold") {
    const AxisInstance inst = make_axis_instance(0xB0B, 3.0);
    const Vector w_good = good_weights(inst.data);
    REQUIRE(weights_feasible(w_good, WeightPolytope(inst.data.size(), 0.1)));

    const OracleVerdict v = evaluate_oracle(w_good, inst.points, inst.model, inst.config);
    CHECK(v.kind == OracleAnswer::Yes);
    CHECK(v.lambda_star <= inst.config.tau_sep);
}

TEST_CASE("cuts reject the queried weights but keep the ideal ones feasible") {
    const AxisInstance inst = make_axis_instance(0xC4B4L, 3.0);
    const int m = inst.data.size();
    const Vector w_uniform = Vector::Constant(m, 1.0 / m);
    const Vector w_good = good_weights(inst.data);

    const OracleVerdict v = evaluate_oracle(w_uniform, inst.points, inst.model, inst.config);
    REQUIRE(v.kind == OracleAnswer::Cut);
    CHECK(v.cut_coeffs.dot(w_good) + v.cut_offset < 0.0);
}

TEST_CASE("theta_hat is truncated to 2s coordinates") {
    const AxisInstance inst = make_axis_instance(0xD06, 1.0);
    const Vector w = Vector::Constant(inst.data.size(), 1.0 / inst.data.size());
    const OracleVerdict v = evaluate_oracle(w, inst.points, inst.model, inst.config);
    int nnz = 0;
    for (int j = 0; j < v.theta_hat.size(); ++j)
        if (v.theta_hat(j) != 0.0) ++nnz;
    CHECK(nnz <= 2 * inst.config.s);
}

TEST_CASE("infeasible weights are a precondition violation") {
    const AxisInstance inst = make_axis_instance(0xE77, 1.0);
    Vector w = Vector::Constant(inst.data.size(), 1.0 / inst.data.size());
    w(0) = -0.01;
    w(1) += 0.01 + 1.0 / inst.data.size();
    CHECK_THROWS_AS(evaluate_oracle(w, inst.points, inst.model, inst.config), input_error);
}

TEST_CASE("oracle evaluation is deterministic") {
    const AxisInstance inst = make_axis_instance(0xF00D, 1.0);
    const Vector w = Vector::Constant(inst.data.size(), 1.0 / inst.data.size());
    const OracleVerdict a = evaluate_oracle(w, inst.points, inst.model, inst.config);
    const OracleVerdict b = evaluate_oracle(w, inst.points, inst.model, inst.config);
    CHECK(a.lambda_star == b.lambda_star);
    CHECK((a.cut_coeffs - b.cut_coeffs).norm() == 0.0);
    CHECK(a.cut_offset == b.cut_offset);
}

TEST_CASE("weighted deviation matrix is small on clean data at the truth") {
    const int d = 5, n = 4000;
    Vector mu = Vector::Zero(d);
    mu(0) = 1.0;
    const ModelAdapter model = make_mean_model(mu, 1);
    const Dataset data = sample_clean(model, n, 321);
    const std::vector<Vector> pts = g_points(model, data);
    const Vector w = Vector::Constant(n, 1.0 / n);

    const Matrix E = weighted_deviation_matrix(w, pts, model, mu);
    CHECK((E - E.transpose()).norm() <= 1e-12);
    // entrywise sampling noise is O(1/sqrt(n))
    CHECK(E.cwiseAbs().maxCoeff() <= 10.0 / std::sqrt(double(n)));
}

TEST_CASE("screening localizes the relaxation in high dimension") {
    // d = 150 puts the oracle on the screened path; the planted coordinate
    // must land in the working set and the cut must still touch the query
    const int d = 150, n = 300;
    const ModelAdapter model = make_mean_model(Vector::Zero(d), 1);
    ContaminationSpec spec;
    spec.epsilon = 0.1;
    Vector shift = Vector::Zero(d);
    shift(17) = 4.0;
    spec.law = PointMassQ{shift, 1.0};
    const Dataset data = sample_contaminated(model, n, 0x5EED, spec);
    const std::vector<Vector> pts = g_points(model, data);
    const Vector w = Vector::Constant(n, 1.0 / n);

    OracleConfig cfg = make_oracle_config(model, 0.1, 1.0);
    REQUIRE(d > cfg.screen_threshold);
    const OracleVerdict v = evaluate_oracle(w, pts, model, cfg);

    REQUIRE(v.kind == OracleAnswer::Cut);
    REQUIRE_FALSE(v.working_set.empty());
    CHECK(int(v.working_set.size()) <= cfg.screen_size);
    CHECK(std::is_sorted(v.working_set.begin(), v.working_set.end()));
    CHECK(std::find(v.working_set.begin(), v.working_set.end(), 17) != v.working_set.end());
    CHECK(std::abs(v.cut_coeffs.dot(w) + v.cut_offset) <= 1e-9 * std::max(1.0, v.lambda_star));

    // the screened certificate embeds with zeros, so up to solver tolerance
    // it never exceeds the full one
    OracleConfig full = cfg;
    full.screen_threshold = d + 1;
    const OracleVerdict vf = evaluate_oracle(w, pts, model, full);
    REQUIRE(vf.kind == OracleAnswer::Cut);
    CHECK(v.lambda_star <= vf.lambda_star + 3.0 * cfg.spca_tol + 1e-6);
    // on an instance with one hot coordinate the two certificates agree
    CHECK(v.lambda_star == doctest::Approx(vf.lambda_star).epsilon(0.05));
}
