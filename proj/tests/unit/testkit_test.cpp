#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "robsparse/errors.hpp"
#include "robsparse/jacobi.hpp"
#include "robsparse/oracle.hpp"
#include "robsparse/rng.hpp"
#include "robsparse/simulator.hpp"
#include "robsparse/testkit.hpp"

using namespace robsparse;

TEST_CASE("exact sparse operator norm on pinned matrices") {
    SUBCASE("diagonal: best singleton is the largest diagonal entry") {
        Matrix D = Matrix::Zero(3, 3);
        D(0, 0) = 4.0;
        D(1, 1) = 1.0;
        const SparseOpnormResult r = sparse_opnorm_exact(D, 1);
        CHECK(r.abs_value == doctest::Approx(4.0));
        CHECK(r.max_eig == doctest::Approx(4.0));
        CHECK(r.abs_subset == std::vector<int>{0});
    }
    SUBCASE("pure off-diagonal coupling needs both coordinates") {
        Matrix M = Matrix::Zero(2, 2);
        M(0, 1) = M(1, 0) = 3.0;
        const SparseOpnormResult r2 = sparse_opnorm_exact(M, 2);
        CHECK(r2.abs_value == doctest::Approx(3.0));
        CHECK(r2.max_eig == doctest::Approx(3.0));
        const SparseOpnormResult r1 = sparse_opnorm_exact(M, 1);
        CHECK(r1.abs_value == doctest::Approx(0.0));
        CHECK(r1.max_eig == doctest::Approx(0.0));
    }
    SUBCASE("negative definite input separates the two statistics") {
        const Matrix M = -Matrix::Identity(3, 3);
        const SparseOpnormResult r = sparse_opnorm_exact(M, 2);
        CHECK(r.abs_value == doctest::Approx(1.0));
        CHECK(r.max_eig == doctest::Approx(-1.0));
    }
}

TEST_CASE("sparse opnorm subset attains the reported value") {
    Rng rng(606);
    for (int trial = 0; trial < 10; ++trial) {
        const int p = 7, s = 3;
        Matrix M(p, p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j <= i; ++j) M(i, j) = M(j, i) = rng.normal();
        const SparseOpnormResult r = sparse_opnorm_exact(M, s);
        REQUIRE(int(r.abs_subset.size()) == s);

        Matrix sub(s, s);
        for (int a = 0; a < s; ++a)
            for (int b = 0; b < s; ++b) sub(a, b) = M(r.abs_subset[a], r.abs_subset[b]);
        const EigResult e = eig_sym(sub);
        const double attained =
            std::max(std::abs(e.values(0)), std::abs(e.values(s - 1)));
        CHECK(attained == doctest::Approx(r.abs_value).epsilon(1e-10));
    }
}

TEST_CASE("sparse opnorm enumeration guard") {
    CHECK_THROWS_AS(sparse_opnorm_exact(Matrix::Identity(25, 25), 2), input_error);
}

TEST_CASE("true covariance of g matches the model map for vector models") {
    Vector beta = Vector::Zero(4);
    beta(0) = 0.8;
    const ModelAdapter reg = make_regression_model(beta, 1.0, 1);
    const Matrix truth = true_covariance_of_g(reg);
    const Matrix mapped = covariance_map_F(reg, true_functional(reg));
    CHECK((truth - mapped).norm() <= 1e-9);

    const ModelAdapter mean = make_mean_model(Vector::Zero(5), 2);
    CHECK((true_covariance_of_g(mean) - Matrix::Identity(5, 5)).norm() <= 1e-12);
}

TEST_CASE("covariance model: the algebraic map and the true covariance differ by the baseline") {
    // the estimator's curvature map drops the theta-independent fourth-moment
    // baseline; at S = 0 the true covariance of g is that baseline itself
    const int d = 3;
    const ModelAdapter cov = make_covariance_model(Matrix::Zero(d, d), 1);
    const Matrix truth = true_covariance_of_g(cov);
    const Matrix mapped = covariance_map_F(cov, Vector::Zero(d * d));
    CHECK(mapped.norm() == doctest::Approx(0.0));
    CHECK(truth.norm() > 0.5);  // the baseline is not zero
}

TEST_CASE("monte carlo moment check passes for clean models") {
    const ModelAdapter mean = make_mean_model(Vector::Ones(4), 2);
    const MomentCheckReport a = monte_carlo_cov_check(mean, 20000, 11);
    CHECK(a.mean_ok);
    CHECK(a.cov_ok);
    CHECK(a.n_samples == 20000);

    Matrix S = Matrix::Zero(3, 3);
    S(0, 1) = S(1, 0) = 0.3;
    const MomentCheckReport b = monte_carlo_cov_check(make_covariance_model(S, 2), 20000, 12);
    CHECK(b.mean_ok);
    CHECK(b.cov_ok);
}

TEST_CASE("condition report on a clean dataset") {
    const int d = 8, n = 500;
    Vector mu = Vector::Zero(d);
    mu(0) = 1.0;
    const ModelAdapter model = make_mean_model(mu, 1);
    Dataset data = sample_clean(model, n, 2024);
    data.hidden_labels = std::vector<std::uint8_t>(n, 0);
    data.epsilon = 0.1;

    const ConditionReport rep =
        check_conditions(data, model, accuracy_delta(ModelId::Mean, 0.1), 10, 3.0);
    CHECK(rep.all_ok);
    CHECK(rep.delta == doctest::Approx(accuracy_delta(ModelId::Mean, 0.1)));
    CHECK(rep.weight_samples == 10);
    // no contamination: the restricted weights equal the ideal ones
    CHECK((rep.w_good - rep.w_g_restricted).norm() <= 1e-12);
    CHECK((rep.w_good - Vector::Constant(n, 1.0 / n)).norm() <= 1e-12);

    // the JSON rendering is parseable and carries every entry
    const nlohmann::json j = nlohmann::json::parse(rep.to_json());
    CHECK(j.at("conditions").size() == rep.entries.size());
    CHECK(j.at("all_ok").get<bool>());
}

TEST_CASE("condition report flags an oversized contaminated set") {
    const int n = 100;
    const ModelAdapter model = make_mean_model(Vector::Zero(4), 1);
    Dataset data = sample_clean(model, n, 3030);
    auto labels = std::vector<std::uint8_t>(n, 0);
    for (int i = 0; i < 40; ++i) labels[i] = 1;  // way past the 10% budget
    data.hidden_labels = labels;
    data.epsilon = 0.1;

    const ConditionReport rep =
        check_conditions(data, model, accuracy_delta(ModelId::Mean, 0.1), 5, 3.0);
    CHECK_FALSE(rep.all_ok);
    bool found = false;
    for (const auto& e : rep.entries)
        if (e.name == "bad_fraction") {
            found = true;
            CHECK_FALSE(e.ok);
        }
    CHECK(found);
}

TEST_CASE("support recall") {
    Vector truth = Vector::Zero(5);
    truth(1) = 1.0;
    truth(2) = -2.0;
    Vector est = Vector::Zero(5);
    est(0) = 0.5;
    est(1) = 0.9;
    CHECK(support_recall(est, truth) == doctest::Approx(0.5));
    CHECK(support_recall(truth, truth) == doctest::Approx(1.0));
    CHECK(support_recall(Vector::Zero(5), truth) == doctest::Approx(0.0));
    CHECK(support_recall(est, Vector::Zero(5)) == doctest::Approx(1.0));
}
