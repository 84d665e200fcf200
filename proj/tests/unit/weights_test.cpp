#include <cmath>

#include "doctest.h"
#include "robsparse/errors.hpp"
#include "robsparse/rng.hpp"
#include "robsparse/weights.hpp"

using namespace robsparse;

TEST_CASE("constructor validates its arguments") {
    CHECK_THROWS_AS(WeightPolytope(0, 0.1), input_error);
    CHECK_THROWS_AS(WeightPolytope(10, -0.01), input_error);
    CHECK_THROWS_AS(WeightPolytope(10, 0.5), input_error);
    CHECK_NOTHROW(WeightPolytope(10, 0.0));
    CHECK_NOTHROW(WeightPolytope(10, 0.4999));
}

TEST_CASE("cap matches the contamination budget") {
    const WeightPolytope poly(100, 0.1);
    CHECK(poly.cap() == doctest::Approx(1.0 / (0.8 * 100)));
    CHECK(poly.size() == 100);
    CHECK(poly.reduced_dim() == 99);
}

TEST_CASE("materialized basis is orthonormal and sums to zero") {
    const WeightPolytope poly(17, 0.1);
    const Matrix B = poly.materialize_basis();
    REQUIRE(B.rows() == 17);
    REQUIRE(B.cols() == 16);
    CHECK((B.transpose() * B - Matrix::Identity(16, 16)).norm() <= 1e-12);
    CHECK((Vector::Ones(17).transpose() * B).norm() <= 1e-12);
}

TEST_CASE("to_weights and to_reduced agree with the materialized basis") {
    Rng rng(88);
    const int m = 23;
    const WeightPolytope poly(m, 0.05);
    const Matrix B = poly.materialize_basis();

    const Vector z = rng.normal_vector(m - 1);
    const Vector w_fast = poly.to_weights(z);
    const Vector w_slow = Vector::Constant(m, 1.0 / m) + B * z;
    CHECK((w_fast - w_slow).norm() <= 1e-12);

    const Vector a = rng.normal_vector(m);
    const Vector r_fast = poly.to_reduced(a);
    const Vector r_slow = B.transpose() * a;
    CHECK((r_fast - r_slow).norm() <= 1e-12);
}

TEST_CASE("to_reduced inverts to_weights on the sum-zero part") {
    Rng rng(11);
    const int m = 40;
    const WeightPolytope poly(m, 0.2);
    const Vector z = rng.normal_vector(m - 1);
    const Vector w = poly.to_weights(z);
    const Vector back = poly.to_reduced(w - Vector::Constant(m, 1.0 / m));
    CHECK((back - z).norm() <= 1e-12);
}

TEST_CASE("uniform weights are feasible and pass the check") {
    const int m = 50;
    const WeightPolytope poly(m, 0.1);
    const Vector u = Vector::Constant(m, 1.0 / m);
    CHECK(weights_feasible(u, poly));
    CHECK_FALSE(polytope_check(u, poly).has_value());
}

TEST_CASE("negative coordinate produces the matching lower-bound cut") {
    const int m = 12;
    const WeightPolytope poly(m, 0.1);  // cap ~ 0.104, headroom ~ 0.021 per coordinate
    Vector w = Vector::Constant(m, 1.0 / m);
    const double deficit = w(2) + 0.01;
    w(2) = -0.01;
    for (int j = 3; j < 12; ++j) w(j) += deficit / 9.0;  // stays under the cap

    CHECK_FALSE(weights_feasible(w, poly));
    const auto cut = polytope_check(w, poly);
    REQUIRE(cut.has_value());
    // feasible side <a,w> + b <= 0 must exclude w and contain the uniform point
    CHECK(cut->a.dot(w) + cut->b > 0.0);
    CHECK(cut->a.dot(Vector::Constant(m, 1.0 / m)) + cut->b <= 0.0);
    // the cut is the violated bound itself: a = -e_2
    CHECK(cut->a(2) == doctest::Approx(-1.0));
    CHECK(cut->a.cwiseAbs().sum() == doctest::Approx(1.0));
    CHECK(cut->a.dot(w) + cut->b == doctest::Approx(0.01));
}

TEST_CASE("cap violation produces the matching upper-bound cut") {
    const int m = 10;
    const WeightPolytope poly(m, 0.25);  // cap = 1/(0.5 * 10) = 0.2
    Vector w = Vector::Constant(m, (1.0 - 0.35) / (m - 1));
    w(7) = 0.35;

    const auto cut = polytope_check(w, poly);
    REQUIRE(cut.has_value());
    CHECK(cut->a(7) == doctest::Approx(1.0));
    CHECK(cut->b == doctest::Approx(-poly.cap()));
    CHECK(cut->a.dot(w) + cut->b == doctest::Approx(0.35 - poly.cap()));
}

TEST_CASE("sum violation produces the sum cut") {
    const int m = 8;
    const WeightPolytope poly(m, 0.1);
    const Vector w = Vector::Constant(m, 0.2);  // sums to 1.6

    const auto cut = polytope_check(w, poly);
    REQUIRE(cut.has_value());
    CHECK(cut->a.dot(w) + cut->b == doctest::Approx(0.6));
    CHECK((cut->a - Vector::Ones(m)).norm() <= 1e-12);
}

TEST_CASE("the most violated constraint wins") {
    const int m = 5;
    const WeightPolytope poly(m, 0.1);  // cap = 0.25
    Vector w(m);
    w << 0.9, -0.2, 0.1, 0.1, 0.1;  // sums to 1; cap violation 0.65 beats lower violation 0.2

    const auto cut = polytope_check(w, poly);
    REQUIRE(cut.has_value());
    CHECK(cut->a(0) == doctest::Approx(1.0));
    CHECK(cut->a.dot(w) + cut->b == doctest::Approx(0.9 - 0.25));
}
