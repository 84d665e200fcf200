#include <cmath>

#include "doctest.h"
#include "robsparse/jacobi.hpp"
#include "robsparse/rng.hpp"

using namespace robsparse;

namespace {

Matrix random_symmetric(Rng& rng, int p) {
    Matrix A(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j <= i; ++j) A(i, j) = A(j, i) = rng.normal();
    return A;
}

}  // namespace

TEST_CASE("eig_sym reconstructs random symmetric matrices") {
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const int p = 3 + trial;
        const Matrix A = random_symmetric(rng, p);
        const EigResult e = eig_sym(A);

        const Matrix recon =
            e.vectors * e.values.asDiagonal() * e.vectors.transpose();
        CHECK((recon - A).norm() <= 1e-10 * std::max(1.0, A.norm()));
        CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(p, p)).norm() <= 1e-10);
        for (int k = 0; k + 1 < p; ++k) CHECK(e.values(k) >= e.values(k + 1));
    }
}

TEST_CASE("eig_sym on a diagonal matrix is exact") {
    Matrix D = Matrix::Zero(3, 3);
    D(0, 0) = -1.0;
    D(1, 1) = 5.0;
    D(2, 2) = 2.0;
    const EigResult e = eig_sym(D);
    CHECK(e.values(0) == doctest::Approx(5.0));
    CHECK(e.values(1) == doctest::Approx(2.0));
    CHECK(e.values(2) == doctest::Approx(-1.0));
}

TEST_CASE("sym_sqrt squares back to the input") {
    Rng rng(5);
    const int p = 6;
    Matrix B = random_symmetric(rng, p);
    const Matrix M = B * B.transpose() + 0.1 * Matrix::Identity(p, p);  // PD

    bool floored = true;
    const Matrix R = sym_sqrt(M, 1e-12, &floored);
    CHECK_FALSE(floored);
    CHECK((R * R - M).norm() <= 1e-9 * M.norm());
}

TEST_CASE("sym_inv_sqrt whitens") {
    Rng rng(6);
    const int p = 5;
    Matrix B = random_symmetric(rng, p);
    const Matrix M = B * B.transpose() + 0.5 * Matrix::Identity(p, p);

    const Matrix W = sym_inv_sqrt(M, 1e-12);
    CHECK((W * M * W - Matrix::Identity(p, p)).norm() <= 1e-9);
}

TEST_CASE("eigenvalue floor engages on singular input and is reported") {
    Matrix M = Matrix::Zero(2, 2);
    M(0, 0) = 4.0;  // second eigenvalue is exactly 0

    bool floored = false;
    const Matrix R = sym_sqrt(M, 1e-4, &floored);
    CHECK(floored);
    CHECK(R(0, 0) == doctest::Approx(2.0));
    CHECK(R(1, 1) == doctest::Approx(std::sqrt(1e-4)));

    const Matrix W = sym_inv_sqrt(M, 1e-4, &floored);
    CHECK(floored);
    CHECK(std::isfinite(W(1, 1)));
}
