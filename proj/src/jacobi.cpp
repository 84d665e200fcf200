#include "robsparse/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "robsparse/errors.hpp"

namespace robsparse {

namespace {

double offdiag_frob(const Matrix& A) {
    double s = 0.0;
    const int n = static_cast<int>(A.rows());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s += 2.0 * A(i, j) * A(i, j);
    return std::sqrt(s);
}

}  // namespace

EigResult eig_sym(const Matrix& M, double tol_rel, int max_sweeps) {
    if (M.rows() != M.cols()) throw input_error("eig_sym: matrix not square");
    const int n = static_cast<int>(M.rows());
    Matrix A = 0.5 * (M + M.transpose());  // enforce exact symmetry
    Matrix V = Matrix::Identity(n, n);

    const double norm = std::max(A.norm(), 1e-300);
    const double stop = tol_rel * norm;

    if (n == 1) {
        EigResult r;
        r.values = Vector::Constant(1, A(0, 0));
        r.vectors = V;
        return r;
    }

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (offdiag_frob(A) < stop) break;
        // one cyclic sweep over the strict upper triangle
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                // rotating already-tiny entries just churns rounding noise
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                // stable tangent of the rotation angle
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                A(p, q) = 0.0;
                A(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    const double resid = offdiag_frob(A);
    if (resid >= stop)
        throw numerical_error("eig_sym: no convergence after " + std::to_string(sweep) +
                              " sweeps (off-diagonal residual " + std::to_string(resid) +
                              ", target " + std::to_string(stop) + ")");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return A(a, a) > A(b, b); });

    EigResult r;
    r.values = Vector(n);
    r.vectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        r.values(k) = A(order[k], order[k]);
        r.vectors.col(k) = V.col(order[k]);
    }
    r.sweeps = sweep;
    return r;
}

namespace {

Matrix powered_roots(const Matrix& M, double expo, double eig_floor, bool* floored) {
    EigResult e = eig_sym(M);
    bool lifted = false;
    Vector d(e.values.size());
    for (int i = 0; i < e.values.size(); ++i) {
        double v = e.values(i);
        if (v < eig_floor) {
            v = eig_floor;
            lifted = true;
        }
        d(i) = std::pow(v, expo);
    }
    if (floored) *floored = lifted;
    return e.vectors * d.asDiagonal() * e.vectors.transpose();
}

}  // namespace

Matrix sym_sqrt(const Matrix& M, double eig_floor, bool* floored) {
    return powered_roots(M, 0.5, eig_floor, floored);
}

Matrix sym_inv_sqrt(const Matrix& M, double eig_floor, bool* floored) {
    return powered_roots(M, -0.5, eig_floor, floored);
}

}  // namespace robsparse
