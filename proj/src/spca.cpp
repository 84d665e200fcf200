#include "robsparse/spca.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "robsparse/errors.hpp"
#include "robsparse/jacobi.hpp"

namespace robsparse {

namespace {

double l11_norm(const Matrix& M) { return M.cwiseAbs().sum(); }

// Euclidean projection of eigenvalues onto {x >= 0, sum x = 1}
Vector project_simplex(const Vector& v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, tau = 0.0;
    int k = 0;
    for (int i = 0; i < n; ++i) {
        cum += u[i];
        const double cand = (cum - 1.0) / (i + 1);
        if (u[i] - cand > 0.0) {
            k = i + 1;
            tau = cand;
        }
    }
    (void)k;
    Vector out(n);
    for (int i = 0; i < n; ++i) out(i) = std::max(v(i) - tau, 0.0);
    return out;
}

Matrix soft_threshold(const Matrix& M, double t) {
    return M.unaryExpr([t](double x) {
        if (x > t) return x - t;
        if (x < -t) return x + t;
        return 0.0;
    });
}

}  // namespace

SpcaProblem::SpcaProblem(Matrix E_, double s_, double tol_, int max_iters_)
    : E(std::move(E_)), s(s_), tol(tol_), max_iters(max_iters_) {
    if (E.rows() != E.cols()) throw input_error("SpcaProblem: E not square");
    if ((E - E.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, E.norm()))
        throw input_error("SpcaProblem: E not symmetric");
    E = 0.5 * (E + E.transpose());
    if (s < 1.0) throw input_error("SpcaProblem: s must be >= 1");
    if (tol <= 0.0) throw input_error("SpcaProblem: tol must be positive");
    if (max_iters < 1) throw input_error("SpcaProblem: max_iters must be >= 1");
}

Matrix project_spectraplex(const Matrix& M) {
    const EigResult e = eig_sym(M);
    const Vector lam = project_simplex(e.values);
    // only the surviving eigenpairs contribute
    Matrix out = Matrix::Zero(M.rows(), M.cols());
    for (int k = 0; k < lam.size(); ++k) {
        if (lam(k) == 0.0) continue;
        out.noalias() += lam(k) * e.vectors.col(k) * e.vectors.col(k).transpose();
    }
    return 0.5 * (out + out.transpose());
}

Matrix project_l11_ball(const Matrix& M, double s) {
    if (s <= 0.0) throw input_error("project_l11_ball: s must be positive");
    const double total = l11_norm(M);
    if (total <= s) return M;
    // ||soft(M, t)||_{1,1} is continuous and decreasing in t; bisect to s
    double lo = 0.0, hi = M.cwiseAbs().maxCoeff();
    double mid = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double val = l11_norm(soft_threshold(M, mid));
        if (std::abs(val - s) <= 1e-9 * s) break;
        if (val > s)
            lo = mid;
        else
            hi = mid;
    }
    return soft_threshold(M, mid);
}

SpcaSolution solve_relaxation(const SpcaProblem& problem, SpcaWarmStart* warm) {
    const int p = static_cast<int>(problem.E.rows());
    const Matrix& E = problem.E;

    Matrix Z, U;
    double rho = problem.penalty;
    if (warm && warm->valid && warm->Z.rows() == p) {
        Z = warm->Z;
        U = warm->U;
        rho = warm->penalty;
    } else {
        Z = Matrix::Identity(p, p) / p;  // feasible for both constraint sets
        U = Matrix::Zero(p, p);
    }

    Matrix X = Z;
    double primal = 0.0, dual = 0.0;
    int it = 0;
    bool converged = false;
    int last_rho_change = 0;

    // high-precision solves must land the l1,1 invariant without correction
    const bool strict = problem.tol <= 1e-5;

    for (it = 1; it <= problem.max_iters; ++it) {
        X = project_spectraplex(Z - U + E / rho);
        const Matrix Z_prev = Z;
        Z = project_l11_ball(X + U, problem.s);
        U += X - Z;

        primal = (X - Z).norm();
        dual = rho * (Z - Z_prev).norm();

        if (primal <= problem.tol && dual <= problem.tol) {
            if (!strict || l11_norm(X) <= problem.s + 1e-6) {
                converged = true;
                break;
            }
        }

        // residual balancing; frozen late so the fixed-penalty convergence
        // theory applies to the tail of the run, and skipped once the lagging
        // residual is already below tolerance
        if (it - last_rho_change >= 10 && it < 2000) {
            if (primal > 10.0 * dual && primal > problem.tol) {
                rho *= 2.0;
                U *= 0.5;
                last_rho_change = it;
            } else if (dual > 10.0 * primal && dual > problem.tol) {
                rho *= 0.5;
                U *= 2.0;
                last_rho_change = it;
            }
        }
    }
    if (it > problem.max_iters) it = problem.max_iters;

    if (warm) {
        warm->Z = Z;
        warm->U = U;
        warm->penalty = rho;
        warm->valid = true;
    }

    // The spectraplex block is exactly PSD with unit trace; its l1,1 norm can
    // overshoot s by (roughly) the primal residual.  Scaling down only the
    // off-diagonal part restores the budget: the result is a convex
    // combination of X and diag(X) (both in the spectraplex), and the
    // diagonal carries exactly unit l1,1 mass, so the blend weight solves
    // 1 + (1 - gamma)(l11 - 1) = s.
    Matrix H = X;
    const double l11 = l11_norm(H);
    const double over = l11 - problem.s;
    if (over > 1e-6) {
        const double gamma = std::min(1.0, over / std::max(l11 - 1.0, 1e-12));
        const Matrix D = Matrix(H.diagonal().asDiagonal());
        H = (1.0 - gamma) * H + gamma * D;
        H = 0.5 * (H + H.transpose());
    }

    SpcaSolution sol;
    sol.H_star = H;
    sol.lambda_star = (E * H).trace();
    sol.primal_residual = primal;
    sol.dual_residual = dual;
    sol.iterations = it;
    sol.converged = converged;
    return sol;
}

}  // namespace robsparse
