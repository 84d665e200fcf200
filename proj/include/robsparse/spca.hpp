#pragma once

#include "robsparse/types.hpp"

namespace robsparse {

// max tr(E H)  s.t.  H >= 0, tr(H) = 1, ||H||_{1,1} <= s
//
// The one-sided relaxation of the s-sparse top eigenvalue: any s-sparse unit
// v gives a feasible H = v v^T, so the optimum upper-bounds the largest
// s-sparse eigenvalue (it does not certify the most-negative one).
struct SpcaProblem {
    Matrix E;  // symmetrized on construction
    double s;
    double tol = 1e-6;
    int max_iters = 50000;
    double penalty = 1.0;  // initial ADMM penalty

    SpcaProblem(Matrix E_, double s_, double tol_ = 1e-6, int max_iters_ = 50000);
};

struct SpcaSolution {
    Matrix H_star;       // PSD, unit trace, ||.||_{1,1} <= s + 1e-6
    double lambda_star;  // tr(E H_star)
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Carry-over state between consecutive solves on nearby E matrices (the
// ellipsoid loop produces exactly that); leaves results deterministic because
// the state itself is a deterministic function of the call sequence.
struct SpcaWarmStart {
    Matrix Z, U;
    double penalty = 1.0;
    bool valid = false;
};

// Frobenius-nearest PSD matrix with unit trace (eigenvalues projected onto
// the probability simplex).
Matrix project_spectraplex(const Matrix& M);

// Frobenius-nearest matrix with ||.||_{1,1} <= s: entrywise soft-threshold at
// the level found by bisection.
Matrix project_l11_ball(const Matrix& M, double s);

// Two-block splitting: one block holds the spectraplex constraint plus the
// linear objective, the other the l1,1 ball; both projections are exact.
SpcaSolution solve_relaxation(const SpcaProblem& problem, SpcaWarmStart* warm = nullptr);

}  // namespace robsparse
