#pragma once

#include "robsparse/types.hpp"

namespace robsparse {

// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending.
struct EigResult {
    Vector values;
    Matrix vectors;  // column k pairs with values(k)
    int sweeps = 0;
};

// Cyclic-by-rows Jacobi rotation eigensolver.  Deterministic: fixed rotation
// order, no pivot search.  Converged when the off-diagonal Frobenius mass
// drops below tol_rel * ||M||_F; throws numerical_error if max_sweeps sweeps
// do not get there.
EigResult eig_sym(const Matrix& M, double tol_rel = 1e-12, int max_sweeps = 64);

// M^{1/2} and M^{-1/2} for symmetric positive semi-definite M.  Eigenvalues
// below eig_floor are lifted to eig_floor before the root is taken; *floored
// reports whether any lift happened.
Matrix sym_sqrt(const Matrix& M, double eig_floor, bool* floored = nullptr);
Matrix sym_inv_sqrt(const Matrix& M, double eig_floor, bool* floored = nullptr);

}  // namespace robsparse
