#pragma once

#include <optional>

#include "robsparse/types.hpp"

namespace robsparse {

// Affine half-space cut over raw weights: feasible side is
// l(w) = <a, w> + b <= 0.
struct PolytopeCut {
    Vector a;
    double b = 0.0;
};

// The feasible weight set: sum w_i = 1, 0 <= w_i <= 1 / ((1 - 2 eps) m).
//
// The sum constraint is handled by parameterization: w = uniform + B z with B
// an orthonormal basis of the sum-zero subspace.  B is the Helmert basis and
// is never materialized -- both B z and B^T a are O(m) via prefix/suffix
// sums.
class WeightPolytope {
  public:
    WeightPolytope(int m, double epsilon);

    int size() const { return m_; }
    int reduced_dim() const { return m_ - 1; }
    double epsilon() const { return epsilon_; }
    double cap() const { return cap_; }

    Vector to_weights(const Vector& z) const;  // uniform + B z
    Vector to_reduced(const Vector& a) const;  // B^T a
    Matrix materialize_basis() const;          // m x (m-1); for tests

  private:
    int m_;
    double epsilon_;
    double cap_;
};

// Feasibility within tol on every constraint.
bool weights_feasible(const Vector& w, const WeightPolytope& poly, double tol = 1e-8);

// Most-violated constraint as a cut, or nullopt when feasible within tol.
std::optional<PolytopeCut> polytope_check(const Vector& w, const WeightPolytope& poly,
                                          double tol = 1e-8);

}  // namespace robsparse
