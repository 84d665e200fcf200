#include "robsparse/weights.hpp"

#include <cmath>
#include <vector>

#include "robsparse/errors.hpp"

namespace robsparse {

WeightPolytope::WeightPolytope(int m, double epsilon) : m_(m), epsilon_(epsilon) {
    if (m < 1) throw input_error("weight polytope needs at least one sample");
    if (epsilon < 0.0 || epsilon >= 0.5)
        throw input_error("contamination fraction must lie in [0, 0.5) for the weight cap");
    cap_ = 1.0 / ((1.0 - 2.0 * epsilon) * m);
}

// Helmert column k (1-based, k = 1..m-1): c_k on entries 0..k-1, -k c_k on
// entry k, zero below, with c_k = 1/sqrt(k (k+1)).  Orthonormal and sum-zero.
Vector WeightPolytope::to_weights(const Vector& z) const {
    if (z.size() != m_ - 1) throw input_error("reduced vector has wrong dimension");
    Vector w = Vector::Constant(m_, 1.0 / m_);
    if (m_ == 1) return w;
    // suffix(i) = sum_{k >= i} z(k-1) c_k, for k in 1..m-1
    std::vector<double> suffix(m_ + 1, 0.0);
    for (int k = m_ - 1; k >= 1; --k) {
        const double ck = 1.0 / std::sqrt(double(k) * (k + 1));
        suffix[k] = suffix[k + 1] + z(k - 1) * ck;
    }
    for (int i = 0; i < m_; ++i) {
        double wi = suffix[i + 1];
        if (i >= 1) {
            const double ci = 1.0 / std::sqrt(double(i) * (i + 1));
            wi -= double(i) * ci * z(i - 1);
        }
        w(i) += wi;
    }
    return w;
}

Vector WeightPolytope::to_reduced(const Vector& a) const {
    if (a.size() != m_) throw input_error("raw vector has wrong dimension");
    Vector out(m_ - 1);
    double prefix = 0.0;  // sum_{i < k} a(i)
    for (int k = 1; k < m_; ++k) {
        prefix += a(k - 1);
        const double ck = 1.0 / std::sqrt(double(k) * (k + 1));
        out(k - 1) = ck * (prefix - double(k) * a(k));
    }
    return out;
}

Matrix WeightPolytope::materialize_basis() const {
    Matrix B = Matrix::Zero(m_, m_ - 1);
    for (int k = 1; k < m_; ++k) {
        const double ck = 1.0 / std::sqrt(double(k) * (k + 1));
        for (int i = 0; i < k; ++i) B(i, k - 1) = ck;
        B(k, k - 1) = -double(k) * ck;
    }
    return B;
}

bool weights_feasible(const Vector& w, const WeightPolytope& poly, double tol) {
    if (w.size() != poly.size()) return false;
    if (std::abs(w.sum() - 1.0) > tol) return false;
    for (int i = 0; i < w.size(); ++i) {
        if (w(i) < -tol || w(i) > poly.cap() + tol) return false;
    }
    return true;
}

std::optional<PolytopeCut> polytope_check(const Vector& w, const WeightPolytope& poly,
                                          double tol) {
    if (w.size() != poly.size()) throw input_error("weight vector has wrong dimension");
    const int m = poly.size();
    const double cap = poly.cap();

    double worst = tol;
    int worst_idx = -1;   // -1: none, -2: sum constraint
    int worst_kind = 0;   // 0 lower bound, 1 cap, 2 sum
    const double sum_gap = w.sum() - 1.0;
    if (std::abs(sum_gap) > worst) {
        worst = std::abs(sum_gap);
        worst_idx = -2;
        worst_kind = 2;
    }
    for (int i = 0; i < m; ++i) {
        if (-w(i) > worst) {
            worst = -w(i);
            worst_idx = i;
            worst_kind = 0;
        }
        if (w(i) - cap > worst) {
            worst = w(i) - cap;
            worst_idx = i;
            worst_kind = 1;
        }
    }
    if (worst_idx == -1) return std::nullopt;

    PolytopeCut cut;
    cut.a = Vector::Zero(m);
    switch (worst_kind) {
        case 0:  // w_i >= 0 violated: cut -w_i <= 0
            cut.a(worst_idx) = -1.0;
            cut.b = 0.0;
            break;
        case 1:  // w_i <= cap violated: cut w_i - cap <= 0
            cut.a(worst_idx) = 1.0;
            cut.b = -cap;
            break;
        default: {  // sum constraint: cut s (sum w - 1) <= 0, s the violated side
            const double s = sum_gap > 0.0 ? 1.0 : -1.0;
            cut.a = Vector::Constant(m, s);
            cut.b = -s;
            break;
        }
    }
    return cut;
}

}  // namespace robsparse
