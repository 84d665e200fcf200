#pragma once

#include <vector>

#include "robsparse/types.hpp"

namespace robsparse {

// Result of hard thresholding: the vector with everything outside the kept
// support zeroed, plus the kept indices in ascending order.
struct ThresholdedVector {
    Vector values;
    std::vector<int> support;
};

// Keep the k entries of largest absolute value (all entries if k >= dim).
// Ties in |v_i| break toward the lower index, so the selection is a
// deterministic function of v.
ThresholdedVector top_k(const Vector& v, int k);

// l2 norm of the s largest-magnitude entries of v.
double sparse_restricted_l2(const Vector& v, int s);

}  // namespace robsparse
