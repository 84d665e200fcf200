#include "robsparse/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robsparse/errors.hpp"

namespace robsparse {

namespace {

// indices ordered by (|v_i| descending, index ascending)
std::vector<int> magnitude_order(const Vector& v) {
    for (int i = 0; i < v.size(); ++i)
        if (!std::isfinite(v(i))) throw input_error("top_k: non-finite entry");
    std::vector<int> idx(static_cast<std::size_t>(v.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        const double ma = std::abs(v(a)), mb = std::abs(v(b));
        if (ma != mb) return ma > mb;
        return a < b;
    });
    return idx;
}

}  // namespace

ThresholdedVector top_k(const Vector& v, int k) {
    if (k < 1) throw input_error("top_k: k must be >= 1");
    const int d = static_cast<int>(v.size());
    const int keep = std::min(k, d);
    std::vector<int> idx = magnitude_order(v);

    ThresholdedVector out;
    out.values = Vector::Zero(d);
    out.support.assign(idx.begin(), idx.begin() + keep);
    std::sort(out.support.begin(), out.support.end());
    for (int i : out.support) out.values(i) = v(i);
    return out;
}

double sparse_restricted_l2(const Vector& v, int s) {
    if (s < 1) throw input_error("sparse_restricted_l2: s must be >= 1");
    const int d = static_cast<int>(v.size());
    const int keep = std::min(s, d);
    std::vector<int> idx = magnitude_order(v);
    double ss = 0.0;
    for (int i = 0; i < keep; ++i) ss += v(idx[i]) * v(idx[i]);
    return std::sqrt(ss);
}

}  // namespace robsparse
