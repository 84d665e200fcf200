#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "robsparse/types.hpp"

namespace robsparse {

// splitmix64 finalizer; used to derive independent stream keys from
// (seed, index, purpose) tuples so that sample i does not depend on how many
// variates samples 0..i-1 consumed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL + (b << 1 | 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic RNG: mt19937_64 has a standardized output sequence, and the
// uniform/normal transforms below are ours, so streams do not depend on the
// standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Box-Muller; the pair is cached so consecutive calls consume two
    // uniforms per two normals.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    bool bernoulli(double p) { return uniform() < p; }

    Vector normal_vector(int d) {
        Vector v(d);
        for (int i = 0; i < d; ++i) v(i) = normal();
        return v;
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stream purposes for per-point keying.  Keeping the label, inlier, and
// outlier draws on separate streams makes contamination patterns nested in
// epsilon and keeps the inlier values independent of epsilon entirely.
constexpr std::uint64_t kStreamLabel = 1;
constexpr std::uint64_t kStreamClean = 2;
constexpr std::uint64_t kStreamOutlier = 3;

inline Rng point_stream(std::uint64_t seed, std::uint64_t kind, std::uint64_t index) {
    return Rng(mix_seed(mix_seed(seed, kind), index));
}

}  // namespace robsparse
