#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

namespace robsparse {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ModelId { Mean, Covariance, LinearRegression, Glm, Logistic };

// One observation: a covariate vector, plus a response for the paired models
// (regression / GLM / logistic).  Unpaired models ignore y.
struct Observation {
    Vector x;
    double y = 0.0;
};

// A sample batch.  hidden_labels, when present, marks each point as inlier
// (false) or adversarial (true); estimators must never read it -- it exists
// for diagnostics and simulator bookkeeping only.
struct Dataset {
    std::vector<Observation> samples;
    std::optional<std::vector<std::uint8_t>> hidden_labels;  // 1 = contaminated
    double epsilon = 0.0;
    std::uint64_t seed = 0;

    int size() const { return static_cast<int>(samples.size()); }
};

}  // namespace robsparse
