#pragma once

#include <cstdint>
#include <variant>

#include "robsparse/models.hpp"
#include "robsparse/types.hpp"

namespace robsparse {

// Outlier laws Q for the (1 - eps) P + eps Q mixture.  Paired models give
// outliers a response too; the unpaired ones ignore it.

// All mass at one point; paired models get y = y_value.
struct PointMassQ {
    Vector shift;
    double y_value = 1.0;
};

// Gaussian blob around a center, tight when spread is small.
struct ClusteredShiftQ {
    Vector center;
    double spread = 0.1;
    double y_value = 1.0;
};

// The clean law with every Gaussian standard deviation multiplied by
// sqrt(factor) -- heavier tails, same shape.
struct VarianceInflationQ {
    double factor = 9.0;
};

// Covariates planted along a fixed direction with the clean response negated
// (labels swapped for the logistic model).  Paired models only.
struct ResponseFlipQ {
    Vector direction;
    double magnitude = 1.0;
};

using OutlierLaw = std::variant<PointMassQ, ClusteredShiftQ, VarianceInflationQ, ResponseFlipQ>;

struct ContaminationSpec {
    double epsilon = 0.0;
    OutlierLaw law = PointMassQ{};
};

const char* outlier_law_name(const OutlierLaw& law);

// Draw n points from the contaminated mixture.  Point i flips an
// epsilon-coin and then draws from its own keyed substream, so the clean
// points are bitwise identical across epsilon values with the same seed and
// the contaminated index set is nested as epsilon grows.
Dataset sample_contaminated(const ModelAdapter& model, int n, std::uint64_t seed,
                            const ContaminationSpec& spec);

}  // namespace robsparse
