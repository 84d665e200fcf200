#pragma once

#include "robsparse/models.hpp"
#include "robsparse/rng.hpp"

namespace robsparse::detail {

// Square root of the covariate covariance for the covariance model (identity
// is implicit elsewhere); computed once per sampling pass.
Matrix clean_sqrt_sigma(const ModelAdapter& model);

// One draw from the model's clean law with every Gaussian standard deviation
// multiplied by scale (scale = 1 is the clean distribution itself).
Observation draw_clean_observation(const ModelAdapter& model, const Matrix& sqrt_sigma, Rng& rng,
                                   double scale = 1.0);

}  // namespace robsparse::detail
