#include "robsparse/simulator.hpp"

#include <cmath>

#include "robsparse/detail/draw.hpp"
#include "robsparse/errors.hpp"
#include "robsparse/rng.hpp"

namespace robsparse {

namespace {

bool paired_model(ModelId id) {
    return id == ModelId::LinearRegression || id == ModelId::Glm || id == ModelId::Logistic;
}

// Checked up front in sample_contaminated, not lazily in the draw: with
// epsilon > 0 a bad law must fail even when the epsilon-coin happens to
// produce no outliers.  At epsilon = 0 the law is never consulted, so the
// default-constructed spec stays a valid "no contamination" request.
void validate_law(const ModelAdapter& model, const OutlierLaw& law) {
    const int d = model.dim;
    if (const auto* pm = std::get_if<PointMassQ>(&law)) {
        if (pm->shift.size() != d)
            throw input_error("point-mass outlier has the wrong dimension");
        return;
    }
    if (const auto* cl = std::get_if<ClusteredShiftQ>(&law)) {
        if (cl->center.size() != d)
            throw input_error("clustered outlier center has the wrong dimension");
        if (!(cl->spread >= 0.0))
            throw input_error("clustered outlier spread must be nonnegative");
        return;
    }
    if (const auto* vi = std::get_if<VarianceInflationQ>(&law)) {
        if (!(vi->factor > 0.0))
            throw input_error("variance inflation factor must be positive");
        return;
    }
    const auto& rf = std::get<ResponseFlipQ>(law);
    if (!paired_model(model.id))
        throw input_error("response-flip contamination needs a model with a response");
    if (rf.direction.size() != d)
        throw input_error("response-flip direction has the wrong dimension");
    if (!(rf.direction.norm() > 0.0))
        throw input_error("response-flip direction must be nonzero");
}

Observation draw_outlier(const ModelAdapter& model, const Matrix& sqrt_sigma,
                         const OutlierLaw& law, Rng& rng) {
    Observation o;
    if (const auto* pm = std::get_if<PointMassQ>(&law)) {
        o.x = pm->shift;
        if (paired_model(model.id)) o.y = pm->y_value;
        return o;
    }
    if (const auto* cl = std::get_if<ClusteredShiftQ>(&law)) {
        o.x = cl->center + cl->spread * rng.normal_vector(model.dim);
        if (paired_model(model.id)) o.y = cl->y_value;
        return o;
    }
    if (const auto* vi = std::get_if<VarianceInflationQ>(&law)) {
        return detail::draw_clean_observation(model, sqrt_sigma, rng, std::sqrt(vi->factor));
    }
    const auto& rf = std::get<ResponseFlipQ>(law);
    const double nrm = rf.direction.norm();
    Observation clean = detail::draw_clean_observation(model, sqrt_sigma, rng);
    o.x = (rf.magnitude / nrm) * rf.direction;
    if (model.id == ModelId::Logistic) {
        // re-draw the label at the planted covariate, then swap it
        const GlmParams& p = std::get<GlmParams>(model.params);
        double prob = p.link.u(p.beta.dot(o.x));
        prob = std::min(1.0, std::max(0.0, prob));
        o.y = rng.bernoulli(prob) ? 0.0 : 1.0;
    } else {
        // clean response at the planted covariate, negated
        const double noise = clean.y - [&] {
            if (model.id == ModelId::LinearRegression)
                return std::get<RegressionParams>(model.params).beta.dot(clean.x);
            const GlmParams& p = std::get<GlmParams>(model.params);
            return p.link.u(p.beta.dot(clean.x));
        }();
        if (model.id == ModelId::LinearRegression)
            o.y = -(std::get<RegressionParams>(model.params).beta.dot(o.x) + noise);
        else {
            const GlmParams& p = std::get<GlmParams>(model.params);
            o.y = -(p.link.u(p.beta.dot(o.x)) + noise);
        }
    }
    return o;
}

}  // namespace

const char* outlier_law_name(const OutlierLaw& law) {
    switch (law.index()) {
        case 0: return "point_mass";
        case 1: return "clustered_shift";
        case 2: return "variance_inflation";
        default: return "response_flip";
    }
}

Dataset sample_contaminated(const ModelAdapter& model, int n, std::uint64_t seed,
                            const ContaminationSpec& spec) {
    if (n <= 0) throw input_error("sample_contaminated: n must be positive");
    if (spec.epsilon < 0.0 || spec.epsilon >= 0.5)
        throw input_error("contamination fraction must lie in [0, 0.5)");
    if (spec.epsilon > 0.0) validate_law(model, spec.law);

    const Matrix root = detail::clean_sqrt_sigma(model);
    Dataset out;
    out.epsilon = spec.epsilon;
    out.seed = seed;
    out.samples.reserve(n);
    out.hidden_labels.emplace();
    out.hidden_labels->reserve(n);

    for (int i = 0; i < n; ++i) {
        const auto idx = static_cast<std::uint64_t>(i);
        Rng label_rng = point_stream(seed, kStreamLabel, idx);
        const bool bad = label_rng.uniform() < spec.epsilon;
        if (bad) {
            Rng rng = point_stream(seed, kStreamOutlier, idx);
            out.samples.push_back(draw_outlier(model, root, spec.law, rng));
        } else {
            Rng rng = point_stream(seed, kStreamClean, idx);
            out.samples.push_back(detail::draw_clean_observation(model, root, rng));
        }
        out.hidden_labels->push_back(bad ? 1 : 0);
    }
    return out;
}

}  // namespace robsparse
