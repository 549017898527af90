#pragma once

#include <cstddef>
#include <vector>

#include "aquannr/snr_series.hpp"

namespace aquannr::estimators {

/// AR(p) model: x_t = intercept + sum_i coefficients[i-1] * x_{t-i}.
/// `degenerate` is set when the normal equations were singular and the
/// fit fell back to an intercept-only model.
struct ArModel {
    int order = 0;
    double intercept = 0.0;
    std::vector<double> coefficients;
    bool degenerate = false;
};

/// Ordinary least squares over the most recent `fit_window` samples.
/// Requires at least order + 2 samples inside the window.
ArModel ar_fit(const SnrSeries& series, int order, std::size_t fit_window = 200);

/// One-step prediction from the model and the series tail; the noise term
/// is taken as zero.
double ar_predict(const ArModel& model, const SnrSeries& series);

}  // namespace aquannr::estimators
