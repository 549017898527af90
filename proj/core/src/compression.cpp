#include "aquannr/estimators/compression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace aquannr::estimators {

namespace {

void validate_policy(const CompressionPolicy& p) {
    if (p.storage_limit < 2) {
        throw std::invalid_argument("compression: storage_limit must be >= 2");
    }
    if (!(p.fraction_alpha >= 0.0 && p.fraction_alpha <= 0.5)) {
        throw std::invalid_argument("compression: fraction_alpha must be in [0, 0.5]");
    }
    if (p.idw_exponent > -1) {
        throw std::invalid_argument("compression: idw_exponent must be a negative integer");
    }
    if (p.period_s < 0.0) {
        throw std::invalid_argument("compression: period_s must be non-negative");
    }
}

}  // namespace

bool compression_due(const SnrSeries& series, const CompressionPolicy& policy) {
    validate_policy(policy);
    if (series.empty()) return false;
    if (series.size() >= policy.storage_limit) return true;
    if (policy.period_s > 0.0 &&
        series.back().time_s - series.front().time_s >= policy.period_s) {
        return true;
    }
    return false;
}

SnrSeries compress(const SnrSeries& series, const CompressionPolicy& policy) {
    if (!compression_due(series, policy)) return series;

    std::size_t prefix = static_cast<std::size_t>(
        std::floor(policy.fraction_alpha * static_cast<double>(policy.storage_limit)));
    prefix = std::min(prefix, series.size() - 1);
    if (prefix == 0) return series;

    // Temporal inverse-distance weights, measured from the newest sample.
    const double t_ref = series.back().time_s;
    double weight_sum = 0.0;
    double value_sum = 0.0;
    for (std::size_t i = 0; i < prefix; ++i) {
        const double w = std::pow(t_ref - series[i].time_s, policy.idw_exponent);
        weight_sum += w;
        value_sum += w * series[i].snr_db;
    }
    const SnrSample summary{series[prefix - 1].time_s, value_sum / weight_sum};

    std::vector<SnrSample> rest(series.samples().begin() + static_cast<std::ptrdiff_t>(prefix),
                                series.samples().end());
    return SnrSeries::with_compressed_prefix(summary, std::move(rest));
}

}  // namespace aquannr::estimators
