#pragma once

#include <cstddef>

#include "aquannr/snr_series.hpp"

namespace aquannr::estimators {

/// Storage-compression policy: when a series reaches `storage_limit`
/// samples (or spans `period_s`, if positive), its oldest
/// fraction_alpha * storage_limit samples collapse into one summary
/// sample weighted by temporal inverse distance from the newest sample.
struct CompressionPolicy {
    std::size_t storage_limit = 10000;
    double period_s = 0.0;  // 0 disables the time trigger
    double fraction_alpha = 0.2;
    int idw_exponent = -2;
};

/// True when either compression trigger has fired for this series.
bool compression_due(const SnrSeries& series, const CompressionPolicy& policy);

/// Collapse the oldest prefix into a summary sample; below the trigger the
/// input is returned unchanged.
SnrSeries compress(const SnrSeries& series, const CompressionPolicy& policy);

}  // namespace aquannr::estimators
