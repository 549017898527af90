#include "aquannr/snr_series.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace aquannr {

void SnrSeries::append(const SnrSample& s) {
    if (!std::isfinite(s.snr_db)) {
        throw std::invalid_argument("SnrSeries: snr_db must be finite");
    }
    if (!std::isfinite(s.time_s) || s.time_s < 0.0) {
        throw std::invalid_argument("SnrSeries: time_s must be finite and non-negative");
    }
    if (!samples_.empty() && s.time_s <= samples_.back().time_s) {
        throw std::invalid_argument("SnrSeries: sample times must be strictly increasing");
    }
    samples_.push_back(s);
}

SnrSeries SnrSeries::from_samples(std::vector<SnrSample> samples) {
    SnrSeries out;
    out.samples_.reserve(samples.size());
    for (const auto& s : samples) out.append(s);
    return out;
}

SnrSeries SnrSeries::with_compressed_prefix(SnrSample summary,
                                            std::vector<SnrSample> rest) {
    SnrSeries out;
    out.samples_.reserve(rest.size() + 1);
    out.append(summary);
    for (const auto& s : rest) out.append(s);
    out.has_summary_ = true;
    return out;
}

}  // namespace aquannr
