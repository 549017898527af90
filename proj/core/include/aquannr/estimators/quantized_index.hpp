#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "aquannr/estimators/nnr.hpp"
#include "aquannr/snr_series.hpp"

namespace aquannr::estimators {

/// Quantized SNR key: floor(snr_db * scale), with a small snap so values
/// that are an exact multiple of 1/scale in decimal land on their own key
/// despite binary rounding.
long long quantize_key(double snr_db, int scale);

/// Bucket index over a series: key -> ascending sample positions. Samples
/// must be inserted in series order.
class QuantizedIndex {
public:
    explicit QuantizedIndex(int scale = 1000);

    int scale() const noexcept { return scale_; }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    std::size_t bucket_count() const noexcept { return buckets_.size(); }

    /// Position must equal the number of samples indexed so far.
    void insert(double snr_db, std::size_t position);

    const std::vector<std::uint32_t>* bucket(long long key) const;
    long long key_for(double snr_db) const { return quantize_key(snr_db, scale_); }

    long long min_key() const;
    long long max_key() const;

    static QuantizedIndex build(const SnrSeries& series, int scale = 1000);

private:
    int scale_;
    std::size_t count_ = 0;
    long long min_key_ = 0;
    long long max_key_ = 0;
    std::unordered_map<long long, std::vector<std::uint32_t>> buckets_;
};

struct KeyRange {
    long long lo = 0;
    long long hi = 0;
};

/// Search interval for candidate first elements, in quantized keys:
/// [floor((x - sqrt(min)) * scale), ceil((x + sqrt(min)) * scale)] widened
/// by one key per side so quantization never excludes a valid candidate.
/// An infinite or very large `current_min_sq_distance` yields a range that
/// covers every representable key.
KeyRange prune_interval(double query_first_db, double current_min_sq_distance, int scale);

/// Index-accelerated prediction. Produces the same neighbors and value as
/// nnr_predict but only visits candidate windows whose first element lies
/// inside the shrinking prune interval.
double nnr_predict_indexed(const QuantizedIndex& index, const SnrSeries& series,
                           const NnrConfig& cfg, NnrTrace* trace = nullptr,
                           SearchCounters* counters = nullptr);

}  // namespace aquannr::estimators
