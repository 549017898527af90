#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace aquannr {

/// One received-SNR measurement. Times are seconds since an arbitrary
/// epoch and must be strictly increasing within a series.
struct SnrSample {
    double time_s = 0.0;
    double snr_db = 0.0;
};

/// Time-ordered SNR trace. The first element may be a synthetic summary
/// sample produced by storage compression; it behaves like an ordinary
/// sample for window construction.
class SnrSeries {
public:
    SnrSeries() = default;

    static SnrSeries from_samples(std::vector<SnrSample> samples);
    static SnrSeries with_compressed_prefix(SnrSample summary,
                                            std::vector<SnrSample> rest);

    void append(const SnrSample& s);
    void append(double time_s, double snr_db) { append(SnrSample{time_s, snr_db}); }

    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    const SnrSample& operator[](std::size_t i) const noexcept { return samples_[i]; }
    const SnrSample& front() const { return samples_.front(); }
    const SnrSample& back() const { return samples_.back(); }
    std::span<const SnrSample> samples() const noexcept { return samples_; }

    bool has_compressed_prefix() const noexcept { return has_summary_; }
    /// Null when the series carries no compression summary.
    const SnrSample* compressed_prefix() const noexcept {
        return has_summary_ ? &samples_.front() : nullptr;
    }
    /// Number of raw (uncompressed) samples.
    std::size_t raw_size() const noexcept {
        return samples_.size() - (has_summary_ ? 1u : 0u);
    }

private:
    std::vector<SnrSample> samples_;
    bool has_summary_ = false;
};

}  // namespace aquannr
