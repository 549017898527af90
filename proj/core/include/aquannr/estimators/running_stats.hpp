#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace aquannr::estimators {

/// Streaming mean/variance (Welford recursion). Variance is the unbiased
/// sample variance S/(i-1), defined once two samples have been seen.
class RunningStats {
public:
    void update(double x) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("RunningStats: non-finite sample rejected");
        }
        ++count_;
        if (count_ == 1) {
            mean_ = x;
            sum_sq_ = 0.0;
            return;
        }
        const double prev_mean = mean_;
        mean_ += (x - prev_mean) / static_cast<double>(count_);
        sum_sq_ += (x - mean_) * (x - prev_mean);
    }

    std::size_t count() const noexcept { return count_; }

    double mean() const {
        if (count_ == 0) throw std::logic_error("RunningStats: mean undefined on empty stats");
        return mean_;
    }

    double variance() const {
        if (count_ < 2) {
            throw std::logic_error("RunningStats: variance undefined for fewer than two samples");
        }
        return sum_sq_ / static_cast<double>(count_ - 1);
    }

    double sum_sq() const noexcept { return sum_sq_; }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double sum_sq_ = 0.0;
};

/// Next-step prediction of the plain-mean baseline.
inline double mean_predict(const RunningStats& stats) { return stats.mean(); }

}  // namespace aquannr::estimators
