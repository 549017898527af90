#include "aquannr/estimators/quantized_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aquannr::estimators {

namespace {

long long saturating_ll(double v) {
    constexpr double kLimit = 9.0e18;
    if (v <= -kLimit) return std::numeric_limits<long long>::min();
    if (v >= kLimit) return std::numeric_limits<long long>::max();
    return static_cast<long long>(v);
}

}  // namespace

long long quantize_key(double snr_db, int scale) {
    if (scale <= 0) throw std::invalid_argument("quantize_key: scale must be positive");
    const double scaled = snr_db * static_cast<double>(scale);
    double fl = std::floor(scaled);
    if (scaled - fl >= 1.0 - 1e-9) fl += 1.0;
    return saturating_ll(fl);
}

QuantizedIndex::QuantizedIndex(int scale) : scale_(scale) {
    if (scale <= 0) throw std::invalid_argument("QuantizedIndex: scale must be positive");
}

void QuantizedIndex::insert(double snr_db, std::size_t position) {
    if (!std::isfinite(snr_db)) {
        throw std::invalid_argument("QuantizedIndex: non-finite snr rejected");
    }
    if (position != count_) {
        throw std::invalid_argument("QuantizedIndex: duplicate or out-of-order position");
    }
    if (position > std::numeric_limits<std::uint32_t>::max()) {
        throw std::length_error("QuantizedIndex: position exceeds index capacity");
    }
    const long long key = quantize_key(snr_db, scale_);
    buckets_[key].push_back(static_cast<std::uint32_t>(position));
    if (count_ == 0) {
        min_key_ = max_key_ = key;
    } else {
        min_key_ = std::min(min_key_, key);
        max_key_ = std::max(max_key_, key);
    }
    ++count_;
}

const std::vector<std::uint32_t>* QuantizedIndex::bucket(long long key) const {
    const auto it = buckets_.find(key);
    return it == buckets_.end() ? nullptr : &it->second;
}

long long QuantizedIndex::min_key() const {
    if (empty()) throw std::logic_error("QuantizedIndex: empty index has no keys");
    return min_key_;
}

long long QuantizedIndex::max_key() const {
    if (empty()) throw std::logic_error("QuantizedIndex: empty index has no keys");
    return max_key_;
}

QuantizedIndex QuantizedIndex::build(const SnrSeries& series, int scale) {
    QuantizedIndex index(scale);
    for (std::size_t i = 0; i < series.size(); ++i) {
        index.insert(series[i].snr_db, i);
    }
    return index;
}

KeyRange prune_interval(double query_first_db, double current_min_sq_distance, int scale) {
    if (std::isnan(current_min_sq_distance) || current_min_sq_distance < 0.0) {
        throw std::domain_error("prune_interval: current min distance must be non-negative");
    }
    if (scale <= 0) throw std::invalid_argument("prune_interval: scale must be positive");

    const double r = std::sqrt(current_min_sq_distance);
    const double lo = std::floor((query_first_db - r) * static_cast<double>(scale));
    const double hi = std::ceil((query_first_db + r) * static_cast<double>(scale));

    KeyRange range;
    range.lo = saturating_ll(lo);
    range.hi = saturating_ll(hi);
    if (range.lo > std::numeric_limits<long long>::min()) range.lo -= 1;
    if (range.hi < std::numeric_limits<long long>::max()) range.hi += 1;
    return range;
}

double nnr_predict_indexed(const QuantizedIndex& index, const SnrSeries& series,
                           const NnrConfig& cfg, NnrTrace* trace,
                           SearchCounters* counters) {
    detail::validate_nnr_config(cfg);
    const std::size_t n = series.size();
    const std::size_t m = cfg.window_m;
    if (n < m + 1) {
        throw std::invalid_argument("nnr_predict_indexed: series must hold at least window_m + 1 samples");
    }
    if (index.size() != n) {
        throw std::invalid_argument("nnr_predict_indexed: index inconsistent with series");
    }

    const std::size_t train_count = n - m;
    const std::size_t query_start = n - m;
    const double query_first = series[query_start].snr_db;
    const int scale = index.scale();
    const long long query_key = index.key_for(query_first);
    const long long key_lo = index.min_key();
    const long long key_hi = index.max_key();

    detail::KBest best(std::min(cfg.k, train_count));

    const auto clamp_range = [&](KeyRange r) {
        r.lo = std::max(r.lo, key_lo);
        r.hi = std::min(r.hi, key_hi);
        return r;
    };
    KeyRange range = clamp_range(prune_interval(query_first, best.radius(), scale));

    const auto visit_bucket = [&](long long key) {
        const auto* positions = index.bucket(key);
        if (positions == nullptr) return;
        // Recent windows first, so distance ties resolve as in nnr_predict.
        for (auto it = positions->rbegin(); it != positions->rend(); ++it) {
            const std::size_t start = *it;
            if (start >= train_count) continue;
            const double d = detail::window_distance_at(series, start, query_start, m);
            if (counters) ++counters->windows_compared;
            if (best.offer(d, start, series[start + m].snr_db)) {
                range = clamp_range(prune_interval(query_first, best.radius(), scale));
            }
        }
    };

    if (query_key >= range.lo && query_key <= range.hi) visit_bucket(query_key);
    bool left_done = false;
    bool right_done = false;
    for (long long offset = 1; !(left_done && right_done); ++offset) {
        if (!left_done) {
            const long long key = query_key - offset;
            if (key < range.lo) {
                left_done = true;
            } else {
                visit_bucket(key);
            }
        }
        if (!right_done) {
            const long long key = query_key + offset;
            if (key > range.hi) {
                right_done = true;
            } else {
                visit_bucket(key);
            }
        }
    }

    if (trace) trace->selected = best.entries();
    return detail::combine_labels(best.entries(), cfg);
}

}  // namespace aquannr::estimators
