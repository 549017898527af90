#include "aquannr/estimators/nnr.hpp"

#include <cmath>
#include <stdexcept>

namespace aquannr::estimators {

double window_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("window_distance: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return acc;
}

namespace detail {

void validate_nnr_config(const NnrConfig& cfg) {
    if (cfg.window_m < 1) throw std::invalid_argument("nnr: window_m must be >= 1");
    if (cfg.k < 1) throw std::invalid_argument("nnr: k must be >= 1");
    if (cfg.idw_exponent_q > -1) {
        throw std::invalid_argument("nnr: idw_exponent_q must be a negative integer");
    }
    if (!(cfg.zero_distance_epsilon > 0.0)) {
        throw std::invalid_argument("nnr: zero_distance_epsilon must be positive");
    }
}

double combine_labels(const std::vector<NnrNeighbor>& selected, const NnrConfig& cfg) {
    if (selected.empty()) throw std::logic_error("nnr: no neighbors selected");

    double zero_sum = 0.0;
    std::size_t zero_count = 0;
    for (const auto& e : selected) {
        if (e.distance_sq <= cfg.zero_distance_epsilon) {
            zero_sum += e.label;
            ++zero_count;
        }
    }
    if (zero_count > 0) return zero_sum / static_cast<double>(zero_count);

    double weight_sum = 0.0;
    double value_sum = 0.0;
    for (const auto& e : selected) {
        const double w = std::pow(e.distance_sq, cfg.idw_exponent_q);
        weight_sum += w;
        value_sum += w * e.label;
    }
    return value_sum / weight_sum;
}

}  // namespace detail

double nnr_predict(const SnrSeries& series, const NnrConfig& cfg,
                   NnrTrace* trace, SearchCounters* counters) {
    detail::validate_nnr_config(cfg);
    const std::size_t n = series.size();
    const std::size_t m = cfg.window_m;
    if (n < m + 1) {
        throw std::invalid_argument("nnr_predict: series must hold at least window_m + 1 samples");
    }
    const std::size_t train_count = n - m;
    const std::size_t query_start = n - m;

    detail::KBest best(std::min(cfg.k, train_count));
    for (std::size_t start = 0; start < train_count; ++start) {
        const double d = detail::window_distance_at(series, start, query_start, m);
        if (counters) ++counters->windows_compared;
        best.offer(d, start, series[start + m].snr_db);
    }
    if (trace) trace->selected = best.entries();
    return detail::combine_labels(best.entries(), cfg);
}

}  // namespace aquannr::estimators
