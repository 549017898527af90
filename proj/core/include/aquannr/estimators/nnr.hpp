#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "aquannr/snr_series.hpp"

namespace aquannr::estimators {

/// Nearest-neighbor-regression settings. `idw_exponent_q` must be a
/// negative integer; windows at squared distance <= zero_distance_epsilon
/// short-circuit to an unweighted label mean.
struct NnrConfig {
    std::size_t window_m = 3;
    std::size_t k = 3;
    int idw_exponent_q = -2;
    double zero_distance_epsilon = 1e-12;
};

/// One selected training window: its start position in the series, its
/// squared distance to the query window, and its successor label.
struct NnrNeighbor {
    std::size_t start = 0;
    double distance_sq = 0.0;
    double label = 0.0;
};

/// Filled on request with the neighbors actually used for a prediction,
/// ordered best first.
struct NnrTrace {
    std::vector<NnrNeighbor> selected;
};

struct SearchCounters {
    std::uint64_t windows_compared = 0;
};

/// Squared Euclidean distance between two equal-length windows.
double window_distance(std::span<const double> a, std::span<const double> b);

/// Exhaustive sliding-window prediction: builds all (window -> successor)
/// training pairs, selects the k nearest by squared distance and combines
/// their labels with inverse-distance weights.
double nnr_predict(const SnrSeries& series, const NnrConfig& cfg,
                   NnrTrace* trace = nullptr, SearchCounters* counters = nullptr);

namespace detail {

inline double window_distance_at(const SnrSeries& s, std::size_t a,
                                 std::size_t b, std::size_t m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double diff = s[a + i].snr_db - s[b + i].snr_db;
        acc += diff * diff;
    }
    return acc;
}

/// Keeps the k best candidates under the total order
/// (distance asc, start desc), so the selected set is independent of
/// the order in which candidates are offered.
class KBest {
public:
    explicit KBest(std::size_t k) : k_(k) { entries_.reserve(k); }

    bool offer(double distance_sq, std::size_t start, double label) {
        if (entries_.size() == k_ && !better(distance_sq, start, entries_.back())) {
            return false;
        }
        if (entries_.size() == k_) entries_.pop_back();
        NnrNeighbor e{start, distance_sq, label};
        auto it = entries_.begin();
        while (it != entries_.end() && better(it->distance_sq, it->start, e)) ++it;
        entries_.insert(it, e);
        return true;
    }

    /// Current pruning radius: the k-th best squared distance, infinite
    /// while the set is not yet full.
    double radius() const noexcept {
        return entries_.size() < k_ ? std::numeric_limits<double>::infinity()
                                    : entries_.back().distance_sq;
    }

    const std::vector<NnrNeighbor>& entries() const noexcept { return entries_; }

private:
    static bool better(double d, std::size_t start, const NnrNeighbor& other) {
        if (d != other.distance_sq) return d < other.distance_sq;
        return start > other.start;  // ties prefer the more recent window
    }

    std::size_t k_;
    std::vector<NnrNeighbor> entries_;
};

/// Shared label combination: zero-distance shortcut, otherwise normalized
/// inverse-distance weights d^q.
double combine_labels(const std::vector<NnrNeighbor>& selected, const NnrConfig& cfg);

void validate_nnr_config(const NnrConfig& cfg);

}  // namespace detail

}  // namespace aquannr::estimators
