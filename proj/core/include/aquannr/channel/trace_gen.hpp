#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "aquannr/snr_series.hpp"

namespace aquannr::channel {

enum class TraceKind {
    IdealPeriod,
    PeriodWithNoise,
    RandomPeriodWithNoise,
};

/// Synthetic trace description. IdealPeriod requires zero noise and zero
/// jitter; RandomPeriodWithNoise draws each cycle's period uniformly from
/// period_samples * (1 +/- period_jitter_fraction).
struct TraceSpec {
    TraceKind kind = TraceKind::IdealPeriod;
    std::size_t length_n = 1000;
    double base_db = 15.0;
    double amplitude_db = 5.0;
    std::size_t period_samples = 50;
    double noise_sigma_db = 0.0;
    double period_jitter_fraction = 0.0;
    std::uint64_t seed = 0;
    std::string label;  // dataset name in reports; defaults to the kind name
};

std::string trace_kind_name(TraceKind kind);
TraceKind trace_kind_from_name(const std::string& name);
std::string trace_label(const TraceSpec& spec);

/// Deterministic trace generation: identical specs (including seed)
/// produce bit-identical series. Sample times are 0, 1, 2, ... seconds.
SnrSeries gen_trace(const TraceSpec& spec);

}  // namespace aquannr::channel
