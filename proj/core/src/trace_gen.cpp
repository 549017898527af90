#include "aquannr/channel/trace_gen.hpp"

#include <cmath>
#include <stdexcept>

#include "aquannr/detail/rng.hpp"

namespace aquannr::channel {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void validate_spec(const TraceSpec& spec) {
    if (spec.length_n < 1) throw std::invalid_argument("gen_trace: length must be positive");
    if (spec.period_samples < 1) throw std::invalid_argument("gen_trace: period must be positive");
    if (spec.amplitude_db < 0.0) throw std::invalid_argument("gen_trace: amplitude must be >= 0");
    if (spec.noise_sigma_db < 0.0) throw std::invalid_argument("gen_trace: noise sigma must be >= 0");
    if (!(spec.period_jitter_fraction >= 0.0 && spec.period_jitter_fraction < 1.0)) {
        throw std::invalid_argument("gen_trace: jitter fraction must be in [0, 1)");
    }
    if (spec.kind == TraceKind::IdealPeriod &&
        (spec.noise_sigma_db != 0.0 || spec.period_jitter_fraction != 0.0)) {
        throw std::invalid_argument("gen_trace: ideal traces admit neither noise nor jitter");
    }
}

double noise_at(const TraceSpec& spec, std::size_t t) {
    if (spec.noise_sigma_db == 0.0) return 0.0;
    return spec.noise_sigma_db *
           detail::gauss01(detail::mix(spec.seed, 0x6e6f6973ULL, static_cast<std::uint64_t>(t)));
}

}  // namespace

std::string trace_kind_name(TraceKind kind) {
    switch (kind) {
        case TraceKind::IdealPeriod: return "ideal";
        case TraceKind::PeriodWithNoise: return "period-noise";
        case TraceKind::RandomPeriodWithNoise: return "random-period";
    }
    throw std::logic_error("trace_kind_name: unknown kind");
}

TraceKind trace_kind_from_name(const std::string& name) {
    if (name == "ideal") return TraceKind::IdealPeriod;
    if (name == "period-noise") return TraceKind::PeriodWithNoise;
    if (name == "random-period") return TraceKind::RandomPeriodWithNoise;
    throw std::invalid_argument(
        "unknown trace kind '" + name + "' (valid: ideal, period-noise, random-period)");
}

std::string trace_label(const TraceSpec& spec) {
    return spec.label.empty() ? trace_kind_name(spec.kind) : spec.label;
}

SnrSeries gen_trace(const TraceSpec& spec) {
    validate_spec(spec);
    SnrSeries series;

    if (spec.kind == TraceKind::IdealPeriod || spec.kind == TraceKind::PeriodWithNoise) {
        const std::size_t period = spec.period_samples;
        for (std::size_t t = 0; t < spec.length_n; ++t) {
            // Phase from t mod period keeps repeats bit-identical.
            const double phase =
                static_cast<double>(t % period) / static_cast<double>(period);
            const double value =
                spec.base_db + spec.amplitude_db * std::sin(kTwoPi * phase) + noise_at(spec, t);
            series.append(static_cast<double>(t), value);
        }
        return series;
    }

    // RandomPeriodWithNoise: per-cycle period drawn uniformly from
    // period * (1 +/- jitter), phase accumulated sample by sample.
    std::uint64_t draw_state = detail::mix(spec.seed, 0x706572696fULL);
    const auto next_period = [&]() {
        draw_state = detail::splitmix64(draw_state);
        const double u = detail::uniform01(draw_state);
        const double low = static_cast<double>(spec.period_samples) *
                           (1.0 - spec.period_jitter_fraction);
        const double high = static_cast<double>(spec.period_samples) *
                            (1.0 + spec.period_jitter_fraction);
        return low + (high - low) * u;
    };

    double phase = 0.0;
    double period = next_period();
    for (std::size_t t = 0; t < spec.length_n; ++t) {
        const double value =
            spec.base_db + spec.amplitude_db * std::sin(kTwoPi * phase) + noise_at(spec, t);
        series.append(static_cast<double>(t), value);
        phase += 1.0 / period;
        if (phase >= 1.0) {
            phase -= 1.0;
            period = next_period();
        }
    }
    return series;
}

}  // namespace aquannr::channel
