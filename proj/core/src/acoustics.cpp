#include "aquannr/channel/acoustics.hpp"

#include <cmath>
#include <stdexcept>

namespace aquannr::channel {

namespace {

void validate_params(const ChannelParams& p) {
    if (!(p.tx_power_w > 0.0) || !(p.carrier_freq_khz > 0.0) ||
        !(p.noise_psd_w_per_hz > 0.0) || !(p.noise_bandwidth_hz > 0.0)) {
        throw std::domain_error("channel: parameters must be strictly positive");
    }
    if (!(p.spreading_exponent >= 1.0 && p.spreading_exponent <= 2.0)) {
        throw std::domain_error("channel: spreading exponent must be in [1, 2]");
    }
}

}  // namespace

double absorption_db_per_km(double f_khz) {
    if (!(f_khz > 0.0)) {
        throw std::domain_error("absorption_db_per_km: frequency must be positive");
    }
    const double f2 = f_khz * f_khz;
    return 0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003;
}

double attenuation_db(double distance_m, const ChannelParams& params) {
    validate_params(params);
    if (!(distance_m > 0.0)) {
        throw std::domain_error("attenuation_db: distance must be positive");
    }
    const double spreading = params.spreading_exponent * 10.0 * std::log10(distance_m);
    const double absorption = (distance_m / 1000.0) * absorption_db_per_km(params.carrier_freq_khz);
    return spreading + absorption;
}

double snr_linear(double distance_m, const ChannelParams& params) {
    const double a_linear = std::pow(10.0, attenuation_db(distance_m, params) / 10.0);
    return (params.tx_power_w / a_linear) /
           (params.noise_psd_w_per_hz * params.noise_bandwidth_hz);
}

double snr_db(double distance_m, const ChannelParams& params) {
    return 10.0 * std::log10(params.tx_power_w) - attenuation_db(distance_m, params) -
           10.0 * std::log10(params.noise_psd_w_per_hz * params.noise_bandwidth_hz);
}

double packet_success_prob(double snr_linear_ratio, long packet_bits) {
    if (std::isnan(snr_linear_ratio) || snr_linear_ratio < 0.0) {
        throw std::domain_error("packet_success_prob: snr must be non-negative");
    }
    if (packet_bits < 1) {
        throw std::domain_error("packet_success_prob: packet must hold at least one bit");
    }
    const double bit_error = 0.5 * std::erfc(std::sqrt(snr_linear_ratio));
    return std::pow(1.0 - bit_error, static_cast<double>(packet_bits));
}

}  // namespace aquannr::channel
