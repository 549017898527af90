#pragma once

namespace aquannr::channel {

/// Analytic acoustic link parameters. Noise is modeled as a flat power
/// spectral density over the receiver bandwidth.
struct ChannelParams {
    double tx_power_w = 2.0;
    double carrier_freq_khz = 25.0;
    double spreading_exponent = 1.5;  // in [1, 2]
    double noise_psd_w_per_hz = 3e-8;
    double noise_bandwidth_hz = 5000.0;
};

/// Thorp's absorption coefficient, dB per km, frequency in kHz.
double absorption_db_per_km(double f_khz);

/// Path attenuation in dB: spreading term plus absorption over the path
/// (distance in meters, absorption converted from dB/km).
double attenuation_db(double distance_m, const ChannelParams& params);

/// Received SNR as a linear power ratio.
double snr_linear(double distance_m, const ChannelParams& params);

/// Received SNR in dB, computed entirely in the dB domain.
double snr_db(double distance_m, const ChannelParams& params);

/// Probability that an entire packet of `packet_bits` is received without
/// bit error, from the BPSK bit error rate 0.5 * erfc(sqrt(snr)).
double packet_success_prob(double snr_linear_ratio, long packet_bits);

}  // namespace aquannr::channel
