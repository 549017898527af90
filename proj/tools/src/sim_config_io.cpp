#include "sim_config_io.hpp"

#include <cstdlib>
#include <stdexcept>

#include "aquannr/bench/csv.hpp"

namespace aquannr::tools {

namespace {

double to_double(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw std::invalid_argument("config key '" + key + "': bad numeric value '" + value + "'");
    }
    return v;
}

int to_int(const std::string& key, const std::string& value) {
    return static_cast<int>(to_double(key, value));
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    try {
        return std::stoull(value);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad integer value '" + value + "'");
    }
}

}  // namespace

void sim_config_set(netsim::SimConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "area_x_m") cfg.area_x_m = to_double(key, value);
    else if (key == "area_y_m") cfg.area_y_m = to_double(key, value);
    else if (key == "area_z_m") cfg.area_z_m = to_double(key, value);
    else if (key == "node_count") cfg.node_count = to_int(key, value);
    else if (key == "sink_count") cfg.sink_count = to_int(key, value);
    else if (key == "tx_range_m") cfg.tx_range_m = to_double(key, value);
    else if (key == "bandwidth_bps") cfg.bandwidth_bps = to_double(key, value);
    else if (key == "power_send_w") cfg.power_send_w = to_double(key, value);
    else if (key == "power_recv_w") cfg.power_recv_w = to_double(key, value);
    else if (key == "power_idle_w") cfg.power_idle_w = to_double(key, value);
    else if (key == "packet_rate_pps") cfg.packet_rate_pps = to_double(key, value);
    else if (key == "duration_s") cfg.duration_s = to_double(key, value);
    else if (key == "sound_speed_mps") cfg.sound_speed_mps = to_double(key, value);
    else if (key == "protocol") cfg.protocol = netsim::protocol_from_name(value);
    else if (key == "gradient_alpha") cfg.gradient_alpha = to_double(key, value);
    else if (key == "dbr_delta_m") cfg.dbr_delta_m = to_double(key, value);
    else if (key == "ttl") cfg.ttl = to_int(key, value);
    else if (key == "retry_limit") cfg.retry_limit = to_int(key, value);
    else if (key == "mobility_speed_mps") cfg.mobility_speed_mps = to_double(key, value);
    else if (key == "seed") cfg.seed = to_u64(key, value);
    else if (key == "energy_initial_j") cfg.energy_initial_j = to_double(key, value);
    else if (key == "data_bytes") cfg.data_bytes = to_int(key, value);
    else if (key == "control_bytes") cfg.control_bytes = to_int(key, value);
    else if (key == "tx_power_w") cfg.channel.tx_power_w = to_double(key, value);
    else if (key == "carrier_freq_khz") cfg.channel.carrier_freq_khz = to_double(key, value);
    else if (key == "spreading_exponent") cfg.channel.spreading_exponent = to_double(key, value);
    else if (key == "noise_psd_w_per_hz") cfg.channel.noise_psd_w_per_hz = to_double(key, value);
    else if (key == "noise_bandwidth_hz") cfg.channel.noise_bandwidth_hz = to_double(key, value);
    else if (key == "fluct_amplitude_db") cfg.fluct_amplitude_db = to_double(key, value);
    else if (key == "fluct_period_s") cfg.fluct_period_s = to_double(key, value);
    else if (key == "fluct_noise_sigma_db") cfg.fluct_noise_sigma_db = to_double(key, value);
    else if (key == "hold_retry_s") cfg.hold_retry_s = to_double(key, value);
    else if (key == "ema_alpha") cfg.ema_alpha = to_double(key, value);
    else if (key == "nnr_window_m") cfg.nnr.window_m = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "nnr_k") cfg.nnr.k = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "nnr_idw_q") cfg.nnr.idw_exponent_q = to_int(key, value);
    else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

KvMap sim_config_to_kv(const netsim::SimConfig& cfg) {
    using bench::format_double;
    KvMap kv;
    kv["area_x_m"] = format_double(cfg.area_x_m);
    kv["area_y_m"] = format_double(cfg.area_y_m);
    kv["area_z_m"] = format_double(cfg.area_z_m);
    kv["node_count"] = std::to_string(cfg.node_count);
    kv["sink_count"] = std::to_string(cfg.sink_count);
    kv["tx_range_m"] = format_double(cfg.tx_range_m);
    kv["bandwidth_bps"] = format_double(cfg.bandwidth_bps);
    kv["power_send_w"] = format_double(cfg.power_send_w);
    kv["power_recv_w"] = format_double(cfg.power_recv_w);
    kv["power_idle_w"] = format_double(cfg.power_idle_w);
    kv["packet_rate_pps"] = format_double(cfg.packet_rate_pps);
    kv["duration_s"] = format_double(cfg.duration_s);
    kv["sound_speed_mps"] = format_double(cfg.sound_speed_mps);
    kv["protocol"] = netsim::protocol_name(cfg.protocol);
    kv["gradient_alpha"] = format_double(cfg.gradient_alpha);
    kv["dbr_delta_m"] = format_double(cfg.dbr_delta_m);
    kv["ttl"] = std::to_string(cfg.ttl);
    kv["retry_limit"] = std::to_string(cfg.retry_limit);
    kv["mobility_speed_mps"] = format_double(cfg.mobility_speed_mps);
    kv["seed"] = std::to_string(cfg.seed);
    kv["energy_initial_j"] = format_double(cfg.energy_initial_j);
    kv["data_bytes"] = std::to_string(cfg.data_bytes);
    kv["control_bytes"] = std::to_string(cfg.control_bytes);
    kv["tx_power_w"] = format_double(cfg.channel.tx_power_w);
    kv["carrier_freq_khz"] = format_double(cfg.channel.carrier_freq_khz);
    kv["spreading_exponent"] = format_double(cfg.channel.spreading_exponent);
    kv["noise_psd_w_per_hz"] = format_double(cfg.channel.noise_psd_w_per_hz);
    kv["noise_bandwidth_hz"] = format_double(cfg.channel.noise_bandwidth_hz);
    kv["fluct_amplitude_db"] = format_double(cfg.fluct_amplitude_db);
    kv["fluct_period_s"] = format_double(cfg.fluct_period_s);
    kv["fluct_noise_sigma_db"] = format_double(cfg.fluct_noise_sigma_db);
    kv["hold_retry_s"] = format_double(cfg.hold_retry_s);
    kv["ema_alpha"] = format_double(cfg.ema_alpha);
    kv["nnr_window_m"] = std::to_string(cfg.nnr.window_m);
    kv["nnr_k"] = std::to_string(cfg.nnr.k);
    kv["nnr_idw_q"] = std::to_string(cfg.nnr.idw_exponent_q);
    return kv;
}

}  // namespace aquannr::tools
