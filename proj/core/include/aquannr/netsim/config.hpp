#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aquannr/channel/acoustics.hpp"
#include "aquannr/estimators/nnr.hpp"

namespace aquannr::netsim {

enum class Protocol { Dbcar, Dbr, CarpLike };

std::string protocol_name(Protocol p);
Protocol protocol_from_name(const std::string& name);

/// z is depth in meters, positive downward; the surface is z = 0.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Fixed node placement used by tests instead of random deployment.
struct ManualNode {
    Vec3 position;
    bool is_sink = false;
    bool is_source = false;
};

struct SimConfig {
    double area_x_m = 500.0;
    double area_y_m = 500.0;
    double area_z_m = 500.0;
    int node_count = 100;
    int sink_count = 3;
    double tx_range_m = 150.0;
    double bandwidth_bps = 10000.0;
    double power_send_w = 2.0;
    double power_recv_w = 0.1;
    double power_idle_w = 0.01;
    double packet_rate_pps = 0.1;
    double duration_s = 10000.0;
    double sound_speed_mps = 1500.0;
    Protocol protocol = Protocol::Dbcar;
    double gradient_alpha = 0.15;   // in [0, 0.3]
    double dbr_delta_m = -1.0;      // depth threshold; negative resolves to tx_range / 4
    int ttl = 50;
    int retry_limit = 3;
    double mobility_speed_mps = 0.5;
    std::uint64_t seed = 0;
    double energy_initial_j = 10000.0;
    int data_bytes = 100;
    int control_bytes = 20;

    channel::ChannelParams channel;

    // Per-link SNR fluctuation superimposed on the analytic mean.
    double fluct_amplitude_db = 3.0;
    double fluct_period_s = 600.0;
    double fluct_noise_sigma_db = 1.0;

    double hold_retry_s = 5.0;      // wait before re-probing when no candidate exists
    double ema_alpha = 0.2;         // CARP-like link estimator
    estimators::NnrConfig nnr;      // DBCAR link estimator

    /// Test hook: explicit placement instead of random deployment.
    std::vector<ManualNode> manual_topology;
    /// Test hook: keep a per-receiver transmission log (memory heavy).
    bool record_transmissions = false;

    double resolved_dbr_delta() const {
        return dbr_delta_m < 0.0 ? tx_range_m / 4.0 : dbr_delta_m;
    }

    void validate() const;
};

}  // namespace aquannr::netsim
