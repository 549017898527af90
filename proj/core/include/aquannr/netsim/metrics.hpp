#pragma once

#include <cstdint>
#include <string>

#include "aquannr/netsim/config.hpp"

namespace aquannr::netsim {

/// End-of-run network metrics. Delay and energy-per-packet average over
/// delivered packets only; both are zero when nothing was delivered.
struct SimMetrics {
    double packet_delivery_ratio = 0.0;
    double avg_end_to_end_delay_s = 0.0;
    double avg_energy_per_delivered_j = 0.0;
    std::uint64_t packets_sent = 0;
    std::uint64_t packets_delivered = 0;
    double total_energy_j = 0.0;
};

inline constexpr const char* kMetricsCsvHeader =
    "protocol,node_count,seed,pdr,avg_delay_s,avg_energy_j,packets_sent,"
    "packets_delivered,total_energy_j";

std::string metrics_csv_row(Protocol protocol, int node_count, std::uint64_t seed,
                            const SimMetrics& metrics);

}  // namespace aquannr::netsim
