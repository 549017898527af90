#pragma once

#include <optional>
#include <span>
#include <vector>

#include "aquannr/netsim/config.hpp"

namespace aquannr::netsim {

/// Forwarder-selection inputs for one candidate, as gathered from its Ack
/// and the local neighbor record.
struct CandidateInfo {
    int id = -1;
    bool is_sink = false;
    double delta_d_m = 0.0;        // sender depth minus candidate depth
    double predicted_snr_db = 0.0; // s
    double gradient_db = 0.0;      // g, latest SNR step
    double mean_db = 0.0;          // m
    double variance_db2 = 0.0;     // v
    double energy_ratio = 0.0;     // E
    double ema_snr_db = 0.0;       // CARP-like score input
    double ack_snr_db = 0.0;       // sink ordering
};

/// DBCAR candidate score (m*E/v) * delta_d * (s + alpha*sgn(g)*s), with the
/// variance floored at 1e-6 so fresh neighbors stay finite.
double forwarder_score(double predicted_snr_db, double gradient_db, double delta_d_m,
                       double mean_db, double variance_db2, double energy_ratio,
                       double gradient_alpha);

/// Eligible candidates (sinks, or strictly shallower nodes) ranked best
/// first: in-range sinks always lead, then protocol score descending with
/// id as the tie-break.
std::vector<int> rank_candidates(std::span<const CandidateInfo> candidates,
                                 Protocol protocol, double gradient_alpha);

/// Best forwarder, or nothing when no candidate is eligible.
std::optional<int> choose_forwarder(std::span<const CandidateInfo> candidates,
                                    Protocol protocol, double gradient_alpha);

}  // namespace aquannr::netsim
