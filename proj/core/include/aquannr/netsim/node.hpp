#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "aquannr/estimators/ema.hpp"
#include "aquannr/estimators/quantized_index.hpp"
#include "aquannr/estimators/running_stats.hpp"
#include "aquannr/netsim/config.hpp"
#include "aquannr/snr_series.hpp"

namespace aquannr::netsim {

enum class NodeState { Initialization, Listening, Forwarding };

/// The three legal arrows: Initialization -> Listening and
/// Listening <-> Forwarding.
inline bool legal_transition(NodeState from, NodeState to) {
    return (from == NodeState::Initialization && to == NodeState::Listening) ||
           (from == NodeState::Listening && to == NodeState::Forwarding) ||
           (from == NodeState::Forwarding && to == NodeState::Listening);
}

enum class PacketKind { Handshake, Ack, Data };

struct Packet {
    PacketKind kind = PacketKind::Data;
    int source_id = -1;
    int sender_id = -1;
    int designated_forwarder_id = -1;  // Data only
    int payload_bytes = 20;
    long sequence = -1;
    double birth_time_s = 0.0;
    int hop_count = 0;
    // Control payload: state of the transmitting node.
    double sender_depth_m = 0.0;
    double sender_energy_ratio = 1.0;
    long ack_for_seq = -1;      // >= 0 confirms receipt of a data sequence
    long handshake_round = -1;  // pairs Acks with the probing handshake
};

/// Per-neighbor state: SNR history with its bucket index, streaming
/// statistics, the CARP-side EMA, and the last advertised depth/energy.
struct NeighborRecord {
    int neighbor_id = -1;
    SnrSeries snr_series;
    estimators::QuantizedIndex nnr_index{1000};
    estimators::RunningStats stats;
    estimators::EmaState ema;
    double last_energy_ratio = 1.0;
    double last_depth_m = 0.0;

    void add_sample(double time_s, double snr_db) {
        nnr_index.insert(snr_db, snr_series.size());
        snr_series.append(time_s, snr_db);
        stats.update(snr_db);
        ema = estimators::ema_update(ema, snr_db);
    }
};

/// What a forwarding node learned about one Ack responder.
struct AckInfo {
    int id = -1;
    bool is_sink = false;
    double depth_m = 0.0;
    double energy_ratio = 1.0;
    double snr_db = 0.0;
};

struct Node {
    int id = -1;
    Vec3 position;
    bool is_sink = false;
    bool is_source = false;
    double energy_initial_j = 0.0;
    double energy_residual_j = 0.0;
    NodeState state = NodeState::Initialization;
    std::map<int, NeighborRecord> neighbors;

    double busy_send_s = 0.0;
    double busy_recv_s = 0.0;
    double tx_free_until_s = 0.0;  // transmissions are serialized per node

    // Forwarding-round state.
    std::deque<Packet> pending;
    long current_round = -1;
    std::vector<AckInfo> round_acks;
    std::vector<int> ranking;
    std::size_t attempt_idx = 0;
    int tx_attempts = 0;
    int hold_cycles = 0;
    std::uint64_t timer_token = 0;
    long awaiting_seq = -1;

    // Duplicate tracking (accepted data sequences) and DBR hold timers.
    std::set<long> accepted_seqs;
    std::map<long, std::uint64_t> dbr_holds;

    double depth() const { return position.z; }
    double energy_ratio() const {
        return energy_initial_j > 0.0 ? energy_residual_j / energy_initial_j : 0.0;
    }
    bool can_transmit() const { return energy_residual_j > 0.0; }
};

}  // namespace aquannr::netsim
