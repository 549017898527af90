#pragma once

#include <cstdint>
#include <queue>
#include <unordered_map>
#include <vector>

#include "aquannr/netsim/config.hpp"
#include "aquannr/netsim/metrics.hpp"
#include "aquannr/netsim/node.hpp"

namespace aquannr::netsim {

struct DeliveryRecord {
    long sequence = -1;
    double birth_time_s = 0.0;
    double delivery_time_s = 0.0;
    int sink_id = -1;
    Vec3 source_position_at_birth;
};

/// Per-receiver outcome of one transmission; recorded only when
/// SimConfig::record_transmissions is set.
struct TxRecord {
    double time_s = 0.0;
    int sender = -1;
    int receiver = -1;
    PacketKind kind = PacketKind::Data;
    double snr_db = 0.0;
    double success_prob = 0.0;
    bool delivered = false;
};

/// Deterministic discrete-event simulator: one event queue ordered by
/// (time, insertion order), all randomness derived from the config seed.
class Simulator {
public:
    explicit Simulator(SimConfig cfg);

    /// Processes events up to min(t_s, duration).
    void run_until(double t_s);
    /// Applies idle energy and assembles metrics; call once, after the run.
    SimMetrics finish();
    /// run_until(duration) followed by finish().
    SimMetrics run();

    const SimConfig& config() const noexcept { return cfg_; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    int source_id() const noexcept { return source_id_; }
    const std::vector<int>& sink_ids() const noexcept { return sink_ids_; }

    /// Instantaneous link SNR between two nodes at their current
    /// positions; throws when the pair is out of transmission range.
    double link_snr_db(int a, int b, double t_s) const;

    const std::vector<DeliveryRecord>& deliveries() const noexcept { return deliveries_; }
    const std::vector<TxRecord>& transmissions() const noexcept { return tx_log_; }
    std::uint64_t transition_count(NodeState from, NodeState to) const;
    double total_energy_j() const noexcept { return total_energy_j_; }
    std::uint64_t packets_generated() const noexcept { return packets_generated_; }

    /// Loss accounting, useful when debugging topologies.
    struct DropStats {
        std::uint64_t no_candidate = 0;    // hold cycles exhausted
        std::uint64_t retry_exhausted = 0; // every ranked candidate failed
        std::uint64_t ttl = 0;
        std::uint64_t backlog = 0;         // still queued when the run ended
    };
    DropStats drop_stats() const;

private:
    enum class EvKind {
        Arrival,
        Transmit,
        InitHandshake,
        InitDone,
        TrafficGen,
        AckDeadline,
        HopAckTimeout,
        HoldRetry,
        DbrHoldFire,
        MobilityTick,
    };

    struct Event {
        double time = 0.0;
        std::uint64_t order = 0;
        EvKind kind = EvKind::Arrival;
        int node = -1;
        Packet pkt;
        double snr_db = 0.0;
        long seq = -1;
        std::uint64_t token = 0;
    };

    struct EventLater {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.order > b.order;
        }
    };

    void deploy();
    void schedule(double time, EvKind kind, int node, Packet pkt = {},
                  double snr_db = 0.0, long seq = -1, std::uint64_t token = 0);
    void dispatch(const Event& ev);

    void transition(Node& node, NodeState to);

    double airtime_s(int payload_bytes) const;
    double distance(const Node& a, const Node& b) const;
    double link_snr_internal(int a, int b, double dist_m, double t_s) const;
    void broadcast(Node& sender, const Packet& pkt, double earliest_s = -1.0);
    void emit(Node& sender, const Packet& pkt);
    void charge_send(Node& node, double airtime);
    void charge_recv(Node& node, double airtime);

    void on_arrival(Node& node, const Packet& pkt, double snr_db);
    void on_data(Node& node, const Packet& pkt);
    void on_data_dbr(Node& node, const Packet& pkt);
    void on_ack_deadline(Node& node, long round);
    void begin_round(Node& node);
    void transmit_head(Node& node);
    void complete_hop(Node& node);
    void next_attempt(Node& node);
    void drop_head(Node& node);
    void finish_round_or_listen(Node& node);
    void deliver(const Node& sink, const Packet& pkt);
    void send_ack(Node& node, const Packet& cause, long ack_for_seq);
    Packet data_packet(const Node& sender, const Packet& base) const;

    SimConfig cfg_;
    std::vector<Node> nodes_;
    int source_id_ = -1;
    std::vector<int> sink_ids_;

    std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
    std::uint64_t order_counter_ = 0;
    double now_ = 0.0;
    bool finished_ = false;

    long next_data_seq_ = 0;
    long next_round_ = 0;
    std::uint64_t next_token_ = 1;
    std::uint64_t tx_counter_ = 0;

    std::uint64_t packets_generated_ = 0;
    std::set<long> delivered_seqs_;
    std::vector<DeliveryRecord> deliveries_;
    std::unordered_map<long, Vec3> birth_positions_;
    std::vector<TxRecord> tx_log_;
    double total_energy_j_ = 0.0;
    std::uint64_t transition_counts_[3][3] = {};
    DropStats drops_;
};

/// Convenience wrapper used by the CLI grid runner.
SimMetrics run_sim(const SimConfig& cfg);

}  // namespace aquannr::netsim
