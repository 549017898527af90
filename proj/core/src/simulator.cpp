#include "aquannr/netsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "aquannr/bench/csv.hpp"
#include "aquannr/detail/rng.hpp"
#include "aquannr/netsim/scoring.hpp"

namespace aquannr::netsim {

namespace {

constexpr std::uint64_t kDeployTag = 0xdeb107;
constexpr std::uint64_t kMobilityTag = 0x0b111e;
constexpr std::uint64_t kPhaseTag = 0x9a5e;
constexpr std::uint64_t kNoiseTag = 0x9015e;
constexpr std::uint64_t kLossTag = 0x1055;

constexpr std::uint64_t kStaggerTag = 0x57a6;

constexpr double kMinLinkDistance = 1e-3;
constexpr double kTimerGuard = 0.05;
constexpr double kAckStaggerMax = 0.05;
constexpr double kMobilityTick = 1.0;
constexpr double kInitWindow = 1.0;

std::uint64_t pair_key(int a, int b) {
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (lo << 32) | hi;
}

}  // namespace

std::string protocol_name(Protocol p) {
    switch (p) {
        case Protocol::Dbcar: return "dbcar";
        case Protocol::Dbr: return "dbr";
        case Protocol::CarpLike: return "carp";
    }
    throw std::logic_error("protocol_name: unknown protocol");
}

Protocol protocol_from_name(const std::string& name) {
    if (name == "dbcar") return Protocol::Dbcar;
    if (name == "dbr") return Protocol::Dbr;
    if (name == "carp" || name == "carp-like" || name == "carp_like") return Protocol::CarpLike;
    throw std::invalid_argument("unknown protocol '" + name + "' (valid: dbcar, dbr, carp)");
}

void SimConfig::validate() const {
    const bool manual = !manual_topology.empty();
    if (!manual && node_count < 2) {
        throw std::invalid_argument("sim config: node_count must be >= 2");
    }
    if (!manual && sink_count < 1) {
        throw std::invalid_argument("sim config: sink_count must be >= 1");
    }
    if (!(area_x_m > 0.0 && area_y_m > 0.0 && area_z_m > 0.0)) {
        throw std::invalid_argument("sim config: area dimensions must be positive");
    }
    if (!(tx_range_m > 0.0)) throw std::invalid_argument("sim config: tx_range_m must be positive");
    if (!(bandwidth_bps > 0.0)) throw std::invalid_argument("sim config: bandwidth_bps must be positive");
    if (!(power_send_w > 0.0 && power_recv_w > 0.0 && power_idle_w > 0.0)) {
        throw std::invalid_argument("sim config: power draws must be positive");
    }
    if (!(packet_rate_pps > 0.0)) throw std::invalid_argument("sim config: packet_rate_pps must be positive");
    if (!(duration_s > 0.0)) throw std::invalid_argument("sim config: duration_s must be positive");
    if (!(sound_speed_mps > 0.0)) throw std::invalid_argument("sim config: sound_speed_mps must be positive");
    if (!(gradient_alpha >= 0.0 && gradient_alpha <= 0.3)) {
        throw std::invalid_argument("sim config: gradient_alpha must be in [0, 0.3]");
    }
    if (ttl < 1) throw std::invalid_argument("sim config: ttl must be >= 1");
    if (retry_limit < 1) throw std::invalid_argument("sim config: retry_limit must be >= 1");
    if (mobility_speed_mps < 0.0) {
        throw std::invalid_argument("sim config: mobility_speed_mps must be >= 0");
    }
    if (!(energy_initial_j > 0.0)) {
        throw std::invalid_argument("sim config: energy_initial_j must be positive");
    }
    if (data_bytes < 1 || control_bytes < 1) {
        throw std::invalid_argument("sim config: packet sizes must be positive");
    }
    if (fluct_amplitude_db < 0.0 || fluct_noise_sigma_db < 0.0 || !(fluct_period_s > 0.0)) {
        throw std::invalid_argument("sim config: fluctuation parameters out of range");
    }
    if (!(hold_retry_s > 0.0)) throw std::invalid_argument("sim config: hold_retry_s must be positive");
    if (manual) {
        int sources = 0;
        int sinks = 0;
        for (const auto& n : manual_topology) {
            sources += n.is_source ? 1 : 0;
            sinks += n.is_sink ? 1 : 0;
        }
        if (manual_topology.size() < 2 || sources != 1 || sinks < 1) {
            throw std::invalid_argument(
                "sim config: manual topology needs >= 2 nodes, exactly one source and a sink");
        }
    }
}

std::string metrics_csv_row(Protocol protocol, int node_count, std::uint64_t seed,
                            const SimMetrics& m) {
    std::string row = protocol_name(protocol);
    row += ',';
    row += std::to_string(node_count);
    row += ',';
    row += std::to_string(seed);
    row += ',';
    row += bench::format_double(m.packet_delivery_ratio);
    row += ',';
    row += bench::format_double(m.avg_end_to_end_delay_s);
    row += ',';
    row += bench::format_double(m.avg_energy_per_delivered_j);
    row += ',';
    row += std::to_string(m.packets_sent);
    row += ',';
    row += std::to_string(m.packets_delivered);
    row += ',';
    row += bench::format_double(m.total_energy_j);
    return row;
}

Simulator::Simulator(SimConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    deploy();

    const double interval = 1.0 / cfg_.packet_rate_pps;
    if (interval < cfg_.duration_s) schedule(interval, EvKind::TrafficGen, source_id_);
    if (cfg_.mobility_speed_mps > 0.0) {
        schedule(kMobilityTick, EvKind::MobilityTick, -1);
    }
}

void Simulator::deploy() {
    if (!cfg_.manual_topology.empty()) {
        cfg_.node_count = 0;
        cfg_.sink_count = 0;
        int id = 0;
        for (const auto& spec : cfg_.manual_topology) {
            Node n;
            n.id = id++;
            n.position = spec.position;
            n.is_sink = spec.is_sink;
            n.is_source = spec.is_source;
            n.energy_initial_j = n.energy_residual_j = cfg_.energy_initial_j;
            if (n.is_sink) {
                ++cfg_.sink_count;
                sink_ids_.push_back(n.id);
            } else {
                ++cfg_.node_count;
            }
            if (n.is_source) source_id_ = n.id;
            nodes_.push_back(std::move(n));
        }
    } else {
        std::mt19937_64 rng(detail::mix(cfg_.seed, kDeployTag));
        std::uniform_real_distribution<double> ux(0.0, cfg_.area_x_m);
        std::uniform_real_distribution<double> uy(0.0, cfg_.area_y_m);
        std::uniform_real_distribution<double> uz(0.0, cfg_.area_z_m);

        for (int i = 0; i < cfg_.sink_count; ++i) {
            Node n;
            n.id = i;
            n.position = Vec3{ux(rng), uy(rng), 0.0};
            n.is_sink = true;
            n.energy_initial_j = n.energy_residual_j = cfg_.energy_initial_j;
            sink_ids_.push_back(n.id);
            nodes_.push_back(std::move(n));
        }
        int deepest = -1;
        double max_depth = -1.0;
        for (int i = 0; i < cfg_.node_count; ++i) {
            Node n;
            n.id = cfg_.sink_count + i;
            n.position = Vec3{ux(rng), uy(rng), uz(rng)};
            n.energy_initial_j = n.energy_residual_j = cfg_.energy_initial_j;
            if (n.position.z > max_depth) {
                max_depth = n.position.z;
                deepest = n.id;
            }
            nodes_.push_back(std::move(n));
        }
        // The deepest sensor becomes the source, pinned to the bottom plane.
        nodes_[static_cast<std::size_t>(deepest)].is_source = true;
        nodes_[static_cast<std::size_t>(deepest)].position.z = cfg_.area_z_m;
        source_id_ = deepest;
    }

    std::mt19937_64 jitter_rng(detail::mix(cfg_.seed, kDeployTag, 1));
    std::uniform_real_distribution<double> jitter(0.0, 0.5);
    for (auto& n : nodes_) {
        const double t0 = jitter(jitter_rng);
        if (cfg_.protocol != Protocol::Dbr) schedule(t0, EvKind::InitHandshake, n.id);
        schedule(t0 + kInitWindow, EvKind::InitDone, n.id);
    }
}

void Simulator::schedule(double time, EvKind kind, int node, Packet pkt, double snr_db,
                         long seq, std::uint64_t token) {
    Event ev;
    ev.time = time;
    ev.order = order_counter_++;
    ev.kind = kind;
    ev.node = node;
    ev.pkt = std::move(pkt);
    ev.snr_db = snr_db;
    ev.seq = seq;
    ev.token = token;
    queue_.push(std::move(ev));
}

void Simulator::run_until(double t_s) {
    const double limit = std::min(t_s, cfg_.duration_s);
    while (!queue_.empty() && queue_.top().time <= limit) {
        const Event ev = queue_.top();
        queue_.pop();
        now_ = ev.time;
        dispatch(ev);
    }
}

SimMetrics Simulator::run() {
    run_until(cfg_.duration_s);
    return finish();
}

SimMetrics Simulator::finish() {
    if (finished_) throw std::logic_error("Simulator::finish called twice");
    finished_ = true;

    for (auto& n : nodes_) {
        const double idle_s =
            std::max(0.0, cfg_.duration_s - n.busy_send_s - n.busy_recv_s);
        const double want = cfg_.power_idle_w * idle_s;
        const double applied = std::min(want, n.energy_residual_j);
        n.energy_residual_j -= applied;
        total_energy_j_ += applied;
    }

    SimMetrics m;
    m.packets_sent = packets_generated_;
    m.packets_delivered = delivered_seqs_.size();
    m.total_energy_j = total_energy_j_;
    if (m.packets_sent > 0) {
        m.packet_delivery_ratio =
            static_cast<double>(m.packets_delivered) / static_cast<double>(m.packets_sent);
    }
    if (!deliveries_.empty()) {
        double delay_sum = 0.0;
        for (const auto& d : deliveries_) delay_sum += d.delivery_time_s - d.birth_time_s;
        m.avg_end_to_end_delay_s = delay_sum / static_cast<double>(deliveries_.size());
        m.avg_energy_per_delivered_j =
            total_energy_j_ / static_cast<double>(deliveries_.size());
    }
    return m;
}

void Simulator::transition(Node& node, NodeState to) {
    if (!legal_transition(node.state, to)) {
        throw std::logic_error("illegal node state transition");
    }
    ++transition_counts_[static_cast<int>(node.state)][static_cast<int>(to)];
    node.state = to;
}

std::uint64_t Simulator::transition_count(NodeState from, NodeState to) const {
    return transition_counts_[static_cast<int>(from)][static_cast<int>(to)];
}

double Simulator::airtime_s(int payload_bytes) const {
    return static_cast<double>(payload_bytes) * 8.0 / cfg_.bandwidth_bps;
}

double Simulator::distance(const Node& a, const Node& b) const {
    const double dx = a.position.x - b.position.x;
    const double dy = a.position.y - b.position.y;
    const double dz = a.position.z - b.position.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double Simulator::link_snr_internal(int a, int b, double dist_m, double t_s) const {
    const double mean = channel::snr_db(std::max(dist_m, kMinLinkDistance), cfg_.channel);
    double fluct = 0.0;
    if (cfg_.fluct_amplitude_db > 0.0) {
        const double phase = 6.283185307179586 *
                             detail::uniform01(detail::mix(cfg_.seed, kPhaseTag, pair_key(a, b)));
        fluct += cfg_.fluct_amplitude_db *
                 std::sin(6.283185307179586 * t_s / cfg_.fluct_period_s + phase);
    }
    if (cfg_.fluct_noise_sigma_db > 0.0) {
        const auto tick = static_cast<std::uint64_t>(std::floor(t_s * 10.0));
        fluct += cfg_.fluct_noise_sigma_db *
                 detail::gauss01(detail::mix(cfg_.seed, kNoiseTag, pair_key(a, b), tick));
    }
    return mean + fluct;
}

double Simulator::link_snr_db(int a, int b, double t_s) const {
    if (a < 0 || b < 0 || a >= static_cast<int>(nodes_.size()) ||
        b >= static_cast<int>(nodes_.size()) || a == b) {
        throw std::invalid_argument("link_snr_db: invalid node pair");
    }
    const double d = distance(nodes_[static_cast<std::size_t>(a)],
                              nodes_[static_cast<std::size_t>(b)]);
    if (d > cfg_.tx_range_m) throw std::domain_error("link_snr_db: nodes out of range");
    return link_snr_internal(a, b, d, t_s);
}

void Simulator::charge_send(Node& node, double airtime) {
    const double want = cfg_.power_send_w * airtime;
    const double applied = std::min(want, node.energy_residual_j);
    node.energy_residual_j -= applied;
    total_energy_j_ += applied;
    node.busy_send_s += airtime;
}

void Simulator::charge_recv(Node& node, double airtime) {
    const double want = cfg_.power_recv_w * airtime;
    const double applied = std::min(want, node.energy_residual_j);
    node.energy_residual_j -= applied;
    total_energy_j_ += applied;
    node.busy_recv_s += airtime;
}

void Simulator::broadcast(Node& sender, const Packet& pkt, double earliest_s) {
    if (!sender.can_transmit()) return;
    const double air = airtime_s(pkt.payload_bytes);
    // Half-duplex: queue behind any transmission already in flight.
    const double start = std::max({now_, earliest_s, sender.tx_free_until_s});
    sender.tx_free_until_s = start + air;
    if (start > now_) {
        schedule(start, EvKind::Transmit, sender.id, pkt);
        return;
    }
    emit(sender, pkt);
}

void Simulator::emit(Node& sender, const Packet& pkt) {
    if (!sender.can_transmit()) return;
    const double air = airtime_s(pkt.payload_bytes);
    charge_send(sender, air);
    const std::uint64_t tx_id = tx_counter_++;
    const long bits = static_cast<long>(pkt.payload_bytes) * 8;

    for (auto& rx : nodes_) {
        if (rx.id == sender.id) continue;
        const double d = distance(sender, rx);
        if (d > cfg_.tx_range_m) continue;
        const double snr = link_snr_internal(sender.id, rx.id, d, now_);
        const double p =
            channel::packet_success_prob(std::pow(10.0, snr / 10.0), bits);
        const double u = detail::uniform01(
            detail::mix(cfg_.seed, kLossTag, tx_id, static_cast<std::uint64_t>(rx.id)));
        const bool ok = u <= p;
        if (cfg_.record_transmissions) {
            tx_log_.push_back(TxRecord{now_, sender.id, rx.id, pkt.kind, snr, p, ok});
        }
        if (ok) {
            schedule(now_ + air + d / cfg_.sound_speed_mps, EvKind::Arrival, rx.id, pkt, snr);
        }
    }
}

void Simulator::deliver(const Node& sink, const Packet& pkt) {
    if (delivered_seqs_.count(pkt.sequence)) return;
    delivered_seqs_.insert(pkt.sequence);
    DeliveryRecord rec;
    rec.sequence = pkt.sequence;
    rec.birth_time_s = pkt.birth_time_s;
    rec.delivery_time_s = now_;
    rec.sink_id = sink.id;
    rec.source_position_at_birth = birth_positions_[pkt.sequence];
    deliveries_.push_back(rec);
}

void Simulator::send_ack(Node& node, const Packet& cause, long ack_for_seq) {
    Packet ack;
    ack.kind = PacketKind::Ack;
    ack.source_id = node.id;
    ack.sender_id = node.id;
    ack.payload_bytes = cfg_.control_bytes;
    ack.sender_depth_m = node.depth();
    ack.sender_energy_ratio = node.energy_ratio();
    ack.ack_for_seq = ack_for_seq;
    ack.handshake_round = ack_for_seq >= 0 ? -1 : cause.handshake_round;
    // Deterministic stagger spreads simultaneous repliers apart.
    const double stagger =
        kAckStaggerMax * detail::uniform01(detail::mix(cfg_.seed, kStaggerTag,
                                                       static_cast<std::uint64_t>(node.id),
                                                       static_cast<std::uint64_t>(order_counter_)));
    broadcast(node, ack, now_ + stagger);
}

Packet Simulator::data_packet(const Node& sender, const Packet& base) const {
    Packet pkt = base;
    pkt.kind = PacketKind::Data;
    pkt.sender_id = sender.id;
    pkt.payload_bytes = cfg_.data_bytes;
    pkt.sender_depth_m = sender.depth();
    pkt.sender_energy_ratio = sender.energy_ratio();
    return pkt;
}

void Simulator::dispatch(const Event& ev) {
    switch (ev.kind) {
        case EvKind::Arrival: {
            Node& node = nodes_[static_cast<std::size_t>(ev.node)];
            charge_recv(node, airtime_s(ev.pkt.payload_bytes));
            on_arrival(node, ev.pkt, ev.snr_db);
            return;
        }
        case EvKind::Transmit: {
            emit(nodes_[static_cast<std::size_t>(ev.node)], ev.pkt);
            return;
        }
        case EvKind::InitHandshake: {
            Node& node = nodes_[static_cast<std::size_t>(ev.node)];
            Packet hs;
            hs.kind = PacketKind::Handshake;
            hs.source_id = hs.sender_id = node.id;
            hs.payload_bytes = cfg_.control_bytes;
            hs.sender_depth_m = node.depth();
            hs.sender_energy_ratio = node.energy_ratio();
            hs.handshake_round = -1;  // discovery round, nobody collects
            broadcast(node, hs);
            return;
        }
        case EvKind::InitDone: {
            Node& node = nodes_[static_cast<std::size_t>(ev.node)];
            transition(node, NodeState::Listening);
            if (!node.pending.empty()) {
                transition(node, NodeState::Forwarding);
                begin_round(node);
            }
            return;
        }
        case EvKind::TrafficGen: {
            Node& src = nodes_[static_cast<std::size_t>(ev.node)];
            Packet pkt;
            pkt.kind = PacketKind::Data;
            pkt.source_id = src.id;
            pkt.sequence = next_data_seq_++;
            pkt.birth_time_s = now_;
            pkt.hop_count = 0;
            ++packets_generated_;
            birth_positions_[pkt.sequence] = src.position;
            src.accepted_seqs.insert(pkt.sequence);

            if (cfg_.protocol == Protocol::Dbr) {
                if (src.state == NodeState::Listening) {
                    transition(src, NodeState::Forwarding);
                    broadcast(src, data_packet(src, pkt));
                    transition(src, NodeState::Listening);
                }
            } else {
                src.pending.push_back(pkt);
                if (src.state == NodeState::Listening) {
                    transition(src, NodeState::Forwarding);
                    begin_round(src);
                }
            }
            const double next = now_ + 1.0 / cfg_.packet_rate_pps;
            if (next < cfg_.duration_s) schedule(next, EvKind::TrafficGen, src.id);
            return;
        }
        case EvKind::AckDeadline: {
            Node& node = nodes_[static_cast<std::size_t>(ev.node)];
            if (node.current_round != ev.seq) return;  // stale round
            on_ack_deadline(node, ev.seq);
            return;
        }
        case EvKind::HopAckTimeout: {
            Node& node = nodes_[static_cast<std::size_t>(ev.node)];
            if (node.timer_token != ev.token) return;
            node.awaiting_seq = -1;
            next_attempt(node);
            return;
        }
        case EvKind::HoldRetry: {
            Node& node = nodes_[static_cast<std::size_t>(ev.node)];
            if (node.timer_token != ev.token) return;
            if (node.state == NodeState::Forwarding && !node.pending.empty()) {
                begin_round(node);
            }
            return;
        }
        case EvKind::DbrHoldFire: {
            Node& node = nodes_[static_cast<std::size_t>(ev.node)];
            const auto it = node.dbr_holds.find(ev.seq);
            if (it == node.dbr_holds.end() || it->second != ev.token) return;
            node.dbr_holds.erase(it);
            node.accepted_seqs.insert(ev.seq);
            Packet pkt = ev.pkt;
            pkt.sender_id = node.id;
            pkt.hop_count += 1;
            pkt.sender_depth_m = node.depth();
            pkt.sender_energy_ratio = node.energy_ratio();
            broadcast(node, pkt);
            return;
        }
        case EvKind::MobilityTick: {
            std::mt19937_64 rng(detail::mix(cfg_.seed, kMobilityTag,
                                            static_cast<std::uint64_t>(now_ / kMobilityTick)));
            std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
            const double step = cfg_.mobility_speed_mps * kMobilityTick;
            for (auto& n : nodes_) {
                if (n.is_sink) continue;
                const double theta = angle(rng);
                double x = n.position.x + step * std::cos(theta);
                double y = n.position.y + step * std::sin(theta);
                if (x < 0.0) x = -x;
                if (x > cfg_.area_x_m) x = 2.0 * cfg_.area_x_m - x;
                if (y < 0.0) y = -y;
                if (y > cfg_.area_y_m) y = 2.0 * cfg_.area_y_m - y;
                n.position.x = x;
                n.position.y = y;
            }
            schedule(now_ + kMobilityTick, EvKind::MobilityTick, -1);
            return;
        }
    }
}

void Simulator::on_arrival(Node& node, const Packet& pkt, double snr_db) {
    if (cfg_.protocol != Protocol::Dbr) {
        auto [it, inserted] = node.neighbors.try_emplace(pkt.sender_id);
        NeighborRecord& rec = it->second;
        if (inserted) {
            rec.neighbor_id = pkt.sender_id;
            rec.ema.alpha = cfg_.ema_alpha;
        }
        rec.add_sample(now_, snr_db);
        rec.last_depth_m = pkt.sender_depth_m;
        rec.last_energy_ratio = pkt.sender_energy_ratio;
    }

    switch (pkt.kind) {
        case PacketKind::Handshake:
            send_ack(node, pkt, -1);
            return;
        case PacketKind::Ack: {
            if (node.current_round >= 0 && pkt.handshake_round == node.current_round) {
                node.round_acks.push_back(AckInfo{pkt.sender_id,
                                                  nodes_[static_cast<std::size_t>(pkt.sender_id)].is_sink,
                                                  pkt.sender_depth_m, pkt.sender_energy_ratio,
                                                  snr_db});
            }
            if (pkt.ack_for_seq >= 0 && pkt.ack_for_seq == node.awaiting_seq &&
                !node.ranking.empty() && pkt.sender_id == node.ranking[node.attempt_idx]) {
                complete_hop(node);
            }
            return;
        }
        case PacketKind::Data:
            if (cfg_.protocol == Protocol::Dbr) {
                on_data_dbr(node, pkt);
            } else {
                on_data(node, pkt);
            }
            return;
    }
}

void Simulator::on_data(Node& node, const Packet& pkt) {
    if (node.is_sink) {
        deliver(node, pkt);
        if (pkt.designated_forwarder_id == node.id) send_ack(node, pkt, pkt.sequence);
        return;
    }
    if (pkt.designated_forwarder_id != node.id) return;

    send_ack(node, pkt, pkt.sequence);
    if (node.accepted_seqs.count(pkt.sequence)) return;  // duplicate hop
    node.accepted_seqs.insert(pkt.sequence);
    if (pkt.hop_count + 1 > cfg_.ttl) return;  // TTL exhausted, drop silently

    Packet onward = pkt;
    onward.hop_count += 1;
    onward.designated_forwarder_id = -1;
    node.pending.push_back(onward);
    if (node.state == NodeState::Listening) {
        transition(node, NodeState::Forwarding);
        begin_round(node);
    }
}

void Simulator::on_data_dbr(Node& node, const Packet& pkt) {
    if (node.is_sink) {
        deliver(node, pkt);
        return;
    }
    const auto hold = node.dbr_holds.find(pkt.sequence);
    if (hold != node.dbr_holds.end()) {
        // Duplicate heard during the hold: suppress our copy.
        node.dbr_holds.erase(hold);
        node.accepted_seqs.insert(pkt.sequence);
        return;
    }
    if (node.accepted_seqs.count(pkt.sequence)) return;

    const double delta_d = pkt.sender_depth_m - node.depth();
    if (delta_d <= cfg_.resolved_dbr_delta()) return;
    if (pkt.hop_count + 1 > cfg_.ttl) return;

    // Holding time shrinks with depth progress, so the deepest receiver
    // fires first and suppresses the others.
    const double tau = cfg_.tx_range_m / cfg_.sound_speed_mps;
    const double holding =
        (2.0 * tau / cfg_.resolved_dbr_delta()) * (cfg_.tx_range_m - delta_d);
    const std::uint64_t token = next_token_++;
    node.dbr_holds[pkt.sequence] = token;
    schedule(now_ + std::max(holding, 0.0), EvKind::DbrHoldFire, node.id, pkt, 0.0,
             pkt.sequence, token);
}

void Simulator::begin_round(Node& node) {
    if (!node.can_transmit()) {
        node.pending.clear();
        finish_round_or_listen(node);
        return;
    }
    node.current_round = next_round_++;
    node.round_acks.clear();
    node.ranking.clear();
    node.attempt_idx = 0;
    node.tx_attempts = 0;
    node.awaiting_seq = -1;

    Packet hs;
    hs.kind = PacketKind::Handshake;
    hs.source_id = hs.sender_id = node.id;
    hs.payload_bytes = cfg_.control_bytes;
    hs.sender_depth_m = node.depth();
    hs.sender_energy_ratio = node.energy_ratio();
    hs.handshake_round = node.current_round;
    broadcast(node, hs);

    // Anchor the deadline to the actual end of the handshake transmission:
    // the broadcast may have queued behind an in-flight packet.
    const double deadline = node.tx_free_until_s +
                            2.0 * cfg_.tx_range_m / cfg_.sound_speed_mps + kAckStaggerMax +
                            airtime_s(cfg_.control_bytes) + kTimerGuard;
    schedule(deadline, EvKind::AckDeadline, node.id, {}, 0.0, node.current_round);
}

void Simulator::on_ack_deadline(Node& node, long /*round*/) {
    node.current_round = -1;

    std::vector<CandidateInfo> candidates;
    candidates.reserve(node.round_acks.size());
    for (const auto& ack : node.round_acks) {
        const NeighborRecord& rec = node.neighbors.at(ack.id);
        CandidateInfo c;
        c.id = ack.id;
        c.is_sink = ack.is_sink;
        c.delta_d_m = node.depth() - ack.depth_m;
        c.energy_ratio = ack.energy_ratio;
        c.ack_snr_db = ack.snr_db;
        const auto& series = rec.snr_series;
        if (series.size() >= cfg_.nnr.window_m + 1) {
            c.predicted_snr_db =
                estimators::nnr_predict_indexed(rec.nnr_index, series, cfg_.nnr);
        } else {
            c.predicted_snr_db = series.back().snr_db;  // first-contact fallback
        }
        c.gradient_db = series.size() >= 2
                            ? series[series.size() - 1].snr_db - series[series.size() - 2].snr_db
                            : 0.0;
        c.mean_db = rec.stats.mean();
        c.variance_db2 = rec.stats.count() >= 2 ? rec.stats.variance() : 0.0;
        c.ema_snr_db = rec.ema.s;
        candidates.push_back(c);
    }

    node.ranking = rank_candidates(candidates, cfg_.protocol, cfg_.gradient_alpha);
    if (node.ranking.empty()) {
        ++node.hold_cycles;
        if (node.hold_cycles > cfg_.retry_limit) {
            ++drops_.no_candidate;
            drop_head(node);
            return;
        }
        const std::uint64_t token = next_token_++;
        node.timer_token = token;
        schedule(now_ + cfg_.hold_retry_s, EvKind::HoldRetry, node.id, {}, 0.0, -1, token);
        return;
    }
    node.attempt_idx = 0;
    node.tx_attempts = 0;
    transmit_head(node);
}

void Simulator::transmit_head(Node& node) {
    if (node.pending.empty()) {
        finish_round_or_listen(node);
        return;
    }
    if (!node.can_transmit()) {
        node.pending.clear();
        finish_round_or_listen(node);
        return;
    }
    Packet pkt = data_packet(node, node.pending.front());
    pkt.designated_forwarder_id = node.ranking[node.attempt_idx];
    broadcast(node, pkt);
    ++node.tx_attempts;
    node.awaiting_seq = pkt.sequence;
    const std::uint64_t token = next_token_++;
    node.timer_token = token;
    const double timeout = node.tx_free_until_s +
                           2.0 * cfg_.tx_range_m / cfg_.sound_speed_mps + kAckStaggerMax +
                           airtime_s(cfg_.control_bytes) + kTimerGuard;
    schedule(timeout, EvKind::HopAckTimeout, node.id, {}, 0.0, pkt.sequence, token);
}

void Simulator::complete_hop(Node& node) {
    node.awaiting_seq = -1;
    node.timer_token = next_token_++;  // invalidate the pending timeout
    if (!node.pending.empty()) node.pending.pop_front();
    node.hold_cycles = 0;
    finish_round_or_listen(node);
}

void Simulator::next_attempt(Node& node) {
    if (node.tx_attempts < cfg_.retry_limit) {
        transmit_head(node);
        return;
    }
    ++node.attempt_idx;
    node.tx_attempts = 0;
    if (node.attempt_idx < node.ranking.size()) {
        transmit_head(node);
        return;
    }
    drop_head(node);
}

void Simulator::drop_head(Node& node) {
    if (!node.pending.empty()) node.pending.pop_front();
    node.hold_cycles = 0;
    finish_round_or_listen(node);
}

void Simulator::finish_round_or_listen(Node& node) {
    node.current_round = -1;
    node.awaiting_seq = -1;
    if (!node.pending.empty()) {
        begin_round(node);
        return;
    }
    if (node.state == NodeState::Forwarding) transition(node, NodeState::Listening);
}

SimMetrics run_sim(const SimConfig& cfg) { return Simulator(cfg).run(); }

}  // namespace aquannr::netsim
