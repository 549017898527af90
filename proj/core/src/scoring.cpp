#include "aquannr/netsim/scoring.hpp"

#include <algorithm>
#include <stdexcept>

namespace aquannr::netsim {

namespace {

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

constexpr double kVarianceFloor = 1e-6;

}  // namespace

double forwarder_score(double predicted_snr_db, double gradient_db, double delta_d_m,
                       double mean_db, double variance_db2, double energy_ratio,
                       double gradient_alpha) {
    if (variance_db2 < 0.0) {
        throw std::domain_error("forwarder_score: variance must be non-negative");
    }
    if (!(energy_ratio >= 0.0 && energy_ratio <= 1.0)) {
        throw std::domain_error("forwarder_score: energy ratio must be in [0, 1]");
    }
    if (!(delta_d_m > 0.0)) {
        throw std::domain_error("forwarder_score: depth gain must be positive");
    }
    const double boosted =
        predicted_snr_db + gradient_alpha * sgn(gradient_db) * predicted_snr_db;
    const double stability = mean_db * energy_ratio / std::max(variance_db2, kVarianceFloor);
    return stability * delta_d_m * boosted;
}

std::vector<int> rank_candidates(std::span<const CandidateInfo> candidates,
                                 Protocol protocol, double gradient_alpha) {
    struct Scored {
        int id;
        bool is_sink;
        double key;  // ack SNR for sinks, protocol score otherwise
    };
    std::vector<Scored> eligible;
    eligible.reserve(candidates.size());
    for (const auto& c : candidates) {
        if (c.is_sink) {
            eligible.push_back({c.id, true, c.ack_snr_db});
            continue;
        }
        if (!(c.delta_d_m > 0.0)) continue;
        double score = 0.0;
        switch (protocol) {
            case Protocol::Dbcar:
                score = forwarder_score(c.predicted_snr_db, c.gradient_db, c.delta_d_m,
                                        c.mean_db, c.variance_db2, c.energy_ratio,
                                        gradient_alpha);
                break;
            case Protocol::CarpLike:
                score = c.ema_snr_db * c.delta_d_m;
                break;
            case Protocol::Dbr:
                throw std::logic_error("rank_candidates: DBR does not select forwarders");
        }
        eligible.push_back({c.id, false, score});
    }

    std::sort(eligible.begin(), eligible.end(), [](const Scored& a, const Scored& b) {
        if (a.is_sink != b.is_sink) return a.is_sink;
        if (a.key != b.key) return a.key > b.key;
        return a.id < b.id;
    });

    std::vector<int> ids;
    ids.reserve(eligible.size());
    for (const auto& e : eligible) ids.push_back(e.id);
    return ids;
}

std::optional<int> choose_forwarder(std::span<const CandidateInfo> candidates,
                                    Protocol protocol, double gradient_alpha) {
    const auto ranking = rank_candidates(candidates, protocol, gradient_alpha);
    if (ranking.empty()) return std::nullopt;
    return ranking.front();
}

}  // namespace aquannr::netsim
