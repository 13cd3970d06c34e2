#include "aloha_noma/protocol.hpp"

#include <stdexcept>

namespace aloha_noma {

void ProtocolConfig::validate() const {
    if (total_devices < 1)
        throw std::invalid_argument("ProtocolConfig: total_devices must be at least 1");
    if (sic_degree < 1 || sic_degree > 64)
        throw std::invalid_argument("ProtocolConfig: sic_degree must lie in 1..64");
    if (max_attempts < 1)
        throw std::invalid_argument("ProtocolConfig: max_attempts must be at least 1");
    if (!perfect_detection) {
        detector.validate();
        if (sic_degree > detector.max_detectable)
            throw std::invalid_argument(
                "ProtocolConfig: sic_degree above the detector ceiling max_detectable");
    }
}

const char* frame_phase_name(FramePhase phase) {
    switch (phase) {
    case FramePhase::beacon: return "beacon";
    case FramePhase::training: return "training";
    case FramePhase::degree_broadcast_or_abort: return "degree_broadcast_or_abort";
    case FramePhase::power_selection: return "power_selection";
    case FramePhase::ack_nack: return "ack_nack";
    }
    return "unknown";
}

FrameOutcome run_frame(std::span<const std::uint32_t> active_set, const ProtocolConfig& cfg,
                       RngStream& rng) {
    if (active_set.size() > cfg.total_devices)
        throw std::invalid_argument("run_frame: more active devices than total_devices");
    const auto n_active = static_cast<unsigned>(active_set.size());

    FrameOutcome out;
    out.true_active = n_active;
    out.phase_reached = FramePhase::beacon; // gateway announces the frame

    // Training: the gateway estimates the active count. Perfect mode
    // substitutes the true count and spends no randomness on the window.
    out.phase_reached = FramePhase::training;
    if (cfg.perfect_detection) {
        out.detected = n_active;
    } else {
        const ReceivedTraining obs = superpose(n_active, cfg.detector.training, rng);
        out.detected = detect_count(obs, cfg.detector).estimated_count;
    }

    if (n_active == 0)
        return out; // idle frame, nothing to schedule

    out.phase_reached = FramePhase::degree_broadcast_or_abort;
    if (out.detected > cfg.sic_degree) {
        // Estimated load exceeds what SIC can separate: restart the frame
        // and push the devices into backoff.
        out.aborted = true;
        out.backoff_issued = true;
        return out;
    }

    out.phase_reached = FramePhase::power_selection;
    for (unsigned attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
        out.attempts_used = attempt;
        // Each active device picks one of the sic_degree optimum power
        // levels; all picks land before the gateway can judge them.
        std::uint64_t taken = 0;
        bool all_distinct = true;
        for (unsigned d = 0; d < n_active; ++d) {
            const std::uint64_t level = rng.below(cfg.sic_degree);
            const std::uint64_t bit = std::uint64_t{1} << level;
            if (taken & bit)
                all_distinct = false;
            taken |= bit;
        }
        if (all_distinct) {
            out.delivered = n_active; // SIC peels every signal
            out.phase_reached = FramePhase::ack_nack;
            return out;
        }
    }

    out.phase_reached = FramePhase::ack_nack;
    out.backoff_issued = true; // NACK after exhausting the attempts
    return out;
}

Probability distinct_pick_probability(unsigned n_active, unsigned m_levels) {
    if (n_active < 1 || m_levels < 1)
        throw std::invalid_argument("distinct_pick_probability: arguments must be positive");
    if (n_active > m_levels)
        return Probability(0.0);
    double p = 1.0;
    for (unsigned i = 0; i < n_active; ++i)
        p *= static_cast<double>(m_levels - i) / static_cast<double>(m_levels);
    return Probability(p);
}

Probability frame_success_probability(unsigned n_active, const ProtocolConfig& cfg) {
    if (n_active < 1)
        throw std::invalid_argument("frame_success_probability: n_active must be positive");
    if (n_active > cfg.sic_degree)
        return Probability(0.0);
    const double miss = 1.0 - distinct_pick_probability(n_active, cfg.sic_degree).value();
    double all_miss = 1.0;
    for (unsigned a = 0; a < cfg.max_attempts; ++a)
        all_miss *= miss;
    return Probability(1.0 - all_miss);
}

} // namespace aloha_noma
