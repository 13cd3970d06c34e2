#pragma once

#include <cstdint>
#include <span>

#include "aloha_noma/detector.hpp"
#include "aloha_noma/rng.hpp"
#include "aloha_noma/stats.hpp"

namespace aloha_noma {

// Gateway and device parameters for one frame.
struct ProtocolConfig {
    unsigned total_devices = 10;   // M
    unsigned sic_degree = 3;       // m, count of optimum power levels
    unsigned max_attempts = 3;     // k reselection rounds within a frame
    DetectorConfig detector{};
    bool perfect_detection = false;

    void validate() const;
};

// The five phases of one frame, in order.
enum class FramePhase {
    beacon,
    training,
    degree_broadcast_or_abort,
    power_selection,
    ack_nack,
};

const char* frame_phase_name(FramePhase phase);

struct FrameOutcome {
    unsigned true_active = 0;     // N
    unsigned detected = 0;        // N_hat; sic_degree + 1 and up means out of range
    bool aborted = false;         // gateway restarted the frame after detection
    unsigned attempts_used = 0;   // power-selection rounds consumed, <= max_attempts
    unsigned delivered = 0;       // packets decoded this frame: 0 or true_active
    bool backoff_issued = false;  // devices told to back off (abort or NACK)
    FramePhase phase_reached = FramePhase::beacon;
};

// Run one frame for the given set of active device ids. Phases: beacon;
// training (detection, skipped in favor of the true count when
// perfect_detection is set); degree broadcast or abort; up to max_attempts
// rounds where every active device picks one of sic_degree power levels
// uniformly at random and the SIC receiver decodes all packets exactly
// when the picks are pairwise distinct; ACK on success, NACK otherwise.
// Errors when more ids are passed than total_devices.
FrameOutcome run_frame(std::span<const std::uint32_t> active_set, const ProtocolConfig& cfg,
                       RngStream& rng);

// Probability that N independent uniform picks out of m levels are
// pairwise distinct: m!/((m-N)! * m^N) for N <= m, zero above.
Probability distinct_pick_probability(unsigned n_active, unsigned m_levels);

// Probability that a frame with N active devices (perfect detection)
// delivers its packets within max_attempts rounds:
// 1 - (1 - p_distinct)^k for N <= sic_degree, zero above.
Probability frame_success_probability(unsigned n_active, const ProtocolConfig& cfg);

} // namespace aloha_noma
