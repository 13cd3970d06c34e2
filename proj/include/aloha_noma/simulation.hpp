#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aloha_noma/exec.hpp"
#include "aloha_noma/protocol.hpp"
#include "aloha_noma/rng.hpp"
#include "aloha_noma/stats.hpp"

namespace aloha_noma {

// Binomial traffic: each of total_devices wakes up independently with
// transmit_probability in every frame, memoryless across frames.
struct TrafficConfig {
    unsigned total_devices = 10;        // M
    Probability transmit_probability{0.25}; // p_T

    void validate() const;
};

// One aggregated result row. For the pure-Aloha baseline sic_degree and
// max_attempts are recorded as 0 and the detector fields as 0/true since
// no detector runs.
struct ThroughputRecord {
    std::string protocol_name;
    unsigned total_devices = 0;
    double transmit_probability = 0.0;
    unsigned sic_degree = 0;
    unsigned max_attempts = 0;
    double snr_db = 0.0;
    double target_false_alarm = 0.0;
    bool perfect_detection = true;
    std::uint64_t frames_simulated = 0;
    double mean_throughput = 0.0;     // delivered packets per frame
    double throughput_stderr = 0.0;   // standard error of the mean
    Probability abort_rate{0.0};
    Probability nack_rate{0.0};
    Probability idle_rate{0.0};
};

// Number of active devices this frame, N ~ Binomial(M, p_T). Always
// consumes exactly total_devices draws from rng.
unsigned draw_active_count(const TrafficConfig& traffic, RngStream& rng);

// Draw the active count and run one protocol frame on it, consuming only
// from frame_rng. This is the exact per-frame body of simulate_aloha_noma;
// the trace command replays it frame by frame.
FrameOutcome simulate_one_frame(const TrafficConfig& traffic, const ProtocolConfig& proto,
                                RngStream& frame_rng);

// Monte-Carlo throughput of the five-phase protocol. Frame f consumes only
// rng.substream(f) and all tallies are integers, so the result is
// bit-identical for serial and parallel execution and any thread count.
ThroughputRecord simulate_aloha_noma(const TrafficConfig& traffic, const ProtocolConfig& proto,
                                     std::uint64_t frames, const RngStream& rng,
                                     Execution exec = Execution::parallel);

// Pure-Aloha baseline: a frame delivers one packet exactly when a single
// device transmits; two or more collide and deliver nothing.
ThroughputRecord simulate_pure_aloha(const TrafficConfig& traffic, std::uint64_t frames,
                                     const RngStream& rng,
                                     Execution exec = Execution::parallel);

// Closed-form expected throughput under perfect detection:
// sum over N=1..m of P(N active) * N * frame_success_probability(N).
double oracle_throughput_noma(const TrafficConfig& traffic, const ProtocolConfig& proto);

// Closed-form pure-Aloha throughput M * p_T * (1 - p_T)^(M-1).
double oracle_throughput_aloha(const TrafficConfig& traffic);

struct SweepGrid {
    std::vector<double> transmit_probabilities;
    std::vector<unsigned> sic_degrees;
    std::vector<unsigned> attempt_counts;
};

// Run the baseline and the protocol over the whole grid. Per transmit
// probability: one pure-Aloha record, then one protocol record per
// (sic_degree, attempts) pair, degrees outer. Each grid point owns an
// RngStream derived from (seed, point index), so records never depend on
// evaluation order. The detector ceiling follows the swept degree
// (max_detectable = sic_degree) as the gateway aborts above its own
// degree.
std::vector<ThroughputRecord> sweep(const SweepGrid& grid, unsigned total_devices,
                                    const DetectorConfig& detector, bool perfect_detection,
                                    std::uint64_t frames, std::uint64_t seed,
                                    Execution exec = Execution::parallel);

} // namespace aloha_noma
