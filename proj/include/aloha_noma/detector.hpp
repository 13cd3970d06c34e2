#pragma once

#include <cstdint>
#include <vector>

#include "aloha_noma/channel.hpp"
#include "aloha_noma/exec.hpp"
#include "aloha_noma/rng.hpp"
#include "aloha_noma/stats.hpp"

namespace aloha_noma {

// Settings of the sequential active-count test.
struct DetectorConfig {
    Probability target_false_alarm{0.1}; // P_FA of each boundary test
    unsigned max_detectable = 3;         // m_max, the SIC degree ceiling
    TrainingConfig training{};

    void validate() const;
};

struct DetectionOutcome {
    unsigned estimated_count = 0;        // N_hat; max_detectable + 1 encodes out of range
    bool in_range = true;                // estimated_count <= max_detectable
    double test_statistic = 0.0;
    std::vector<double> thresholds_used; // thresholds evaluated, lowest first
};

// Sample mean of the received training window. Errors on an empty window.
double test_statistic(const ReceivedTraining& obs);

// Decision threshold of the boundary test for "at least N devices", for
// 1 <= N <= max_detectable + 1:
//   gamma'_N = Qinv(P_FA)*sqrt(noise_variance/L) + (N-1)*A*h
// Anchored at the N-1 hypothesis mean so each test keeps false-alarm
// probability P_FA; strictly increasing in N.
double threshold_for(unsigned boundary_n, const DetectorConfig& cfg);

// Walk the boundary tests upward from N=1 while the statistic stays at or
// above the threshold (a tie decides for the larger count). Stops at the
// first threshold not reached; if even the max_detectable+1 threshold is
// reached the test has terminated out of range.
DetectionOutcome detect_count(const ReceivedTraining& obs, const DetectorConfig& cfg);

// Probability that one boundary test fires when exactly N devices are
// active, P_D = Q(Qinv(P_FA) - A*h*sqrt(L/noise_variance)). The mean gap
// between adjacent hypotheses is one step A*h, so the value is the same
// for every boundary; boundary_n (>= 1) is kept for interface symmetry.
Probability analytic_detection_probability(unsigned boundary_n, const DetectorConfig& cfg);

// Fraction of trials where detect_count on a fresh observation with
// true_n active devices returns exactly true_n. Each trial runs on its
// own substream of rng, so the result is independent of execution order.
Probability monte_carlo_detection_probability(unsigned true_n, const DetectorConfig& cfg,
                                              std::uint64_t trials, const RngStream& rng,
                                              Execution exec = Execution::parallel);

// Fraction of trials where the single boundary test at boundary_n fires
// (statistic at or above its threshold) when exactly boundary_n devices
// are active: the empirical companion of analytic_detection_probability.
Probability monte_carlo_boundary_detection_probability(unsigned boundary_n,
                                                       const DetectorConfig& cfg,
                                                       std::uint64_t trials,
                                                       const RngStream& rng,
                                                       Execution exec = Execution::parallel);

} // namespace aloha_noma
