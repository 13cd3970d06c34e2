#include "aloha_noma/detector.hpp"

#include <cmath>
#include <stdexcept>

namespace aloha_noma {

void DetectorConfig::validate() const {
    const double pfa = target_false_alarm.value();
    if (!(pfa > 0.0 && pfa < 1.0))
        throw std::invalid_argument("DetectorConfig: target_false_alarm must lie inside (0, 1)");
    if (max_detectable < 1)
        throw std::invalid_argument("DetectorConfig: max_detectable must be at least 1");
    training.validate();
}

double test_statistic(const ReceivedTraining& obs) {
    if (obs.samples.empty())
        throw std::invalid_argument("test_statistic: empty observation");
    double sum = 0.0;
    for (double s : obs.samples)
        sum += s;
    return sum / static_cast<double>(obs.samples.size());
}

double threshold_for(unsigned boundary_n, const DetectorConfig& cfg) {
    if (boundary_n < 1 || boundary_n > cfg.max_detectable + 1)
        throw std::out_of_range("threshold_for: boundary outside 1..max_detectable+1");
    const double sigma_t =
        std::sqrt(cfg.training.noise_variance / static_cast<double>(cfg.training.sequence_length));
    return q_inverse(cfg.target_false_alarm) * sigma_t +
           (boundary_n - 1.0) * cfg.training.per_device_level();
}

DetectionOutcome detect_count(const ReceivedTraining& obs, const DetectorConfig& cfg) {
    DetectionOutcome out;
    out.test_statistic = test_statistic(obs);
    out.thresholds_used.reserve(cfg.max_detectable + 1);
    unsigned estimate = cfg.max_detectable + 1; // unless some boundary rejects
    for (unsigned n = 1; n <= cfg.max_detectable + 1; ++n) {
        const double gamma = threshold_for(n, cfg);
        out.thresholds_used.push_back(gamma);
        if (out.test_statistic < gamma) {
            estimate = n - 1;
            break;
        }
    }
    out.estimated_count = estimate;
    out.in_range = estimate <= cfg.max_detectable;
    return out;
}

Probability analytic_detection_probability(unsigned boundary_n, const DetectorConfig& cfg) {
    if (boundary_n < 1)
        throw std::invalid_argument("analytic_detection_probability: boundary must be positive");
    const double separation =
        cfg.training.per_device_level() *
        std::sqrt(static_cast<double>(cfg.training.sequence_length) / cfg.training.noise_variance);
    return q_function(q_inverse(cfg.target_false_alarm) - separation);
}

namespace {

// Shared Monte-Carlo scaffold: count trials satisfying hit(), one derived
// substream per trial so the tally is independent of scheduling.
template <typename Hit>
Probability run_trials(std::uint64_t trials, const RngStream& rng, Execution exec, Hit hit) {
    if (trials == 0)
        throw std::invalid_argument("monte_carlo detection: trials must be at least 1");
    std::uint64_t hits = 0;
    const auto n = static_cast<long long>(trials);
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static) reduction(+ : hits)
        for (long long t = 0; t < n; ++t) {
            RngStream trial_rng = rng.substream(static_cast<std::uint64_t>(t));
            hits += hit(trial_rng) ? 1 : 0;
        }
    } else {
        for (long long t = 0; t < n; ++t) {
            RngStream trial_rng = rng.substream(static_cast<std::uint64_t>(t));
            hits += hit(trial_rng) ? 1 : 0;
        }
    }
    return Probability(static_cast<double>(hits) / static_cast<double>(trials));
}

} // namespace

Probability monte_carlo_detection_probability(unsigned true_n, const DetectorConfig& cfg,
                                              std::uint64_t trials, const RngStream& rng,
                                              Execution exec) {
    cfg.validate();
    return run_trials(trials, rng, exec, [&](RngStream& trial_rng) {
        const ReceivedTraining obs = superpose(true_n, cfg.training, trial_rng);
        return detect_count(obs, cfg).estimated_count == true_n;
    });
}

Probability monte_carlo_boundary_detection_probability(unsigned boundary_n,
                                                       const DetectorConfig& cfg,
                                                       std::uint64_t trials,
                                                       const RngStream& rng, Execution exec) {
    cfg.validate();
    const double gamma = threshold_for(boundary_n, cfg);
    return run_trials(trials, rng, exec, [&](RngStream& trial_rng) {
        const ReceivedTraining obs = superpose(boundary_n, cfg.training, trial_rng);
        return test_statistic(obs) >= gamma;
    });
}

} // namespace aloha_noma
