#include "aloha_noma/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace aloha_noma {

void TrainingConfig::validate() const {
    if (sequence_length < 1)
        throw std::invalid_argument("TrainingConfig: sequence_length must be at least 1");
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
        throw std::invalid_argument("TrainingConfig: noise_variance must be positive");
    if (!(symbol_amplitude > 0.0) || !std::isfinite(symbol_amplitude))
        throw std::invalid_argument("TrainingConfig: symbol_amplitude must be positive");
    if (channel_gain != 1.0)
        throw std::invalid_argument("TrainingConfig: channel_gain is pinned to 1");
}

double TrainingConfig::snr_db() const {
    return 10.0 * std::log10(symbol_amplitude * symbol_amplitude / noise_variance);
}

TrainingConfig TrainingConfig::from_snr_db(double snr_db, unsigned sequence_length) {
    TrainingConfig cfg;
    cfg.sequence_length = sequence_length;
    cfg.noise_variance = std::pow(10.0, -snr_db / 10.0);
    cfg.symbol_amplitude = 1.0;
    cfg.channel_gain = 1.0;
    return cfg;
}

std::vector<double> training_sequence(unsigned device_index, const TrainingConfig& cfg) {
    (void)device_index; // every device sends the same word
    return std::vector<double>(cfg.sequence_length, cfg.symbol_amplitude);
}

ReceivedTraining superpose(unsigned active_count, const TrainingConfig& cfg, RngStream& rng) {
    const double mean = active_count * cfg.per_device_level();
    const double sigma = std::sqrt(cfg.noise_variance);
    ReceivedTraining obs;
    obs.true_active_count = active_count;
    obs.samples.resize(cfg.sequence_length);
    for (double& s : obs.samples)
        s = mean + sigma * standard_normal_draw(rng);
    return obs;
}

} // namespace aloha_noma
