#pragma once

#include <cstdint>
#include <vector>

#include "aloha_noma/rng.hpp"

namespace aloha_noma {

// Training phase signal model. Every active device transmits the same
// constant training word of sequence_length symbols at symbol_amplitude
// through a flat unit gain, so each received sample is N*A*h plus white
// Gaussian noise.
struct TrainingConfig {
    unsigned sequence_length = 100; // training symbols per frame (L)
    double noise_variance = 1.0;    // AWGN variance per sample
    double symbol_amplitude = 1.0;  // per-device amplitude (A)
    double channel_gain = 1.0;      // common gain h, pinned to 1

    void validate() const;

    // Mean received level contributed by one active device (A*h).
    double per_device_level() const { return symbol_amplitude * channel_gain; }

    // Per-device per-symbol SNR in dB: 10*log10(A^2 / noise_variance).
    double snr_db() const;

    // Config with symbol_amplitude 1 and the noise variance that realizes
    // the given per-symbol SNR.
    static TrainingConfig from_snr_db(double snr_db, unsigned sequence_length = 100);
};

struct ReceivedTraining {
    std::vector<double> samples;
    unsigned true_active_count = 0; // ground truth, carried for scoring only
};

// The word one device sends during training: sequence_length symbols, all
// equal to symbol_amplitude. Identical for every device_index; the index
// parameter documents that no device gets a distinguishable word.
std::vector<double> training_sequence(unsigned device_index, const TrainingConfig& cfg);

// Superpose active_count copies of the training word through the channel
// and add noise. Consumes exactly sequence_length normal draws from rng,
// also when active_count is zero (the gateway listens either way).
ReceivedTraining superpose(unsigned active_count, const TrainingConfig& cfg, RngStream& rng);

} // namespace aloha_noma
