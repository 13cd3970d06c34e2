#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "aloha_noma/channel.hpp"

using namespace aloha_noma;

namespace {

TrainingConfig near_noiseless(unsigned length) {
    TrainingConfig cfg;
    cfg.sequence_length = length;
    cfg.noise_variance = 1e-18;
    return cfg;
}

} // namespace

TEST_CASE("training sequence is the constant word for every device") {
    TrainingConfig cfg;
    cfg.sequence_length = 4;
    const std::vector<double> w0 = training_sequence(0, cfg);
    REQUIRE(w0.size() == 4);
    for (double s : w0)
        CHECK(s == 1.0);
    CHECK(training_sequence(7, cfg) == w0);

    cfg.sequence_length = 2;
    cfg.symbol_amplitude = 0.5;
    const std::vector<double> half = training_sequence(0, cfg);
    REQUIRE(half.size() == 2);
    for (double s : half)
        CHECK(s == 0.5);
}

TEST_CASE("superpose in the vanishing-noise limit") {
    RngStream rng(5);
    const ReceivedTraining idle = superpose(0, near_noiseless(16), rng);
    REQUIRE(idle.samples.size() == 16);
    CHECK(idle.true_active_count == 0);
    for (double s : idle.samples)
        CHECK(std::fabs(s) < 1e-6);

    const ReceivedTraining three = superpose(3, near_noiseless(16), rng);
    CHECK(three.true_active_count == 3);
    for (double s : three.samples)
        CHECK(std::fabs(s - 3.0) < 1e-6);

    // linearity at every load the detector can meet
    for (unsigned n = 0; n <= 5; ++n) {
        const ReceivedTraining obs = superpose(n, near_noiseless(8), rng);
        for (double s : obs.samples)
            CHECK(std::fabs(s - static_cast<double>(n)) < 1e-6);
    }
}

TEST_CASE("superpose sample mean concentrates on the signal level") {
    TrainingConfig cfg;
    cfg.sequence_length = 100000;
    RngStream rng(77);
    const ReceivedTraining obs = superpose(2, cfg, rng);
    double mean = 0.0;
    for (double s : obs.samples)
        mean += s;
    mean /= static_cast<double>(obs.samples.size());
    // 4 sigma / sqrt(L) band around N*A*h
    CHECK(mean > 2.0 - 0.013);
    CHECK(mean < 2.0 + 0.013);
}

TEST_CASE("superpose is an unbiased estimator over many windows") {
    TrainingConfig cfg; // L = 100, unit noise
    RngStream root(123);
    const int windows = 10000;
    double grand = 0.0;
    for (int w = 0; w < windows; ++w) {
        RngStream rng = root.substream(w);
        const ReceivedTraining obs = superpose(2, cfg, rng);
        for (double s : obs.samples)
            grand += s - 2.0;
    }
    grand /= static_cast<double>(windows) * cfg.sequence_length;
    CHECK(std::fabs(grand) < 4.0 / std::sqrt(100.0 * windows));
}

TEST_CASE("superpose consumes a full window even when idle") {
    TrainingConfig cfg;
    cfg.sequence_length = 25;
    RngStream a(9), b(9);
    (void)superpose(0, cfg, a);
    (void)superpose(4, cfg, b);
    // both streams sit at the same position afterwards
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("config validation and snr conversions") {
    TrainingConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    TrainingConfig bad = cfg;
    bad.sequence_length = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.noise_variance = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.symbol_amplitude = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.channel_gain = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    const TrainingConfig at10 = TrainingConfig::from_snr_db(10.0, 64);
    CHECK(at10.sequence_length == 64);
    CHECK(at10.symbol_amplitude == 1.0);
    CHECK(at10.noise_variance == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(at10.snr_db() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(TrainingConfig::from_snr_db(-3.5).snr_db() == doctest::Approx(-3.5).epsilon(1e-12));
}
