#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "aloha_noma/detector.hpp"
#include "aloha_noma/simulation.hpp"

// Times the Monte-Carlo kernels in their serial reference form against the
// OpenMP form and confirms both produce identical numbers.

namespace {

using namespace aloha_noma;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct KernelTimes {
    double serial_s = 0.0;
    double parallel_s = 0.0;
    bool identical = false;
};

void report(const char* name, const KernelTimes& kt) {
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   results %s\n", name,
                kt.serial_s, kt.parallel_s, kt.serial_s / kt.parallel_s,
                kt.identical ? "identical" : "DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    std::uint64_t frames = 400'000;
    std::uint64_t trials = 40'000;
    std::uint64_t seed = 42;
    if (argc > 1)
        frames = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2)
        trials = std::strtoull(argv[2], nullptr, 10);
    if (argc > 3)
        seed = std::strtoull(argv[3], nullptr, 10);

    std::printf("threads available: %d\n", omp_get_max_threads());
    std::printf("frames per throughput kernel: %llu, detector trials: %llu, seed: %llu\n\n",
                static_cast<unsigned long long>(frames), static_cast<unsigned long long>(trials),
                static_cast<unsigned long long>(seed));

    TrafficConfig traffic;
    const RngStream rng(seed);
    bool all_identical = true;

    {
        ProtocolConfig proto;
        proto.perfect_detection = true;
        KernelTimes kt;
        auto t0 = clock_type::now();
        const ThroughputRecord serial =
            simulate_aloha_noma(traffic, proto, frames, rng, Execution::serial);
        kt.serial_s = seconds_since(t0);
        t0 = clock_type::now();
        const ThroughputRecord parallel =
            simulate_aloha_noma(traffic, proto, frames, rng, Execution::parallel);
        kt.parallel_s = seconds_since(t0);
        kt.identical = serial.mean_throughput == parallel.mean_throughput &&
                       serial.throughput_stderr == parallel.throughput_stderr &&
                       serial.nack_rate.value() == parallel.nack_rate.value();
        all_identical = all_identical && kt.identical;
        report("aloha-noma perfect", kt);
    }

    {
        ProtocolConfig proto;
        proto.detector.training = TrainingConfig::from_snr_db(0.0);
        proto.detector.max_detectable = proto.sic_degree;
        KernelTimes kt;
        auto t0 = clock_type::now();
        const ThroughputRecord serial =
            simulate_aloha_noma(traffic, proto, frames / 4, rng, Execution::serial);
        kt.serial_s = seconds_since(t0);
        t0 = clock_type::now();
        const ThroughputRecord parallel =
            simulate_aloha_noma(traffic, proto, frames / 4, rng, Execution::parallel);
        kt.parallel_s = seconds_since(t0);
        kt.identical = serial.mean_throughput == parallel.mean_throughput &&
                       serial.abort_rate.value() == parallel.abort_rate.value();
        all_identical = all_identical && kt.identical;
        report("aloha-noma with detector", kt);
    }

    {
        KernelTimes kt;
        auto t0 = clock_type::now();
        const ThroughputRecord serial =
            simulate_pure_aloha(traffic, frames, rng, Execution::serial);
        kt.serial_s = seconds_since(t0);
        t0 = clock_type::now();
        const ThroughputRecord parallel =
            simulate_pure_aloha(traffic, frames, rng, Execution::parallel);
        kt.parallel_s = seconds_since(t0);
        kt.identical = serial.mean_throughput == parallel.mean_throughput &&
                       serial.throughput_stderr == parallel.throughput_stderr;
        all_identical = all_identical && kt.identical;
        report("pure aloha", kt);
    }

    {
        DetectorConfig det;
        det.training = TrainingConfig::from_snr_db(-10.0);
        KernelTimes kt;
        auto t0 = clock_type::now();
        const double serial =
            monte_carlo_detection_probability(2, det, trials, rng, Execution::serial);
        kt.serial_s = seconds_since(t0);
        t0 = clock_type::now();
        const double parallel =
            monte_carlo_detection_probability(2, det, trials, rng, Execution::parallel);
        kt.parallel_s = seconds_since(t0);
        kt.identical = serial == parallel;
        all_identical = all_identical && kt.identical;
        report("detector monte-carlo", kt);
    }

    if (!all_identical) {
        std::printf("\nserial and parallel kernels disagree\n");
        return 1;
    }
    return 0;
}
