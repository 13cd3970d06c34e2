#include "aloha_noma/simulation.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aloha_noma {

void TrafficConfig::validate() const {
    if (total_devices < 1)
        throw std::invalid_argument("TrafficConfig: total_devices must be at least 1");
}

unsigned draw_active_count(const TrafficConfig& traffic, RngStream& rng) {
    // One coin per device, every frame, so the stream position after a
    // frame never depends on the transmit probability.
    const double p = traffic.transmit_probability.value();
    unsigned n = 0;
    for (unsigned d = 0; d < traffic.total_devices; ++d)
        n += rng.bernoulli(p) ? 1 : 0;
    return n;
}

FrameOutcome simulate_one_frame(const TrafficConfig& traffic, const ProtocolConfig& proto,
                                RngStream& frame_rng) {
    const unsigned n = draw_active_count(traffic, frame_rng);
    thread_local std::vector<std::uint32_t> ids;
    ids.resize(n);
    std::iota(ids.begin(), ids.end(), 0u);
    return run_frame(ids, proto, frame_rng);
}

namespace {

struct Tally {
    std::uint64_t delivered = 0;
    std::uint64_t delivered_sq = 0;
    std::uint64_t aborts = 0;
    std::uint64_t nacks = 0;
    std::uint64_t idles = 0;
};

// Finish a record from integer tallies; everything downstream of the
// frame loop is a pure function of them.
void fill_rates(ThroughputRecord& rec, const Tally& t, std::uint64_t frames) {
    const auto n = static_cast<double>(frames);
    rec.frames_simulated = frames;
    rec.mean_throughput = static_cast<double>(t.delivered) / n;
    double var = 0.0;
    if (frames > 1) {
        var = (static_cast<double>(t.delivered_sq) - n * rec.mean_throughput * rec.mean_throughput) /
              (n - 1.0);
        if (var < 0.0)
            var = 0.0; // guard the exact-constant case against rounding
    }
    rec.throughput_stderr = std::sqrt(var / n);
    rec.abort_rate = Probability(static_cast<double>(t.aborts) / n);
    rec.nack_rate = Probability(static_cast<double>(t.nacks) / n);
    rec.idle_rate = Probability(static_cast<double>(t.idles) / n);
}

} // namespace

ThroughputRecord simulate_aloha_noma(const TrafficConfig& traffic, const ProtocolConfig& proto,
                                     std::uint64_t frames, const RngStream& rng, Execution exec) {
    traffic.validate();
    proto.validate();
    if (frames == 0)
        throw std::invalid_argument("simulate_aloha_noma: frames must be at least 1");

    std::uint64_t delivered = 0, delivered_sq = 0, aborts = 0, nacks = 0, idles = 0;
    const auto n_frames = static_cast<long long>(frames);
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static) \
    reduction(+ : delivered, delivered_sq, aborts, nacks, idles)
        for (long long f = 0; f < n_frames; ++f) {
            RngStream frame_rng = rng.substream(static_cast<std::uint64_t>(f));
            const FrameOutcome o = simulate_one_frame(traffic, proto, frame_rng);
            delivered += o.delivered;
            delivered_sq += static_cast<std::uint64_t>(o.delivered) * o.delivered;
            aborts += o.aborted ? 1 : 0;
            nacks += (!o.aborted && o.backoff_issued) ? 1 : 0;
            idles += o.true_active == 0 ? 1 : 0;
        }
    } else {
        for (long long f = 0; f < n_frames; ++f) {
            RngStream frame_rng = rng.substream(static_cast<std::uint64_t>(f));
            const FrameOutcome o = simulate_one_frame(traffic, proto, frame_rng);
            delivered += o.delivered;
            delivered_sq += static_cast<std::uint64_t>(o.delivered) * o.delivered;
            aborts += o.aborted ? 1 : 0;
            nacks += (!o.aborted && o.backoff_issued) ? 1 : 0;
            idles += o.true_active == 0 ? 1 : 0;
        }
    }

    ThroughputRecord rec;
    rec.protocol_name = "aloha-noma";
    rec.total_devices = traffic.total_devices;
    rec.transmit_probability = traffic.transmit_probability.value();
    rec.sic_degree = proto.sic_degree;
    rec.max_attempts = proto.max_attempts;
    rec.snr_db = proto.detector.training.snr_db();
    rec.target_false_alarm = proto.detector.target_false_alarm.value();
    rec.perfect_detection = proto.perfect_detection;
    fill_rates(rec, Tally{delivered, delivered_sq, aborts, nacks, idles}, frames);
    return rec;
}

ThroughputRecord simulate_pure_aloha(const TrafficConfig& traffic, std::uint64_t frames,
                                     const RngStream& rng, Execution exec) {
    traffic.validate();
    if (frames == 0)
        throw std::invalid_argument("simulate_pure_aloha: frames must be at least 1");

    std::uint64_t delivered = 0, collisions = 0, idles = 0;
    const auto n_frames = static_cast<long long>(frames);
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static) reduction(+ : delivered, collisions, idles)
        for (long long f = 0; f < n_frames; ++f) {
            RngStream frame_rng = rng.substream(static_cast<std::uint64_t>(f));
            const unsigned n = draw_active_count(traffic, frame_rng);
            delivered += n == 1 ? 1 : 0;
            collisions += n >= 2 ? 1 : 0;
            idles += n == 0 ? 1 : 0;
        }
    } else {
        for (long long f = 0; f < n_frames; ++f) {
            RngStream frame_rng = rng.substream(static_cast<std::uint64_t>(f));
            const unsigned n = draw_active_count(traffic, frame_rng);
            delivered += n == 1 ? 1 : 0;
            collisions += n >= 2 ? 1 : 0;
            idles += n == 0 ? 1 : 0;
        }
    }

    ThroughputRecord rec;
    rec.protocol_name = "aloha";
    rec.total_devices = traffic.total_devices;
    rec.transmit_probability = traffic.transmit_probability.value();
    // delivered is 0/1 per frame, so the squared tally equals the tally
    fill_rates(rec, Tally{delivered, delivered, 0, collisions, idles}, frames);
    return rec;
}

namespace {

double binomial_pmf(unsigned m_total, unsigned n, double p) {
    double c = 1.0;
    for (unsigned i = 1; i <= n; ++i)
        c *= static_cast<double>(m_total - n + i) / static_cast<double>(i);
    return c * std::pow(p, static_cast<double>(n)) *
           std::pow(1.0 - p, static_cast<double>(m_total - n));
}

} // namespace

double oracle_throughput_noma(const TrafficConfig& traffic, const ProtocolConfig& proto) {
    traffic.validate();
    const double p = traffic.transmit_probability.value();
    const unsigned top = std::min(proto.sic_degree, traffic.total_devices);
    double sum = 0.0;
    for (unsigned n = 1; n <= top; ++n)
        sum += binomial_pmf(traffic.total_devices, n, p) * n *
               frame_success_probability(n, proto).value();
    return sum;
}

double oracle_throughput_aloha(const TrafficConfig& traffic) {
    traffic.validate();
    const double p = traffic.transmit_probability.value();
    return traffic.total_devices * p *
           std::pow(1.0 - p, static_cast<double>(traffic.total_devices - 1));
}

std::vector<ThroughputRecord> sweep(const SweepGrid& grid, unsigned total_devices,
                                    const DetectorConfig& detector, bool perfect_detection,
                                    std::uint64_t frames, std::uint64_t seed, Execution exec) {
    if (grid.transmit_probabilities.empty() || grid.sic_degrees.empty() ||
        grid.attempt_counts.empty())
        throw std::invalid_argument("sweep: every grid axis needs at least one value");

    const RngStream root(seed);
    const RngStream lane_aloha = root.substream(0);
    const RngStream lane_noma = root.substream(1);

    std::vector<ThroughputRecord> records;
    records.reserve(grid.transmit_probabilities.size() *
                    (1 + grid.sic_degrees.size() * grid.attempt_counts.size()));

    for (std::size_t ip = 0; ip < grid.transmit_probabilities.size(); ++ip) {
        TrafficConfig traffic;
        traffic.total_devices = total_devices;
        traffic.transmit_probability = Probability(grid.transmit_probabilities[ip]);

        records.push_back(simulate_pure_aloha(traffic, frames, lane_aloha.substream(ip), exec));

        for (std::size_t im = 0; im < grid.sic_degrees.size(); ++im) {
            for (std::size_t ik = 0; ik < grid.attempt_counts.size(); ++ik) {
                ProtocolConfig proto;
                proto.total_devices = total_devices;
                proto.sic_degree = grid.sic_degrees[im];
                proto.max_attempts = grid.attempt_counts[ik];
                proto.detector = detector;
                proto.detector.max_detectable = proto.sic_degree;
                proto.perfect_detection = perfect_detection;

                const std::size_t point =
                    (ip * grid.sic_degrees.size() + im) * grid.attempt_counts.size() + ik;
                records.push_back(simulate_aloha_noma(traffic, proto, frames,
                                                      lane_noma.substream(point), exec));
            }
        }
    }
    return records;
}

} // namespace aloha_noma
