#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "aloha_noma/channel.hpp"
#include "aloha_noma/detector.hpp"
#include "aloha_noma/protocol.hpp"
#include "aloha_noma/simulation.hpp"

namespace {

using namespace aloha_noma;

// Everything the three commands can be asked to do. Vector-valued knobs
// stay empty until parsing; the command fills in its default afterwards,
// so repeatable flags and scalar flags share one struct.
struct ExperimentSpec {
    unsigned m_devices = 10;
    std::vector<double> p_transmit;    // default 0.25
    std::vector<unsigned> sic_degree;  // default 3
    std::vector<unsigned> attempts;    // default 3
    double pfa = 0.1;
    unsigned train_len = 100;
    std::vector<double> snr_db;        // default depends on the command
    std::uint64_t frames = 1'000'000;
    std::uint64_t trials = 10'000;
    std::uint64_t seed = 42;
    bool perfect_detection = false;
    std::string output;      // empty means stdout
    std::string config_path; // empty means no config file
};

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Stream to --output or stdout; fails loudly on an unwritable path.
class OutputTarget {
  public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

template <typename T>
void default_if_empty(std::vector<T>& v, T fallback) {
    if (v.empty())
        v.push_back(fallback);
}

DetectorConfig make_detector(const ExperimentSpec& spec, unsigned max_detectable, double snr_db) {
    DetectorConfig det;
    det.target_false_alarm = Probability(spec.pfa);
    det.max_detectable = max_detectable;
    det.training = TrainingConfig::from_snr_db(snr_db, spec.train_len);
    det.validate();
    return det;
}

int cmd_detect_curve(ExperimentSpec spec) {
    if (spec.snr_db.empty()) {
        for (int db = -10; db <= 20; ++db)
            spec.snr_db.push_back(db);
    }
    default_if_empty(spec.sic_degree, 3u);
    const unsigned m_max = spec.sic_degree.front();
    if (spec.trials == 0)
        throw std::runtime_error("detect-curve: trials must be at least 1");

    OutputTarget out(spec.output);
    std::ostream& os = out.stream();
    os << "snr_db,boundary_n,analytic_pd,empirical_pd,trials\n";

    const RngStream root(spec.seed);
    for (std::size_t i = 0; i < spec.snr_db.size(); ++i) {
        const DetectorConfig det = make_detector(spec, m_max, spec.snr_db[i]);
        for (unsigned n = 1; n <= m_max; ++n) {
            const double analytic = analytic_detection_probability(n, det);
            const RngStream point = root.substream(i * m_max + (n - 1));
            const double empirical =
                monte_carlo_detection_probability(n, det, spec.trials, point);
            os << fmt9(spec.snr_db[i]) << ',' << n << ',' << fmt9(analytic) << ','
               << fmt9(empirical) << ',' << spec.trials << '\n';
        }
    }
    return 0;
}

int cmd_throughput(ExperimentSpec spec) {
    default_if_empty(spec.p_transmit, 0.25);
    default_if_empty(spec.sic_degree, 3u);
    default_if_empty(spec.attempts, 3u);
    default_if_empty(spec.snr_db, 10.0);

    SweepGrid grid;
    grid.transmit_probabilities = spec.p_transmit;
    grid.sic_degrees = spec.sic_degree;
    grid.attempt_counts = spec.attempts;

    unsigned top_degree = 1;
    for (unsigned m : spec.sic_degree)
        top_degree = std::max(top_degree, m);
    const DetectorConfig det = make_detector(spec, top_degree, spec.snr_db.front());

    const std::vector<ThroughputRecord> records =
        sweep(grid, spec.m_devices, det, spec.perfect_detection, spec.frames, spec.seed);

    OutputTarget out(spec.output);
    std::ostream& os = out.stream();
    os << "protocol,p_t,m,k,mean_throughput,stderr,abort_rate,nack_rate,idle_rate,"
          "gain_db,oracle_throughput\n";

    const double nan = std::numeric_limits<double>::quiet_NaN();
    double aloha_mean = nan; // baseline of the current p_t block
    for (const ThroughputRecord& rec : records) {
        TrafficConfig traffic;
        traffic.total_devices = rec.total_devices;
        traffic.transmit_probability = Probability(rec.transmit_probability);

        double gain_db = 0.0;
        double oracle = nan;
        if (rec.protocol_name == "aloha") {
            aloha_mean = rec.mean_throughput;
            oracle = oracle_throughput_aloha(traffic);
        } else {
            gain_db = (aloha_mean > 0.0 && rec.mean_throughput > 0.0)
                          ? 10.0 * std::log10(rec.mean_throughput / aloha_mean)
                          : nan;
            if (rec.perfect_detection) {
                ProtocolConfig proto;
                proto.total_devices = rec.total_devices;
                proto.sic_degree = rec.sic_degree;
                proto.max_attempts = rec.max_attempts;
                proto.perfect_detection = true;
                oracle = oracle_throughput_noma(traffic, proto);
            }
        }
        os << rec.protocol_name << ',' << fmt9(rec.transmit_probability) << ',' << rec.sic_degree
           << ',' << rec.max_attempts << ',' << fmt9(rec.mean_throughput) << ','
           << fmt9(rec.throughput_stderr) << ',' << fmt9(rec.abort_rate.value()) << ','
           << fmt9(rec.nack_rate.value()) << ',' << fmt9(rec.idle_rate.value()) << ','
           << fmt9(gain_db) << ',' << fmt9(oracle) << '\n';
    }
    return 0;
}

int cmd_frame_trace(ExperimentSpec spec) {
    default_if_empty(spec.p_transmit, 0.25);
    default_if_empty(spec.sic_degree, 3u);
    default_if_empty(spec.attempts, 3u);
    default_if_empty(spec.snr_db, 10.0);
    if (spec.frames > 10'000)
        throw std::runtime_error(
            "frame-trace: more than 10000 frames requested; use the throughput command for "
            "aggregate runs");

    TrafficConfig traffic;
    traffic.total_devices = spec.m_devices;
    traffic.transmit_probability = Probability(spec.p_transmit.front());
    traffic.validate();

    ProtocolConfig proto;
    proto.total_devices = spec.m_devices;
    proto.sic_degree = spec.sic_degree.front();
    proto.max_attempts = spec.attempts.front();
    proto.detector = make_detector(spec, proto.sic_degree, spec.snr_db.front());
    proto.perfect_detection = spec.perfect_detection;
    proto.validate();

    OutputTarget out(spec.output);
    std::ostream& os = out.stream();
    os << "frame_index\tn\tn_hat\taborted\tattempts_used\tdelivered\tbackoff\tphase\n";

    const RngStream root(spec.seed);
    for (std::uint64_t f = 0; f < spec.frames; ++f) {
        RngStream frame_rng = root.substream(f);
        const FrameOutcome o = simulate_one_frame(traffic, proto, frame_rng);
        os << f << '\t' << o.true_active << '\t' << o.detected << '\t' << (o.aborted ? 1 : 0)
           << '\t' << o.attempts_used << '\t' << o.delivered << '\t'
           << (o.backoff_issued ? 1 : 0) << '\t' << frame_phase_name(o.phase_reached) << '\n';
    }
    return 0;
}

// Config file: flat key=value lines, # comments, keys named like the long
// flags without the dashes. A value from the file is used only when the
// flag was absent on the command line, so flags always win. Keys that
// belong to one of the other commands are ignored; anything else is a
// typo and rejected.
void apply_config(CLI::App& cmd, ExperimentSpec& spec, const std::string& path) {
    static const std::vector<std::string> known = {
        "m-devices", "p-transmit", "sic-degree",        "attempts", "pfa",  "train-len",
        "snr-db",    "frames",     "trials",            "seed",     "output",
        "perfect-detection"};

    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);

    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty())
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown config key '" + key + "'");

        CLI::Option* opt = nullptr;
        try {
            opt = cmd.get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
            continue; // key belongs to a different command
        }
        if (opt->count() > 0)
            continue; // the command line already decided this one

        try {
            if (key == "m-devices") spec.m_devices = static_cast<unsigned>(std::stoul(value));
            else if (key == "p-transmit") spec.p_transmit.push_back(std::stod(value));
            else if (key == "sic-degree")
                spec.sic_degree.push_back(static_cast<unsigned>(std::stoul(value)));
            else if (key == "attempts")
                spec.attempts.push_back(static_cast<unsigned>(std::stoul(value)));
            else if (key == "pfa") spec.pfa = std::stod(value);
            else if (key == "train-len") spec.train_len = static_cast<unsigned>(std::stoul(value));
            else if (key == "snr-db") spec.snr_db.push_back(std::stod(value));
            else if (key == "frames") spec.frames = std::stoull(value);
            else if (key == "trials") spec.trials = std::stoull(value);
            else if (key == "seed") spec.seed = std::stoull(value);
            else if (key == "output") spec.output = value;
            else if (key == "perfect-detection")
                spec.perfect_detection = value == "1" || value == "true" || value == "yes";
        } catch (const std::logic_error&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad value for '" +
                                     key + "'");
        }
    }
}

void add_common_options(CLI::App* cmd, ExperimentSpec& spec) {
    cmd->add_option("--config", spec.config_path, "flat key=value config file");
    cmd->add_option("--pfa", spec.pfa, "per-boundary false-alarm probability")
        ->capture_default_str();
    cmd->add_option("--train-len", spec.train_len, "training sequence length L")
        ->capture_default_str();
    cmd->add_option("--seed", spec.seed, "RNG seed")
        ->envname("ALOHA_NOMA_SEED")
        ->capture_default_str();
    cmd->add_option("--output", spec.output, "write output here instead of stdout");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aloha-NOMA random-access uplink simulator"};
    app.require_subcommand(1);

    ExperimentSpec spec;

    CLI::App* detect = app.add_subcommand(
        "detect-curve", "active-count detector: analytic and empirical detection probability "
                        "per SNR point and boundary (CSV)");
    detect->add_option("--sic-degree", spec.sic_degree,
                       "detector ceiling m_max, boundaries 1..m_max are emitted (default 3)")
        ->expected(1);
    detect->add_option("--snr-db", spec.snr_db,
                       "SNR grid point in dB, repeatable (default -10..20 step 1)");
    detect->add_option("--trials", spec.trials, "Monte-Carlo trials per row")
        ->capture_default_str();
    add_common_options(detect, spec);

    CLI::App* throughput = app.add_subcommand(
        "throughput", "pure-Aloha baseline vs Aloha-NOMA throughput over a parameter grid (CSV)");
    throughput->add_option("--m-devices", spec.m_devices, "device population M")
        ->capture_default_str();
    throughput->add_option("--p-transmit", spec.p_transmit,
                           "per-frame transmit probability, repeatable (default 0.25)");
    throughput->add_option("--sic-degree", spec.sic_degree,
                           "SIC degree m, repeatable (default 3)");
    throughput->add_option("--attempts", spec.attempts,
                           "power-selection attempts k, repeatable (default 3)");
    throughput->add_option("--snr-db", spec.snr_db, "training SNR in dB (default 10)")
        ->expected(1);
    throughput->add_option("--frames", spec.frames, "frames per grid point")
        ->capture_default_str();
    throughput->add_flag("--perfect-detection", spec.perfect_detection,
                         "bypass the detector with the true active count");
    add_common_options(throughput, spec);

    CLI::App* trace = app.add_subcommand(
        "frame-trace", "per-frame protocol outcome log for small runs (TSV)");
    trace->add_option("--m-devices", spec.m_devices, "device population M")
        ->capture_default_str();
    trace->add_option("--p-transmit", spec.p_transmit,
                      "per-frame transmit probability (default 0.25)")
        ->expected(1);
    trace->add_option("--sic-degree", spec.sic_degree, "SIC degree m (default 3)")->expected(1);
    trace->add_option("--attempts", spec.attempts, "power-selection attempts k (default 3)")
        ->expected(1);
    trace->add_option("--snr-db", spec.snr_db, "training SNR in dB (default 10)")->expected(1);
    CLI::Option* trace_frames =
        trace->add_option("--frames", spec.frames, "frames to trace, at most 10000 (default 1000)");
    trace->add_flag("--perfect-detection", spec.perfect_detection,
                    "bypass the detector with the true active count");
    add_common_options(trace, spec);

    CLI11_PARSE(app, argc, argv);

    try {
        if (trace->parsed() && trace_frames->count() == 0)
            spec.frames = 1000; // trace default, smaller than throughput's
        CLI::App* parsed = detect->parsed() ? detect : throughput->parsed() ? throughput : trace;
        if (!spec.config_path.empty())
            apply_config(*parsed, spec, spec.config_path);
        if (detect->parsed())
            return cmd_detect_curve(spec);
        if (throughput->parsed())
            return cmd_throughput(spec);
        return cmd_frame_trace(spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
