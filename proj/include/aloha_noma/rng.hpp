#pragma once

#include <array>
#include <cstdint>

namespace aloha_noma {

// One Philox4x64-10 block: 256-bit counter, 128-bit key, 256 bits out.
// Counter-based, so any block can be computed independently of the rest.
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

// Counter-based random stream keyed by (seed, stream_id). Streams with the
// same key replay the same sequence; distinct stream ids give statistically
// independent sequences. substream() derives child ids deterministically,
// which is what lets the Monte-Carlo loops hand one stream to each frame
// and stay reproducible under any thread count.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Child stream for slot i. Children of one parent are pairwise
    // distinct; derivation does not advance the parent.
    RngStream substream(std::uint64_t i) const;

    std::uint64_t next_u64();

    // Uniform on the open interval (0, 1); never returns 0 or 1 exactly.
    double uniform01();

    // Uniform integer in [0, n). n must be nonzero.
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p);

  private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::array<std::uint64_t, 4> counter_{0, 0, 0, 0};
    std::array<std::uint64_t, 4> block_{};
    unsigned buffered_ = 0; // words of block_ not yet handed out

    void refill();
};

// Standard normal draw by inverting the CDF on one uniform variate. One
// draw consumes exactly one 64-bit word, so consumption is easy to reason
// about when splitting streams.
double standard_normal_draw(RngStream& rng);

} // namespace aloha_noma
