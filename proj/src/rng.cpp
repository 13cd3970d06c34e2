#include "aloha_noma/rng.hpp"

#include <stdexcept>

#include "aloha_noma/stats.hpp"

namespace aloha_noma {

namespace {

constexpr std::uint64_t philox_m0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t philox_m1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t philox_w0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t philox_w1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(prod >> 64);
    lo = static_cast<std::uint64_t>(prod);
}

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t avalanche64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

} // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) {
    std::uint64_t c0 = counter[0], c1 = counter[1], c2 = counter[2], c3 = counter[3];
    std::uint64_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        if (round != 0) {
            k0 += philox_w0;
            k1 += philox_w1;
        }
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(philox_m0, c0, hi0, lo0);
        mulhilo(philox_m1, c2, hi1, lo1);
        c0 = hi1 ^ c1 ^ k0;
        c1 = lo1;
        c2 = hi0 ^ c3 ^ k1;
        c3 = lo0;
    }
    return {c0, c1, c2, c3};
}

void RngStream::refill() {
    block_ = philox4x64(counter_, {seed_, stream_id_});
    for (int i = 0; i < 4; ++i) {
        if (++counter_[i] != 0)
            break;
    }
    buffered_ = 4;
}

std::uint64_t RngStream::next_u64() {
    if (buffered_ == 0)
        refill();
    const std::uint64_t v = block_[4 - buffered_];
    --buffered_;
    return v;
}

double RngStream::uniform01() {
    // 53 random bits plus a half-ulp offset keeps the value inside (0, 1).
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

std::uint64_t RngStream::below(std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("RngStream::below: n must be nonzero");
    // Lemire's multiply-shift with rejection of the biased low range.
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        const std::uint64_t cutoff = (0 - n) % n;
        while (lo < cutoff) {
            m = static_cast<unsigned __int128>(next_u64()) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

bool RngStream::bernoulli(double p) { return uniform01() < p; }

RngStream RngStream::substream(std::uint64_t i) const {
    // The odd multiplier keeps distinct slots at distinct inputs of the
    // bijective mix, so sibling ids never coincide.
    return RngStream(seed_, avalanche64(stream_id_ ^ (philox_w0 * (i + 1))));
}

double standard_normal_draw(RngStream& rng) { return standard_normal_quantile(rng.uniform01()); }

} // namespace aloha_noma
