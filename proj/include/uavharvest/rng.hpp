#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Substreams: the 64-bit seed is the key; counter words 2..3 hold the
// stream id and words 0..1 count blocks, so (seed, stream_id) pairs never
// share a block.

#include <array>
#include <cstdint>
#include <limits>

namespace uavh {

struct RngConfig {
    std::uint64_t seed = 20240601;
    std::uint64_t stream_id = 0;
};

class Philox4x32 {
public:
    using result_type = std::uint64_t;

    explicit Philox4x32(const RngConfig& cfg)
        : key_{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32)},
          stream_{static_cast<std::uint32_t>(cfg.stream_id), static_cast<std::uint32_t>(cfg.stream_id >> 32)} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (pos_ == 2) refill();
        const result_type v = (static_cast<result_type>(out_[2 * pos_ + 1]) << 32) | out_[2 * pos_];
        ++pos_;
        return v;
    }

    // Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
        constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
        constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += w0;
            key[1] += w1;
        }
        return ctr;
    }

private:
    void refill() {
        out_ = block({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32), stream_[0],
                      stream_[1]},
                     key_);
        ++counter_;
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 2> stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> out_{};
    int pos_ = 2;
};

}  // namespace uavh
