#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace svtree {

// Philox4x32-10 keyed by the run seed, one counter stream per path. Draw i of
// path j is a pure function of (seed, j, i), which is what makes sharded
// Monte-Carlo runs merge-order independent.
class Philox4x32 {
public:
    Philox4x32(std::uint64_t seed, std::uint64_t stream) {
        key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
        ctr_ = {0u, 0u, static_cast<std::uint32_t>(stream),
                static_cast<std::uint32_t>(stream >> 32)};
    }

    std::uint32_t next_u32() {
        if (have_ == 0) refill();
        return buf_[--have_];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // strictly inside (0, 1)
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static void round(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }

    void refill() {
        std::array<std::uint32_t, 4> c = ctr_;
        std::array<std::uint32_t, 2> k = key_;
        for (int r = 0; r < 10; ++r) {
            round(c, k);
            k[0] += kW0;
            k[1] += kW1;
        }
        buf_ = c;
        have_ = 4;
        if (++ctr_[0] == 0) ++ctr_[1];  // per-path 64-bit block counter
    }

    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> buf_{};
    int have_ = 0;
};

// Box-Muller on top of the counter stream; the spare value is cached so two
// normals cost one pair of uniforms.
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_uniform();
        const double u2 = rng_.next_uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        spare_ = rad * std::sin(ang);
        has_spare_ = true;
        return rad * std::cos(ang);
    }

    double uniform() { return rng_.next_uniform(); }

private:
    Philox4x32 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace svtree
