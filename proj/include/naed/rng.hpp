#pragma once

#include <cmath>
#include <cstdint>

namespace naed {

// Deterministic random source. std::mt19937_64 is specified bit-exactly but
// the standard distributions are not, so the draw methods are implemented
// here to keep datasets and checkpoints byte-reproducible across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(nonzero(splitmix(seed ^ kGolden))) {}

    // Derive an independent stream, e.g. one per dataset sample.
    Rng derive(std::uint64_t streamId) const {
        Rng r(0);
        r.state_ = nonzero(splitmix(state_ ^ splitmix(streamId + kGolden)));
        return r;
    }

    std::uint64_t next() {
        // xorshift* variant seeded through splitmix; passes the usual
        // empirical batteries and is trivially portable.
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    // Uniform on [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Inclusive integer range.
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        // modulo bias is < 2^-50 for the spans used here
        return lo + static_cast<std::int64_t>(next() % span);
    }

    // Standard normal via polar Box-Muller (deterministic, no libm tables).
    double gaussian() {
        if (haveSpare_) {
            haveSpare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        haveSpare_ = true;
        return u * f;
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t splitmix(std::uint64_t x) {
        x += kGolden;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // xorshift must never sit at the zero fixed point
    static std::uint64_t nonzero(std::uint64_t x) { return x ? x : kGolden; }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool haveSpare_ = false;
};

}  // namespace naed
