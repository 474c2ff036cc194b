#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fcmix {

/// SplitMix64 step; used to derive well-separated substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded random stream. Uniform and normal variates are generated from the
/// raw 64-bit output with explicit bit arithmetic, so two runs with the same
/// seed produce identical draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Independent stream derived from (seed, stream_id).
    static Rng substream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64(s);
        s = seed ^ (0xd1342543de82ef95ULL * (stream_id + 1));
        std::uint64_t b = splitmix64(s);
        return Rng(a ^ b);
    }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0,1) with 53-bit resolution.
    double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; second variate is cached.
    double normal() {
        if (have_spare_) { have_spare_ = false; return spare_; }
        double u1 = 1.0 - uniform(); // (0,1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace fcmix
