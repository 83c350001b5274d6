#pragma once

// Deterministic random streams for the simulation harness.
//
// Generator: xoshiro256++ seeded from a splitmix64 stream. Draw conventions are
// fixed so identical seeds replicate bit-exact trajectories across platforms
// and ports; the full contract lives in docs/rng.md.
//   uniform:  (x >> 11) * 2^-53, in [0, 1)
//   normal:   Box-Muller cosine branch, exactly two uniforms per call, no cache
//   lognormal(mean m, std s): moment-matched underlying normal,
//             sigma_n^2 = ln(1 + s^2/m^2), mu_n = ln(m) - sigma_n^2 / 2

#include <cstdint>

namespace rewardex::rng {

// splitmix64 finalizer; also the building block for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Stateless per-replication seed: chains the finalizer over the master seed,
// the dynamics-cell index, and the replication index. Callers must keep
// parameters that only post-process trajectories (e.g. satisfaction
// sensitivity) out of the cell index so they cannot perturb the draw stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t rep) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ (cell + 0x9E3779B97F4A7C15ull));
    h = mix64(h ^ (rep + 0xD1B54A32D192ED03ull));
    return h;
}

class xoshiro256pp {
public:
    explicit xoshiro256pp(std::uint64_t seed) {
        // splitmix64 stream expansion of the 64-bit seed into 256-bit state.
        std::uint64_t sm = seed;
        for (auto& word : s_) {
            sm += 0x9E3779B97F4A7C15ull;
            std::uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal; consumes exactly two uniforms.
    double normal();

    // Lognormal with the given mean and standard deviation of the variate.
    double lognormal(double mean, double stddev);

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

}  // namespace rewardex::rng
